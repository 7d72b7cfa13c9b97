/*
 * Copyright 2026 The refmon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef REFMON_OBSERVER_HPP_
#define REFMON_OBSERVER_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "refmon/config.hpp"
#include "refmon/domain.hpp"
#include "refmon/monitor.hpp"
#include "refmon/relation.hpp"

namespace refmon {

/// Looks up the journaled status of a monitored event and records it as the
/// level's observed pair. The event must already be monitored at its level.
inline std::pair<Event, Verdict> get_status(Monitor& monitor, const Event& event) {
  int level = event.level();
  const Journals& journals = monitor.journals();
  if (!journals.monitored.at(static_cast<std::size_t>(level)).contains(event.value()))
    throw std::invalid_argument("event not monitored");
  Verdict status = Verdict::Pass;
  if (journals.fail[level].contains(event.value()))
    status = Verdict::Fail;
  else if (journals.conflict[level].contains(event.value()))
    status = Verdict::Conflict;
  monitor.record_observation(level, event.value(), status);
  return {event, status};
}

struct TraceEntry {
  int level;
  Event event;
  Verdict status;
  ValueSet actions;
};

/// One representative chain from a network-level event down to an action,
/// level 3 first. Adjacent entries are related by the abstraction relation.
struct TraceRecord {
  std::vector<TraceEntry> chain;
};

/// Builds the chain e3 -> e2 -> e1 -> e0, picking at each step the
/// lexicographically least representative that still reaches an action, so
/// identical inputs always give identical chains. Each entry carries that
/// event's own verdict and action set.
inline TraceRecord trace(const RepresentationSet& reps, const SecurityPolicy& sp,
                         const Event& e3) {
  if (e3.level() != 3)
    throw std::invalid_argument("trace expects a network-level event");
  if (abstract_actions(reps, e3).empty())
    throw std::invalid_argument("event outside monitored sub-network");

  TraceRecord out;
  Value current = e3.value();
  for (int level = 3; level >= 0; --level) {
    ValueSet actions = abstract_actions(reps, current, level);
    out.chain.push_back({level, Event::from_value(level, current).value(),
                         verdict_for(actions, sp), actions});
    if (level == 0) break;
    const Value* next = nullptr;
    for (const Value& candidate : image(reps.to_abstract[level], current)) {
      if (!abstract_actions(reps, candidate, level - 1).empty()) {
        next = &candidate;
        break;
      }
    }
    // A nonempty action set guarantees a continuable representative.
    if (next == nullptr) break;
    current = *next;
  }
  return out;
}

namespace detail {

inline void check_journal_shape(const Journals& j, const RepresentationSet& reps,
                                std::vector<Violation>& out) {
  for (int i = 0; i < 4; ++i) {
    ValueSet stray = set_difference(j.monitored[i], reps.known[i]);
    if (!stray.empty())
      out.push_back({"monitored-known", i,
                     "monitored events outside the known universe: " +
                         sample_events(stray, i)});
    ValueSet warned = set_union(j.fail[i], j.conflict[i]);
    ValueSet unmonitored = set_difference(warned, j.monitored[i]);
    if (!unmonitored.empty())
      out.push_back({"warned-subset", i,
                     "warned events missing from the monitored journal: " +
                         sample_events(unmonitored, i)});
    ValueSet both = set_intersection(j.fail[i], j.conflict[i]);
    if (!both.empty())
      out.push_back({"warned-disjoint", i,
                     "events in both FAIL and CONFLICT: " + sample_events(both, i)});
  }
  if (!j.conflict[0].empty())
    out.push_back({"conflict0-empty", 0,
                   "action-level conflicts are impossible: " +
                       sample_events(j.conflict[0], 0)});
  for (int i = 1; i < 4; ++i) {
    ValueSet abstracted = image(reps.to_abstract[i], j.monitored[i]);
    ValueSet escaped = set_difference(abstracted, j.monitored[i - 1]);
    if (!escaped.empty())
      out.push_back({"monitored-chain", i,
                     "abstract representatives missing one level up: " +
                         sample_events(escaped, i - 1)});
  }
}

inline void check_journal_properties(const Journals& j, const RepresentationSet& reps,
                                     const SecurityPolicy& sp,
                                     std::vector<Violation>& out) {
  for (int i = 0; i < 4; ++i) {
    ValueSet undetected =
        set_difference(set_difference(j.monitored[i], j.fail[i]), j.conflict[i]);
    ValueSet undetected_actions = image(reps.to_actions[i], undetected);
    ValueSet forbidden = set_difference(undetected_actions, sp.actions);
    if (!forbidden.empty())
      out.push_back({"property1-correctness", i,
                     "undetected events reach forbidden actions: " +
                         sample_events(forbidden, 0)});

    ValueSet fail_actions = image(reps.to_actions[i], j.fail[i]);
    ValueSet allowed = set_intersection(fail_actions, sp.actions);
    if (!allowed.empty())
      out.push_back({"property2-fail", i,
                     "FAIL journal reaches authorized actions: " +
                         sample_events(allowed, 0)});

    for (const Value& event : j.conflict[i]) {
      ValueSet actions = abstract_actions(reps, event, i);
      if (subset_of(actions, sp.actions))
        out.push_back({"property2-conflict", i,
                       "CONFLICT event maps entirely inside SP: " +
                           render_event(i, event)});
      if (!intersects(actions, sp.actions))
        out.push_back({"assertion2-conflict", i,
                       "CONFLICT event maps entirely outside SP: " +
                           render_event(i, event)});
    }
  }
}

inline void check_observed_state(const Journals& j, const ObservedState& obs,
                                 const RepresentationSet& reps,
                                 std::vector<Violation>& out) {
  for (int i = 0; i < 4; ++i) {
    if (!obs[i].has_value() || j.monitored[i].empty()) continue;
    const auto& [event, status] = *obs[i];
    bool in_fail = j.fail[i].contains(event);
    bool in_conflict = j.conflict[i].contains(event);
    bool in_pass = j.monitored[i].contains(event) && !in_fail && !in_conflict;
    bool consistent = (status == Verdict::Fail && in_fail) ||
                      (status == Verdict::Conflict && in_conflict) ||
                      (status == Verdict::Pass && in_pass);
    if (!consistent)
      out.push_back({"observed-status", i,
                     "observed status " + std::string(to_string(status)) +
                         " disagrees with the journals for " + render_event(i, event)});
  }
  for (int i = 1; i < 4; ++i) {
    if (!obs[i].has_value() || !obs[i - 1].has_value()) continue;
    if (!reps.to_abstract[i].contains(obs[i]->event, obs[i - 1]->event))
      out.push_back({"observed-chain", i,
                     "observed events are not related across levels: " +
                         render_event(i, obs[i]->event) + " vs " +
                         render_event(i - 1, obs[i - 1]->event)});
  }
}

inline void check_assertions(const Journals& j, const RepresentationSet& reps,
                             const SecurityPolicy& sp, std::vector<Violation>& out) {
  for (int i = 1; i < 4; ++i) {
    for (const Value& event : j.monitored[i]) {
      Verdict verdict = classify(reps, sp, event, i);
      if (verdict != Verdict::Pass && verdict != Verdict::Fail) continue;
      for (const Value& rep : image(reps.to_abstract[i], event)) {
        ValueSet rep_actions = abstract_actions(reps, rep, i - 1);
        // Representatives outside the monitored sub-network carry no status.
        if (rep_actions.empty()) continue;
        Verdict rep_verdict = verdict_for(rep_actions, sp);
        if (verdict == Verdict::Pass && rep_verdict != Verdict::Pass)
          out.push_back({"assertion1-pass", i,
                         render_event(i, event) + " passes but " +
                             render_event(i - 1, rep) + " does not"});
        if (verdict == Verdict::Fail && rep_verdict != Verdict::Fail)
          out.push_back({"assertion2-fail", i,
                         render_event(i, event) + " fails but " +
                             render_event(i - 1, rep) + " does not"});
      }
    }
  }
}

}  // namespace detail

/// Evaluates every checkable invariant over a journal snapshot: journal
/// shape per level, monitor correctness (undetected events only reach
/// authorized actions), monitor completeness (warned events genuinely
/// violate or conflict), observed-variable consistency, and the cross-level
/// status propagation assertions. Empty result means everything holds.
inline std::vector<Violation> check_invariants(const Journals& journals,
                                               const ObservedState& observed,
                                               const RepresentationSet& reps,
                                               const SecurityPolicy& sp) {
  std::vector<Violation> out;
  detail::check_journal_shape(journals, reps, out);
  detail::check_journal_properties(journals, reps, sp, out);
  detail::check_observed_state(journals, observed, reps, out);
  detail::check_assertions(journals, reps, sp, out);
  return out;
}

inline std::vector<Violation> check_invariants(const Monitor& monitor) {
  return check_invariants(monitor.journals(), monitor.observed(),
                          monitor.representations(), monitor.policy());
}

/// Classifies every event of a level's universe: the full known universe in
/// Strict mode, the monitored sub-network in Relaxed mode. Sorted, suitable
/// as a firewall-style rule table.
inline std::vector<std::pair<Event, Verdict>> enumerate_verdicts(
    const RepresentationSet& reps, const SecurityPolicy& sp, int level,
    ValidationMode mode) {
  const ValueSet universe =
      mode == ValidationMode::Strict
          ? reps.known.at(static_cast<std::size_t>(level))
          : domain_of(reps.to_actions.at(static_cast<std::size_t>(level)));
  std::vector<std::pair<Event, Verdict>> out;
  out.reserve(universe.size());
  for (const Value& v : universe)
    out.emplace_back(Event::from_value(level, v).value(), classify(reps, sp, v, level));
  return out;
}

}  // namespace refmon

#endif  // REFMON_OBSERVER_HPP_
