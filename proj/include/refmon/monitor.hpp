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

#ifndef REFMON_MONITOR_HPP_
#define REFMON_MONITOR_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "refmon/config.hpp"
#include "refmon/domain.hpp"
#include "refmon/relation.hpp"

namespace refmon {

/// Verdict for an action set against the closed policy:
///   empty            -> Unspecified (outside the monitored sub-network)
///   disjoint from SP -> Fail
///   subset of SP     -> Pass
///   split            -> Conflict
inline Verdict verdict_for(const ValueSet& actions, const SecurityPolicy& sp) {
  if (actions.empty()) return Verdict::Unspecified;
  if (!intersects(actions, sp.actions)) return Verdict::Fail;
  if (subset_of(actions, sp.actions)) return Verdict::Pass;
  return Verdict::Conflict;
}

/// The abstract (user, service) actions a level-`level` event stands for:
/// the image of the event under the composed abstraction relation.
inline ValueSet abstract_actions(const RepresentationSet& reps, const Value& event,
                                 int level) {
  return image(reps.to_actions.at(static_cast<std::size_t>(level)), event);
}

inline ValueSet abstract_actions(const RepresentationSet& reps, const Event& event) {
  return abstract_actions(reps, event.value(), event.level());
}

inline Verdict classify(const RepresentationSet& reps, const SecurityPolicy& sp,
                        const Value& event, int level) {
  return verdict_for(abstract_actions(reps, event, level), sp);
}

inline Verdict classify(const RepresentationSet& reps, const SecurityPolicy& sp,
                        const Event& event) {
  return classify(reps, sp, event.value(), event.level());
}

/// Per-level journals: everything observed, and the warned subsets.
/// FAIL and CONFLICT are disjoint and contained in Monitored at every level;
/// level 0 never holds conflicts.
struct Journals {
  std::array<ValueSet, 4> monitored{};
  std::array<ValueSet, 4> fail{};
  std::array<ValueSet, 4> conflict{};

  bool operator==(const Journals&) const = default;
};

struct ObservedPair {
  Value event;
  Verdict status;
};

/// Last event/status pair picked per level; empty until first queried.
using ObservedState = std::array<std::optional<ObservedPair>, 4>;

/// Outcome of one observation: the event, its verdict, its abstract action
/// set, and the size of its representative set at each level (diagnostics).
struct VerdictRecord {
  Event event;
  Verdict verdict;
  ValueSet actions;
  std::array<std::size_t, 4> representative_counts{};
};

inline std::string render_actions(const ValueSet& actions) {
  if (actions.empty()) return "-";
  std::string out;
  for (const auto& a : actions) {
    if (!out.empty()) out += ',';
    out += a.first().to_string();
    out += "->";
    out += a.second().to_string();
  }
  return out;
}

/// The running monitor. Feeds network-level events through the abstraction
/// relations and journals them at all four levels at once, so the cross-level
/// invariants stay checkable at runtime. Events outside the monitored
/// sub-network are counted and otherwise ignored.
///
/// Single writer: observe() and record_observation() mutate; everything else
/// is safe to read concurrently between mutations.
class Monitor {
 public:
  Monitor(RepresentationSet reps, SecurityPolicy policy)
      : reps_(std::move(reps)), policy_(std::move(policy)) {}

  const RepresentationSet& representations() const { return reps_; }
  const SecurityPolicy& policy() const { return policy_; }
  const Journals& journals() const { return journals_; }
  const ObservedState& observed() const { return observed_; }
  std::uint64_t ignored() const { return ignored_; }

  /// Immutable copy of all twelve journal sets.
  Journals snapshot() const { return journals_; }

  VerdictRecord observe(const Event& e3) {
    if (e3.level() != 3)
      throw std::invalid_argument("observe expects a network-level event");

    // Representative sets, stepwise from the observed event down to actions.
    std::array<ValueSet, 4> representatives;
    representatives[3] = ValueSet{e3.value()};
    for (int i = 3; i >= 1; --i)
      representatives[i - 1] = image(reps_.to_abstract[i], representatives[i]);

    VerdictRecord record{e3, Verdict::Unspecified, abstract_actions(reps_, e3), {}};
    for (int i = 0; i < 4; ++i)
      record.representative_counts[i] = representatives[i].size();
    record.verdict = verdict_for(record.actions, policy_);

    if (record.verdict == Verdict::Unspecified) {
      ++ignored_;
      return record;
    }

    // Each representative is journaled at its own level, judged by its own
    // action set.
    for (int i = 0; i < 4; ++i) {
      for (const Value& rep : representatives[i]) {
        journals_.monitored[i].insert(rep);
        switch (classify(reps_, policy_, rep, i)) {
          case Verdict::Fail:
            journals_.fail[i].insert(rep);
            break;
          case Verdict::Conflict:
            journals_.conflict[i].insert(rep);
            break;
          default:
            break;
        }
      }
    }
    return record;
  }

  void record_observation(int level, const Value& event, Verdict status) {
    observed_.at(static_cast<std::size_t>(level)) = ObservedPair{event, status};
  }

 private:
  RepresentationSet reps_;
  SecurityPolicy policy_;
  Journals journals_;
  ObservedState observed_;
  std::uint64_t ignored_ = 0;
};

/// Parses one event-log line: `<src-dotted-quad> <dst-dotted-quad> <dst-port>`.
/// Returns nothing for blank or comment lines; throws ParseError on anything
/// else that is not a well-formed event.
inline std::optional<Event> parse_event_log_line(std::string_view line) {
  auto tokens = detail::split_tokens(detail::strip_comment(line));
  if (tokens.empty()) return std::nullopt;
  if (tokens.size() != 3)
    throw ParseError("expected '<src> <dst> <port>'");
  return Event::packet(parse_ipv4(tokens[0]), parse_ipv4(tokens[1]),
                       parse_port(tokens[2]));
}

}  // namespace refmon

#endif  // REFMON_MONITOR_HPP_
