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

#ifndef REFMON_CONFIG_HPP_
#define REFMON_CONFIG_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "refmon/domain.hpp"
#include "refmon/relation.hpp"

namespace refmon {

/// The declarative picture of the network the monitor enforces on:
/// the known entity sets, the wiring relations between them, and the policy.
///
/// Relation shapes:
///   used_by  terminal server -> user
///   provide  daemon          -> service
///   hosting  host            -> daemon
///   run_on   (host, port)    -> daemon      (a function: one daemon per slot)
///   addr     interface       -> host        (a total function)
struct Configuration {
  KnownNetwork known;
  Relation used_by;
  Relation provide;
  Relation hosting;
  Relation run_on;
  Relation addr;
  SecurityPolicy policy;

  bool operator==(const Configuration&) const = default;
};

namespace detail {

inline std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
      ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  std::size_t hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

}  // namespace detail

/// Parses the line-oriented configuration format. One directive per line,
/// `#` starts a comment, tokens are whitespace-separated:
///
///   user <name>                      service <name>
///   daemon <name>                    terminal_server <daemon-name>
///   host <name>                      port <0..65535>
///   interface <dotted-quad> <host>   used_by <terminal-server> <user>
///   provide <daemon> <service>       hosting <host> <daemon>
///   run_on <host> <port> <daemon>    allow <user> <service>
///
/// Declarations may appear in any order; references are resolved after a
/// full pass. Duplicate declarations are idempotent. Binding two daemons to
/// one (host, port) slot or one interface to two hosts is an error.
inline Configuration parse_config(std::string_view text) {
  Configuration cfg;

  struct Pending {
    int line;
    std::vector<std::string> tokens;
  };
  std::vector<Pending> terminal_lines;
  std::vector<Pending> reference_lines;

  auto expect_name = [](int line, const std::string& token) {
    if (!is_valid_entity_name(token))
      throw ParseError(line, "invalid name '" + token + "'");
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    ++line_no;
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;

    auto tokens = detail::split_tokens(detail::strip_comment(raw));
    if (tokens.empty()) continue;
    const std::string& kw = tokens[0];

    auto need = [&](std::size_t args) {
      if (tokens.size() != args + 1)
        throw ParseError(line_no, "'" + kw + "' expects " + std::to_string(args) +
                                      " argument(s)");
    };

    if (kw == "user" || kw == "service" || kw == "daemon" || kw == "host") {
      need(1);
      expect_name(line_no, tokens[1]);
      if (kw == "user") cfg.known.users.insert(tokens[1]);
      else if (kw == "service") cfg.known.services.insert(tokens[1]);
      else if (kw == "daemon") cfg.known.daemons.insert(tokens[1]);
      else cfg.known.hosts.insert(tokens[1]);
    } else if (kw == "port") {
      need(1);
      try {
        cfg.known.ports.insert(parse_port(tokens[1]));
      } catch (const ParseError& e) {
        throw ParseError(line_no, e.raw_message());
      }
    } else if (kw == "interface") {
      need(2);
      expect_name(line_no, tokens[2]);
      try {
        cfg.known.interfaces.insert(parse_ipv4(tokens[1]));
      } catch (const ParseError& e) {
        throw ParseError(line_no, e.raw_message());
      }
      reference_lines.push_back({line_no, tokens});
    } else if (kw == "terminal_server") {
      need(1);
      expect_name(line_no, tokens[1]);
      terminal_lines.push_back({line_no, tokens});
    } else if (kw == "used_by" || kw == "provide" || kw == "hosting" || kw == "allow") {
      need(2);
      expect_name(line_no, tokens[1]);
      expect_name(line_no, tokens[2]);
      reference_lines.push_back({line_no, tokens});
    } else if (kw == "run_on") {
      need(3);
      expect_name(line_no, tokens[1]);
      expect_name(line_no, tokens[3]);
      try {
        parse_port(tokens[2]);
      } catch (const ParseError& e) {
        throw ParseError(line_no, e.raw_message());
      }
      reference_lines.push_back({line_no, tokens});
    } else {
      throw ParseError(line_no, "unknown directive '" + kw + "'");
    }
  }

  for (const auto& [line, tokens] : terminal_lines) {
    if (!cfg.known.daemons.contains(tokens[1]))
      throw ParseError(line, "unknown daemon '" + tokens[1] + "'");
    cfg.known.terminal_servers.insert(tokens[1]);
  }

  auto require = [](int line, const std::set<std::string>& names,
                    const std::string& name, const char* kind) {
    if (!names.contains(name))
      throw ParseError(line, std::string("unknown ") + kind + " '" + name + "'");
  };

  for (const auto& [line, tokens] : reference_lines) {
    const std::string& kw = tokens[0];
    if (kw == "used_by") {
      require(line, cfg.known.terminal_servers, tokens[1], "terminal server");
      require(line, cfg.known.users, tokens[2], "user");
      cfg.used_by.insert(Value::symbol(tokens[1]), Value::symbol(tokens[2]));
    } else if (kw == "provide") {
      require(line, cfg.known.daemons, tokens[1], "daemon");
      require(line, cfg.known.services, tokens[2], "service");
      cfg.provide.insert(Value::symbol(tokens[1]), Value::symbol(tokens[2]));
    } else if (kw == "hosting") {
      require(line, cfg.known.hosts, tokens[1], "host");
      require(line, cfg.known.daemons, tokens[2], "daemon");
      cfg.hosting.insert(Value::symbol(tokens[1]), Value::symbol(tokens[2]));
    } else if (kw == "run_on") {
      require(line, cfg.known.hosts, tokens[1], "host");
      std::uint16_t port = parse_port(tokens[2]);
      if (!cfg.known.ports.contains(port))
        throw ParseError(line, "unknown port '" + tokens[2] + "'");
      require(line, cfg.known.daemons, tokens[3], "daemon");
      Value slot = Value::pair(Value::symbol(tokens[1]), Value::port(port));
      ValueSet bound = image(cfg.run_on, slot);
      if (!bound.empty() && !bound.contains(Value::symbol(tokens[3])))
        throw ParseError(line, "duplicate daemon on (" + tokens[1] + "," +
                                   tokens[2] + ")");
      cfg.run_on.insert(slot, Value::symbol(tokens[3]));
    } else if (kw == "interface") {
      require(line, cfg.known.hosts, tokens[2], "host");
      Value iface = Value::addr(parse_ipv4(tokens[1]).bits);
      ValueSet bound = image(cfg.addr, iface);
      if (!bound.empty() && !bound.contains(Value::symbol(tokens[2])))
        throw ParseError(line, "interface " + tokens[1] + " bound to two hosts");
      cfg.addr.insert(iface, Value::symbol(tokens[2]));
    } else {  // allow
      require(line, cfg.known.users, tokens[1], "user");
      require(line, cfg.known.services, tokens[2], "service");
      cfg.policy.actions.insert(
          Value::pair(Value::symbol(tokens[1]), Value::symbol(tokens[2])));
    }
  }

  return cfg;
}

/// Canonical text form: declarations first, then bindings, each group sorted.
/// parse_config(render_config(cfg)) == cfg for any parsed configuration.
inline std::string render_config(const Configuration& cfg) {
  std::string out;
  auto emit = [&out](std::string_view directive, std::string_view rest) {
    out += directive;
    out += ' ';
    out += rest;
    out += '\n';
  };
  for (const auto& u : cfg.known.users) emit("user", u);
  for (const auto& s : cfg.known.services) emit("service", s);
  for (const auto& d : cfg.known.daemons) emit("daemon", d);
  for (const auto& t : cfg.known.terminal_servers) emit("terminal_server", t);
  for (const auto& h : cfg.known.hosts) emit("host", h);
  for (auto p : cfg.known.ports) emit("port", std::to_string(p));
  for (const auto& [iface, host] : cfg.addr)
    emit("interface", iface.to_string() + " " + host.to_string());
  for (const auto& [t, u] : cfg.used_by)
    emit("used_by", t.to_string() + " " + u.to_string());
  for (const auto& [d, s] : cfg.provide)
    emit("provide", d.to_string() + " " + s.to_string());
  for (const auto& [h, d] : cfg.hosting)
    emit("hosting", h.to_string() + " " + d.to_string());
  for (const auto& [slot, d] : cfg.run_on)
    emit("run_on", slot.first().to_string() + " " + slot.second().to_string() + " " +
                       d.to_string());
  for (const auto& a : cfg.policy.actions)
    emit("allow", a.first().to_string() + " " + a.second().to_string());
  return out;
}

/// The per-level abstraction relations derived from a configuration.
///
/// to_abstract[i] maps a level-i event to the level-(i-1) events it stands
/// for; to_abstract[0] is the identity on the action universe. to_actions[i]
/// is the composition down to actions: to_actions[i] =
/// to_abstract[i] ; to_actions[i-1]. known[i] caches the level-i universe.
struct RepresentationSet {
  std::array<Relation, 4> to_abstract;
  std::array<Relation, 4> to_actions;
  std::array<ValueSet, 4> known;
};

inline RepresentationSet build_representations(const Configuration& cfg) {
  RepresentationSet out;
  for (int i = 0; i < 4; ++i) out.known[i] = known_events(cfg.known, i);

  ValueSet terminal_values = symbol_set(cfg.known.terminal_servers);
  ValueSet port_values = port_set(cfg.known.ports);

  out.to_abstract[0] = identity(out.known[0]);
  out.to_abstract[1] = parallel(cfg.used_by, cfg.provide);
  out.to_abstract[2] =
      parallel(range_restrict(cfg.hosting, terminal_values), cfg.run_on);
  // Address valuation: ((a1,(a2,p)),(h1,(h2,p))) for all bindings and known
  // ports. With one interface per host this is a bijection onto the host view.
  out.to_abstract[3] = parallel(cfg.addr, parallel(cfg.addr, identity(port_values)));

  out.to_actions[0] = out.to_abstract[0];
  for (int i = 1; i < 4; ++i)
    out.to_actions[i] = compose(out.to_abstract[i], out.to_actions[i - 1]);
  return out;
}

enum class ValidationMode { Strict, Relaxed };

struct Violation {
  std::string rule;
  int level = -1;  // -1: not tied to one level
  std::string message;

  bool operator==(const Violation&) const = default;
};

inline std::string render_violation(const Violation& v) {
  std::string level = v.level < 0 ? "-" : std::to_string(v.level);
  return v.rule + "\t" + level + "\t" + v.message;
}

/// Validation outcome. Strict mode additionally requires the abstraction
/// relations to cover the full known universes (dom and ran of each
/// to_abstract[i] span KnownNet, so everything described is monitorable);
/// relaxed mode instead records the actually monitored sub-network per level.
struct ValidationReport {
  ValidationMode mode = ValidationMode::Relaxed;
  std::vector<Violation> violations;
  std::array<ValueSet, 4> monitored_domain;

  bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string sample_events(const ValueSet& values, int level,
                                 std::size_t limit = 3) {
  std::string out;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (n == limit) break;
    if (n > 0) out += ", ";
    out += render_event(level, v);
    ++n;
  }
  return out;
}

}  // namespace detail

inline ValidationReport validate(const Configuration& cfg, ValidationMode mode) {
  ValidationReport report;
  report.mode = mode;
  RepresentationSet reps = build_representations(cfg);

  auto add = [&report](std::string rule, int level, std::string message) {
    report.violations.push_back({std::move(rule), level, std::move(message)});
  };

  for (const auto& t : cfg.known.terminal_servers) {
    if (!cfg.known.daemons.contains(t))
      add("ts-subset-daemons", -1, "terminal server '" + t + "' is not a daemon");
  }

  ValueSet users = symbol_set(cfg.known.users);
  ValueSet services = symbol_set(cfg.known.services);
  ValueSet daemons = symbol_set(cfg.known.daemons);
  ValueSet terminals = symbol_set(cfg.known.terminal_servers);
  ValueSet hosts = symbol_set(cfg.known.hosts);
  ValueSet port_values = port_set(cfg.known.ports);
  ValueSet interfaces = addr_set(cfg.known.interfaces);

  auto typed = [&add](const char* name, const Relation& r, const ValueSet& left,
                      const ValueSet& right) {
    for (const auto& [a, b] : r) {
      if (!left.contains(a) || !right.contains(b))
        add("relation-typing", -1,
            std::string(name) + " pair (" + a.to_string() + "," + b.to_string() +
                ") references undeclared entities");
    }
  };
  typed("used_by", cfg.used_by, terminals, users);
  typed("provide", cfg.provide, daemons, services);
  typed("hosting", cfg.hosting, hosts, daemons);
  typed("addr", cfg.addr, interfaces, hosts);
  for (const auto& [slot, d] : cfg.run_on) {
    bool slot_ok = slot.is_pair() && hosts.contains(slot.first()) &&
                   port_values.contains(slot.second());
    if (!slot_ok || !daemons.contains(d))
      add("relation-typing", -1,
          "run_on pair (" + slot.to_string() + "," + d.to_string() +
              ") references undeclared entities");
  }

  if (!is_function(cfg.run_on)) {
    for (const auto& [slot, d] : cfg.run_on) {
      ValueSet bound = image(cfg.run_on, slot);
      if (bound.size() > 1 && *bound.begin() == d)
        add("run-on-function", -1,
            "slot " + slot.to_string() + " is bound to " +
                std::to_string(bound.size()) + " daemons");
    }
  }
  if (!is_function(cfg.addr)) {
    for (const auto& [iface, host] : cfg.addr) {
      ValueSet bound = image(cfg.addr, iface);
      if (bound.size() > 1 && *bound.begin() == host)
        add("addr-function", -1,
            "interface " + iface.to_string() + " is bound to " +
                std::to_string(bound.size()) + " hosts");
    }
  }
  ValueSet unbound = set_difference(interfaces, domain_of(cfg.addr));
  if (!unbound.empty())
    add("addr-total", -1,
        "interfaces without a host: " + detail::sample_events(unbound, -1));

  ValueSet stray_actions = set_difference(cfg.policy.actions, reps.known[0]);
  if (!stray_actions.empty())
    add("sp-within-known", 0,
        "SP outside the known action universe: " +
            detail::sample_events(stray_actions, 0));

  if (mode == ValidationMode::Strict) {
    for (int i = 1; i <= 3; ++i) {
      ValueSet missing_dom = set_difference(reps.known[i], domain_of(reps.to_abstract[i]));
      if (!missing_dom.empty())
        add("dom-coverage", i,
            std::to_string(missing_dom.size()) + " of " +
                std::to_string(reps.known[i].size()) +
                " known events unrepresented, e.g. " +
                detail::sample_events(missing_dom, i));
      ValueSet missing_ran =
          set_difference(reps.known[i - 1], range_of(reps.to_abstract[i]));
      if (!missing_ran.empty())
        add("ran-coverage", i,
            std::to_string(missing_ran.size()) + " of " +
                std::to_string(reps.known[i - 1].size()) +
                " abstract events unreachable, e.g. " +
                detail::sample_events(missing_ran, i - 1));
    }
  }

  for (int i = 0; i < 4; ++i)
    report.monitored_domain[i] = domain_of(reps.to_actions[i]);

  return report;
}

}  // namespace refmon

#endif  // REFMON_CONFIG_HPP_
