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

#ifndef REFMON_DOMAIN_HPP_
#define REFMON_DOMAIN_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "refmon/relation.hpp"

namespace refmon {

/// Error raised while reading configuration or event text. Carries the
/// 1-based input line when known (line() < 0 means "no line context").
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::string message)
      : std::runtime_error(message), line_(-1), raw_(std::move(message)) {}
  ParseError(int line, std::string message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line),
        raw_(std::move(message)) {}

  int line() const { return line_; }
  const std::string& raw_message() const { return raw_; }

 private:
  int line_;
  std::string raw_;
};

/// A 32-bit network interface address, rendered as a dotted quad.
struct InterfaceAddr {
  std::uint32_t bits = 0;

  friend auto operator<=>(const InterfaceAddr&, const InterfaceAddr&) = default;

  std::string to_string() const { return dotted_quad(bits); }
};

/// Parses a strict dotted quad: four decimal octets 0..255, no leading
/// zeros, joined by '.'. The value is ((a*256+b)*256+c)*256+d.
inline InterfaceAddr parse_ipv4(std::string_view text) {
  std::uint32_t bits = 0;
  int octets = 0;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = text.find('.', pos);
    std::string_view part = text.substr(pos, dot == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : dot - pos);
    if (part.empty() || part.size() > 3)
      throw ParseError("bad octet '" + std::string(part) + "' in address '" +
                       std::string(text) + "'");
    std::uint32_t octet = 0;
    for (char c : part) {
      if (c < '0' || c > '9')
        throw ParseError("bad octet '" + std::string(part) + "' in address '" +
                         std::string(text) + "'");
      octet = octet * 10 + static_cast<std::uint32_t>(c - '0');
    }
    if (part.size() > 1 && part[0] == '0')
      throw ParseError("octet '" + std::string(part) +
                       "' has a leading zero in address '" + std::string(text) + "'");
    if (octet > 255)
      throw ParseError("octet '" + std::string(part) + "' out of range in address '" +
                       std::string(text) + "'");
    bits = bits * 256 + octet;
    ++octets;
    if (dot == std::string_view::npos) break;
    if (octets == 4)
      throw ParseError("malformed address '" + std::string(text) + "'");
    pos = dot + 1;
  }
  if (octets != 4) throw ParseError("malformed address '" + std::string(text) + "'");
  return InterfaceAddr{bits};
}

inline std::uint16_t parse_port(std::string_view token) {
  if (token.empty() || token.size() > 5)
    throw ParseError("bad port '" + std::string(token) + "'");
  std::uint32_t n = 0;
  for (char c : token) {
    if (c < '0' || c > '9') throw ParseError("bad port '" + std::string(token) + "'");
    n = n * 10 + static_cast<std::uint32_t>(c - '0');
  }
  if (n > 65535) throw ParseError("port '" + std::string(token) + "' out of range");
  return static_cast<std::uint16_t>(n);
}

/// Entity names are nonempty and drawn from [a-z0-9_.-].
inline bool is_valid_entity_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
              c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

enum class Verdict { Pass, Fail, Conflict, Unspecified };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Conflict: return "CONFLICT";
    case Verdict::Unspecified: return "UNSPECIFIED";
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& os, Verdict v) {
  return os << to_string(v);
}

/// An observed communication, tagged with its stack level:
///   level 0  (user, service)                     - the policy's actions
///   level 1  (terminal server, daemon)           - application layer
///   level 2  (src host, (dst host, dst port))    - transport layer
///   level 3  (src addr, (dst addr, dst port))    - network layer
/// No level carries a source port.
class Event {
 public:
  static Event action(std::string_view user, std::string_view service) {
    return Event(0, Value::pair(Value::symbol(user), Value::symbol(service)));
  }
  static Event daemon_message(std::string_view terminal_server, std::string_view daemon) {
    return Event(1, Value::pair(Value::symbol(terminal_server), Value::symbol(daemon)));
  }
  static Event host_request(std::string_view src_host, std::string_view dst_host,
                            std::uint16_t dst_port) {
    return Event(2, Value::pair(Value::symbol(src_host),
                                Value::pair(Value::symbol(dst_host),
                                            Value::port(dst_port))));
  }
  static Event packet(InterfaceAddr src, InterfaceAddr dst, std::uint16_t dst_port) {
    return Event(3, Value::pair(Value::addr(src.bits),
                                Value::pair(Value::addr(dst.bits),
                                            Value::port(dst_port))));
  }

  /// Re-tags a raw value, checking it has the field shape of the level.
  static std::optional<Event> from_value(int level, const Value& v) {
    auto sym_pair = [](const Value& p) {
      return p.is_pair() && p.first().is_symbol() && p.second().is_symbol();
    };
    switch (level) {
      case 0:
      case 1:
        if (sym_pair(v)) return Event(level, v);
        return std::nullopt;
      case 2:
        if (v.is_pair() && v.first().is_symbol() && v.second().is_pair() &&
            v.second().first().is_symbol() && v.second().second().is_port())
          return Event(level, v);
        return std::nullopt;
      case 3:
        if (v.is_pair() && v.first().is_addr() && v.second().is_pair() &&
            v.second().first().is_addr() && v.second().second().is_port())
          return Event(level, v);
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  int level() const { return level_; }
  const Value& value() const { return value_; }

  /// Stable text form: `USER->SERVICE` (level 0), `TS>DAEMON` (level 1),
  /// `SRC>DST:PORT` (levels 2 and 3).
  std::string to_string() const {
    switch (level_) {
      case 0:
        return value_.first().to_string() + "->" + value_.second().to_string();
      case 1:
        return value_.first().to_string() + ">" + value_.second().to_string();
      default:
        return value_.first().to_string() + ">" +
               value_.second().first().to_string() + ":" +
               value_.second().second().to_string();
    }
  }

  auto operator<=>(const Event&) const = default;

  friend std::ostream& operator<<(std::ostream& os, const Event& e) {
    return os << e.to_string();
  }

 private:
  Event(int level, Value v) : level_(level), value_(std::move(v)) {}

  int level_;
  Value value_;
};

/// Renders a raw event value at a level, falling back to the generic value
/// form when the shape does not match.
inline std::string render_event(int level, const Value& v) {
  if (auto e = Event::from_value(level, v)) return e->to_string();
  return v.to_string();
}

/// The described part of the network: the entity sets events are built from.
/// Terminal servers are a subset of the daemons.
struct KnownNetwork {
  std::set<std::string> users;
  std::set<std::string> services;
  std::set<std::string> daemons;
  std::set<std::string> terminal_servers;
  std::set<std::string> hosts;
  std::set<std::uint16_t> ports;
  std::set<InterfaceAddr> interfaces;

  bool operator==(const KnownNetwork&) const = default;
};

inline ValueSet symbol_set(const std::set<std::string>& names) {
  ValueSet out;
  for (const auto& n : names) out.insert(Value::symbol(n));
  return out;
}

inline ValueSet port_set(const std::set<std::uint16_t>& ports) {
  ValueSet out;
  for (auto p : ports) out.insert(Value::port(p));
  return out;
}

inline ValueSet addr_set(const std::set<InterfaceAddr>& addrs) {
  ValueSet out;
  for (auto a : addrs) out.insert(Value::addr(a.bits));
  return out;
}

/// The full event universe the configuration describes at one level:
///   level 0: users x services
///   level 1: terminal servers x daemons
///   level 2: hosts x (hosts x ports)
///   level 3: interfaces x (interfaces x ports)
inline ValueSet known_events(const KnownNetwork& kn, int level) {
  ValueSet out;
  switch (level) {
    case 0:
      for (const auto& u : kn.users)
        for (const auto& s : kn.services)
          out.insert(Value::pair(Value::symbol(u), Value::symbol(s)));
      return out;
    case 1:
      for (const auto& t : kn.terminal_servers)
        for (const auto& d : kn.daemons)
          out.insert(Value::pair(Value::symbol(t), Value::symbol(d)));
      return out;
    case 2:
      for (const auto& h1 : kn.hosts)
        for (const auto& h2 : kn.hosts)
          for (auto p : kn.ports)
            out.insert(Value::pair(Value::symbol(h1),
                                   Value::pair(Value::symbol(h2), Value::port(p))));
      return out;
    case 3:
      for (auto a1 : kn.interfaces)
        for (auto a2 : kn.interfaces)
          for (auto p : kn.ports)
            out.insert(Value::pair(Value::addr(a1.bits),
                                   Value::pair(Value::addr(a2.bits), Value::port(p))));
      return out;
    default:
      throw std::invalid_argument("level out of range");
  }
}

/// The closed policy: the set of authorized (user, service) actions.
/// Anything outside it is forbidden.
struct SecurityPolicy {
  ValueSet actions;

  bool contains(const Value& action) const { return actions.contains(action); }
  bool operator==(const SecurityPolicy&) const = default;
};

}  // namespace refmon

#endif  // REFMON_DOMAIN_HPP_
