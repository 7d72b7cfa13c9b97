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

#ifndef REFMON_RELATION_HPP_
#define REFMON_RELATION_HPP_

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace refmon {

inline std::string dotted_quad(std::uint32_t bits) {
  std::string out;
  for (int shift = 24; shift >= 0; shift -= 8) {
    out += std::to_string((bits >> shift) & 0xffu);
    if (shift > 0) out += '.';
  }
  return out;
}

/// Interns an identifier so symbol values share one string per name.
inline const std::string* intern_symbol(std::string_view name) {
  static std::mutex mu;
  static std::unordered_set<std::string> pool;
  std::scoped_lock lock(mu);
  auto [it, inserted] = pool.insert(std::string(name));
  (void)inserted;
  return &*it;
}

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

/// An immutable atom a relation can hold: an interned identifier, a 16-bit
/// port, a 32-bit network address, or an ordered pair of values (pairs nest).
/// Ordering is total; pairs compare lexicographically.
class Value {
 public:
  enum class Kind { Symbol = 0, Port = 1, Addr = 2, Pair = 3 };

  Value() = delete;

  static Value symbol(std::string_view name) { return Value(intern_symbol(name)); }
  static Value port(std::uint16_t number) { return Value(number); }
  static Value addr(std::uint32_t bits) { return Value(bits); }
  static Value pair(Value first, Value second) {
    return Value(std::make_shared<const PairNode>(std::move(first), std::move(second)));
  }

  Kind kind() const { return static_cast<Kind>(rep_.index()); }
  bool is_symbol() const { return kind() == Kind::Symbol; }
  bool is_port() const { return kind() == Kind::Port; }
  bool is_addr() const { return kind() == Kind::Addr; }
  bool is_pair() const { return kind() == Kind::Pair; }

  std::string_view symbol_name() const {
    assert(is_symbol());
    return *std::get<0>(rep_);
  }
  std::uint16_t port_number() const {
    assert(is_port());
    return std::get<1>(rep_);
  }
  std::uint32_t addr_bits() const {
    assert(is_addr());
    return std::get<2>(rep_);
  }
  const Value& first() const {
    assert(is_pair());
    return std::get<3>(rep_)->first;
  }
  const Value& second() const {
    assert(is_pair());
    return std::get<3>(rep_)->second;
  }

  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (auto c = a.rep_.index() <=> b.rep_.index(); c != 0) return c;
    switch (a.kind()) {
      case Kind::Symbol: {
        const std::string* sa = std::get<0>(a.rep_);
        const std::string* sb = std::get<0>(b.rep_);
        if (sa == sb) return std::strong_ordering::equal;
        return *sa <=> *sb;
      }
      case Kind::Port:
        return std::get<1>(a.rep_) <=> std::get<1>(b.rep_);
      case Kind::Addr:
        return std::get<2>(a.rep_) <=> std::get<2>(b.rep_);
      case Kind::Pair: {
        const PairNode& pa = *std::get<3>(a.rep_);
        const PairNode& pb = *std::get<3>(b.rep_);
        if (auto c = pa.first <=> pb.first; c != 0) return c;
        return pa.second <=> pb.second;
      }
    }
    return std::strong_ordering::equal;
  }

  friend bool operator==(const Value& a, const Value& b) { return (a <=> b) == 0; }

  std::size_t hash() const {
    std::size_t seed = static_cast<std::size_t>(rep_.index());
    switch (kind()) {
      case Kind::Symbol:
        return hash_combine(seed, std::hash<std::string>{}(*std::get<0>(rep_)));
      case Kind::Port:
        return hash_combine(seed, std::get<1>(rep_));
      case Kind::Addr:
        return hash_combine(seed, std::get<2>(rep_));
      case Kind::Pair:
        return hash_combine(hash_combine(seed, first().hash()), second().hash());
    }
    return seed;
  }

  std::string to_string() const {
    switch (kind()) {
      case Kind::Symbol:
        return std::string(symbol_name());
      case Kind::Port:
        return std::to_string(port_number());
      case Kind::Addr:
        return dotted_quad(addr_bits());
      case Kind::Pair:
        return "(" + first().to_string() + "," + second().to_string() + ")";
    }
    return {};
  }

  friend std::ostream& operator<<(std::ostream& os, const Value& v) {
    return os << v.to_string();
  }

 private:
  using PairNode = std::pair<Value, Value>;
  using Rep = std::variant<const std::string*, std::uint16_t, std::uint32_t,
                           std::shared_ptr<const PairNode>>;

  explicit Value(Rep rep) : rep_(std::move(rep)) {}

  Rep rep_;
};

using ValueSet = std::set<Value>;

/// A finite binary relation: a duplicate-free set of ordered pairs, iterated
/// in sorted order (first by left component, then right).
class Relation {
 public:
  using Pair = std::pair<Value, Value>;
  using PairSet = std::set<Pair>;
  using const_iterator = PairSet::const_iterator;

  Relation() = default;
  Relation(std::initializer_list<Pair> pairs) : pairs_(pairs) {}

  void insert(Value left, Value right) {
    pairs_.emplace(std::move(left), std::move(right));
  }
  bool contains(const Value& left, const Value& right) const {
    return pairs_.count({left, right}) != 0;
  }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  const_iterator begin() const { return pairs_.begin(); }
  const_iterator end() const { return pairs_.end(); }

  friend bool operator==(const Relation& a, const Relation& b) = default;

 private:
  PairSet pairs_;
};

/// R[A] = {b | exists a in A with (a,b) in R}
inline ValueSet image(const Relation& r, const ValueSet& a) {
  ValueSet out;
  for (const auto& [x, y] : r) {
    if (a.contains(x)) out.insert(y);
  }
  return out;
}

inline ValueSet image(const Relation& r, const Value& a) {
  return image(r, ValueSet{a});
}

/// R1 ; R2 = {(a,c) | exists b with (a,b) in R1 and (b,c) in R2}
/// (forward composition: the left relation is applied first).
inline Relation compose(const Relation& r1, const Relation& r2) {
  std::map<Value, std::vector<Value>> by_left;
  for (const auto& [b, c] : r2) by_left[b].push_back(c);
  Relation out;
  for (const auto& [a, b] : r1) {
    auto it = by_left.find(b);
    if (it == by_left.end()) continue;
    for (const auto& c : it->second) out.insert(a, c);
  }
  return out;
}

/// R1 || R2 = {((a,b),(c,d)) | (a,c) in R1 and (b,d) in R2}
inline Relation parallel(const Relation& r1, const Relation& r2) {
  Relation out;
  for (const auto& [a, c] : r1) {
    for (const auto& [b, d] : r2) {
      out.insert(Value::pair(a, b), Value::pair(c, d));
    }
  }
  return out;
}

/// R |> B = {(a,b) in R | b in B}  (range restriction)
inline Relation range_restrict(const Relation& r, const ValueSet& b) {
  Relation out;
  for (const auto& [x, y] : r) {
    if (b.contains(y)) out.insert(x, y);
  }
  return out;
}

inline Relation inverse(const Relation& r) {
  Relation out;
  for (const auto& [a, b] : r) out.insert(b, a);
  return out;
}

inline ValueSet domain_of(const Relation& r) {
  ValueSet out;
  for (const auto& [a, b] : r) out.insert(a);
  return out;
}

inline ValueSet range_of(const Relation& r) {
  ValueSet out;
  for (const auto& [a, b] : r) out.insert(b);
  return out;
}

/// (dom(R), ran(R))
inline std::pair<ValueSet, ValueSet> projections(const Relation& r) {
  return {domain_of(r), range_of(r)};
}

/// True iff no left value maps to two distinct right values.
inline bool is_function(const Relation& r) {
  const Value* prev_left = nullptr;
  const Value* prev_right = nullptr;
  for (const auto& [a, b] : r) {
    if (prev_left != nullptr && *prev_left == a && !(*prev_right == b)) return false;
    prev_left = &a;
    prev_right = &b;
  }
  return true;
}

inline Relation identity(const ValueSet& a) {
  Relation out;
  for (const auto& v : a) out.insert(v, v);
  return out;
}

inline bool subset_of(const ValueSet& a, const ValueSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool intersects(const ValueSet& a, const ValueSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return true;
    }
  }
  return false;
}

inline ValueSet set_difference(const ValueSet& a, const ValueSet& b) {
  ValueSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

inline ValueSet set_union(const ValueSet& a, const ValueSet& b) {
  ValueSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline ValueSet set_intersection(const ValueSet& a, const ValueSet& b) {
  ValueSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

}  // namespace refmon

template <>
struct std::hash<refmon::Value> {
  std::size_t operator()(const refmon::Value& v) const noexcept { return v.hash(); }
};

#endif  // REFMON_RELATION_HPP_
