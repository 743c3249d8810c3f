// Copyright 2026 The Shardsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHARDSIM_TYPES_H_
#define SHARDSIM_TYPES_H_

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace shardsim {

// Raised for violated preconditions and invalid configuration.
class ShardsimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index type that does not implicitly convert between domains, so an agent
// id can never be passed where a shard id is expected.
template <typename Tag>
class StrongIndex {
 public:
  constexpr StrongIndex() = default;
  constexpr explicit StrongIndex(int value) : value_(value) {}

  constexpr int value() const { return value_; }
  constexpr auto operator<=>(const StrongIndex&) const = default;

 private:
  int value_ = 0;
};

using ShardId = StrongIndex<struct ShardTag>;
using AgentId = StrongIndex<struct AgentTag>;

// Shard counts are capped so a shard set fits in one machine word.
inline constexpr int kMaxShards = 64;

// Set of shards stored as a bitmask. Iteration is in ascending shard order.
class ShardSet {
 public:
  constexpr ShardSet() = default;
  constexpr explicit ShardSet(std::uint64_t bits) : bits_(bits) {}
  ShardSet(std::initializer_list<int> shards) {
    for (int s : shards) Insert(ShardId(s));
  }

  static ShardSet Single(ShardId s) {
    ShardSet set;
    set.Insert(s);
    return set;
  }

  // All shards in [0, num_shards).
  static ShardSet All(int num_shards) {
    if (num_shards == kMaxShards) return ShardSet(~std::uint64_t{0});
    return ShardSet((std::uint64_t{1} << num_shards) - 1);
  }

  void Insert(ShardId s) {
    CheckIndex(s);
    bits_ |= std::uint64_t{1} << s.value();
  }
  bool Contains(ShardId s) const {
    return s.value() >= 0 && s.value() < kMaxShards &&
           ((bits_ >> s.value()) & 1u) != 0;
  }

  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  std::uint64_t bits() const { return bits_; }

  // Highest shard index plus one; zero for the empty set.
  int Extent() const { return kMaxShards - std::countl_zero(bits_); }

  ShardSet Union(ShardSet other) const { return ShardSet(bits_ | other.bits_); }

  template <typename Fn>
  void ForEach(Fn&& fn) const {
    std::uint64_t rest = bits_;
    while (rest != 0) {
      int s = std::countr_zero(rest);
      fn(ShardId(s));
      rest &= rest - 1;
    }
  }

  std::vector<ShardId> Shards() const {
    std::vector<ShardId> out;
    out.reserve(size());
    ForEach([&](ShardId s) { out.push_back(s); });
    return out;
  }

  std::string ToString() const;

  bool operator==(const ShardSet&) const = default;

 private:
  static void CheckIndex(ShardId s) {
    if (s.value() < 0 || s.value() >= kMaxShards) {
      throw ShardsimError("shard index " + std::to_string(s.value()) +
                          " out of range");
    }
  }

  std::uint64_t bits_ = 0;
};

}  // namespace shardsim

#endif  // SHARDSIM_TYPES_H_
