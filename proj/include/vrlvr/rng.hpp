// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace vrlvr {

std::uint64_t splitmix64(std::uint64_t& state);

/// FNV-1a over the bytes of `label`.
std::uint64_t hash_label(std::string_view label);

/// xoshiro256** seeded through splitmix64.
///
/// Every distribution below is implemented here rather than taken from
/// <random>, whose distributions are not specified bit-for-bit across
/// standard libraries. Child streams depend only on (seed, label), never on
/// how many values the parent has already drawn.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform integer in [lo, hi] (inclusive), unbiased by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Standard normal via Box-Muller (one value per call; the pair's second
  /// value is cached).
  double normal();

  bool bernoulli(double p) { return uniform01() < p; }

  SeededRng child(std::string_view label) const;
  SeededRng child(std::uint64_t index) const;

  template <typename Container>
  void shuffle(Container& items) {
    for (std::size_t i = std::size(items); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vrlvr
