// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "vrlvr/error.hpp"
#include "vrlvr/grid.hpp"
#include "vrlvr/rng.hpp"

using namespace vrlvr;

TEST_CASE("derive_actions") {
  const std::vector<Cell> path{{0, 0}, {0, 1}, {1, 1}};
  CHECK(derive_actions(path) == std::vector<Action>{Action::R, Action::D});
  const std::vector<Cell> single{{2, 2}};
  CHECK(derive_actions(single).empty());
  const std::vector<Cell> gap{{0, 0}, {2, 0}};
  try {
    derive_actions(gap);
    FAIL("expected NonAdjacentCells");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonAdjacentCells);
  }
}

TEST_CASE("apply_action") {
  const Bounds b{3, 3};
  CHECK(apply_action({1, 1}, Action::U, b) == Cell{0, 1});
  CHECK(apply_action({0, 0}, Action::R, b) == Cell{0, 1});
  try {
    apply_action({0, 0}, Action::L, b);
    FAIL("expected OutOfBounds");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfBounds);
  }
}

TEST_CASE("derive_actions inverts replay on random walks") {
  SeededRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Action> acts;
    const int len = static_cast<int>(rng.uniform_int(0, 40));
    for (int i = 0; i < len; ++i) acts.push_back(kAllActions[rng.uniform_int(0, 3)]);
    const std::vector<Cell> path = replay({0, 0}, acts);
    REQUIRE(path.size() == acts.size() + 1);
    CHECK(derive_actions(path) == acts);
  }
}

TEST_CASE("action strings") {
  const std::vector<Action> acts{Action::U, Action::D, Action::L, Action::R};
  CHECK(actions_to_string(acts) == "UDLR");
  CHECK(actions_from_string("UDLR") == acts);
  CHECK_THROWS_AS(action_from_char('x'), Error);
}

TEST_CASE("rng streams") {
  SeededRng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  // Children depend on the seed only, not on how much the parent has drawn.
  SeededRng c(5);
  const auto first = c.child("x").next_u64();
  c.next_u64();
  CHECK(c.child("x").next_u64() == first);
  CHECK(c.child("x").next_u64() != c.child("y").next_u64());
  CHECK(c.child(std::uint64_t{0}).next_u64() != c.child(std::uint64_t{1}).next_u64());

  SeededRng r(9);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.uniform_int(-3, 4);
    CHECK(v >= -3);
    CHECK(v <= 4);
  }
}
