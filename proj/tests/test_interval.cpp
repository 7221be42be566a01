#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "ophis/interval.hpp"

using ophis::Interval;

TEST_CASE("unit interval spans [0, 1]") {
  Interval u = Interval::unit(3);
  CHECK(u.lo() == 0.0);
  CHECK(u.hi() == 1.0);
  CHECK(u.width() == 1.0);
  CHECK(u.center() == 0.5);
  CHECK(u.level() == 0);
}

TEST_CASE("splitting the unit interval yields equal thirds") {
  Interval u = Interval::unit(3);
  Interval a = u.split_child(0);
  Interval b = u.split_child(1);
  Interval c = u.split_child(2);
  CHECK(a.lo() == 0.0);
  CHECK(a.hi() == Catch::Approx(1.0 / 3.0).epsilon(0).margin(1e-15));
  CHECK(b.lo() == Catch::Approx(1.0 / 3.0).epsilon(0).margin(1e-15));
  CHECK(b.hi() == Catch::Approx(2.0 / 3.0).epsilon(0).margin(1e-15));
  CHECK(c.lo() == Catch::Approx(2.0 / 3.0).epsilon(0).margin(1e-15));
  CHECK(c.hi() == 1.0);
}

TEST_CASE("nested split refines [0, 1/3] into ninths") {
  Interval a = Interval::unit(3).split_child(0);
  Interval a0 = a.split_child(0);
  Interval a1 = a.split_child(1);
  Interval a2 = a.split_child(2);
  CHECK(a0.lo() == 0.0);
  CHECK(a0.hi() == Catch::Approx(1.0 / 9.0).margin(1e-15));
  CHECK(a1.lo() == Catch::Approx(1.0 / 9.0).margin(1e-15));
  CHECK(a1.hi() == Catch::Approx(2.0 / 9.0).margin(1e-15));
  CHECK(a2.lo() == Catch::Approx(2.0 / 9.0).margin(1e-15));
  CHECK(a2.hi() == Catch::Approx(1.0 / 3.0).margin(1e-15));
}

TEST_CASE("width is exactly base^-level along random descents") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Interval iv = Interval::unit(3);
    int depth = std::uniform_int_distribution<int>(1, 30)(rng);
    for (int j = 0; j < depth; ++j)
      iv = iv.split_child(std::uniform_int_distribution<std::uint32_t>(0, 2)(rng));
    CHECK(iv.level() == static_cast<std::uint32_t>(depth));
    CHECK(std::abs(iv.width() - std::pow(3.0, -depth)) <= 1e-12 * iv.width());
    CHECK(iv.lo() >= 0.0);
    CHECK(iv.hi() <= 1.0);
    CHECK(iv.lo() < iv.center());
    CHECK(iv.center() < iv.hi());
  }
}

TEST_CASE("children tile the parent exactly in the integer representation") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Interval parent = Interval::unit(3);
    int depth = std::uniform_int_distribution<int>(0, 10)(rng);
    for (int j = 0; j < depth; ++j)
      parent = parent.split_child(std::uniform_int_distribution<std::uint32_t>(0, 2)(rng));
    std::vector<Interval> kids{parent.split_child(0), parent.split_child(1),
                               parent.split_child(2)};
    // exact tiling lives in (offset, level); the float endpoints only agree
    // up to rounding of base^-level
    CHECK(kids.front().offset() == parent.offset() * 3);
    CHECK(kids.back().offset() == parent.offset() * 3 + 2);
    for (std::size_t j = 0; j + 1 < kids.size(); ++j)
      CHECK(kids[j].offset() + 1 == kids[j + 1].offset());
    CHECK(std::abs(kids.front().lo() - parent.lo()) <= 1e-15);
    CHECK(std::abs(kids.back().hi() - parent.hi()) <= 1e-15);
    for (std::size_t j = 0; j + 1 < kids.size(); ++j)
      CHECK(std::abs(kids[j].hi() - kids[j + 1].lo()) <= 1e-15);
  }
}

TEST_CASE("equality compares the exact cell, not just endpoints") {
  Interval u = Interval::unit(3);
  CHECK(u.split_child(1) == u.split_child(1));
  CHECK(!(u.split_child(0) == u.split_child(1)));
  CHECK(!(u == u.split_child(1)));
}

TEST_CASE("max level keeps offsets in 63 bits") {
  CHECK(Interval::max_level(3) == 39);
  CHECK(Interval::max_level(2) == 63);
  Interval iv = Interval::unit(3);
  for (std::uint32_t j = 0; j < Interval::max_level(3); ++j) iv = iv.split_child(2);
  CHECK_THROWS_AS(iv.split_child(0), std::overflow_error);
}

TEST_CASE("invalid construction and child indices are rejected") {
  CHECK_THROWS_AS(Interval::unit(1), std::invalid_argument);
  CHECK_THROWS_AS(Interval::max_level(0), std::invalid_argument);
  CHECK_THROWS_AS(Interval::unit(3).split_child(3), std::out_of_range);
}

TEST_CASE("other split factors partition the same way") {
  Interval u = Interval::unit(5);
  for (std::uint32_t j = 0; j < 5; ++j) {
    Interval child = u.split_child(j);
    CHECK(child.width() == Catch::Approx(0.2).margin(1e-15));
    CHECK(child.lo() == Catch::Approx(0.2 * j).margin(1e-15));
  }
}
