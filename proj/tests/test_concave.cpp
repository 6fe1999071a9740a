#include "doctest.h"

#include <cmath>

#include "disjlab/concave.hpp"

using namespace disjlab;

TEST_CASE("built-in tables") {
  const auto counting = ConcaveTable::counting();
  CHECK(counting.value_num(0) == 0);
  CHECK(counting.value_num(1) == ConcaveTable::kOne);
  CHECK(counting.value_num(57) == ConcaveTable::kOne);  // affine tail, slope 0

  const auto lg = ConcaveTable::log2_table(16);
  CHECK(lg.value_num(0) == -ConcaveTable::kOne);
  CHECK(lg.value_num(1) == 0);
  CHECK(lg.value_num(2) == ConcaveTable::kOne);
  CHECK(lg.value_num(4) == 2 * ConcaveTable::kOne);
  CHECK(lg.value(5) == doctest::Approx(std::log2(5.0)).epsilon(1e-10));

  const auto ind = ConcaveTable::empty_indicator();
  CHECK(ind.value_num(0) == -ConcaveTable::kOne);
  CHECK(ind.value_num(1) == 0);
  CHECK(ind.value_num(9) == 0);
}

TEST_CASE("non-concave tables are rejected") {
  CHECK_THROWS_AS(ConcaveTable({0, 1, 3}, "convex"), std::invalid_argument);
  CHECK_THROWS_AS(ConcaveTable({5, 0, 1}, "dip"), std::invalid_argument);
  CHECK_THROWS_AS(ConcaveTable({}, "empty"), std::invalid_argument);
  CHECK_NOTHROW(ConcaveTable({-7}, "constant"));
  CHECK_NOTHROW(ConcaveTable({0, 10, 15, 17}, "diminishing"));
}

TEST_CASE("log table concavity survives dyadic rounding at working sizes") {
  CHECK_NOTHROW(ConcaveTable::log2_table(1 << 12));
}
