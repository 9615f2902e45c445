#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "coprime/average.hpp"

using namespace coprime;

TEST_CASE("bookkeeping: survivors plus skips equal the requested draws") {
  auto rep = sample_average(20, 50, 300, 2, 11, 1000);
  CHECK(rep.requested == 300);
  CHECK(rep.sample_count + rep.skipped.total() == rep.requested);
  CHECK(rep.heuristic);
  CHECK(rep.central_moments.size() == 2);
}

TEST_CASE("fixed seed gives identical reports") {
  auto a = sample_average(30, 100, 500, 3, 99, 1000);
  auto b = sample_average(30, 100, 500, 3, 99, 1000);
  CHECK(a.sample_count == b.sample_count);
  CHECK(a.mean == b.mean);
  CHECK(a.central_moments == b.central_moments);
  CHECK(a.skipped.total() == b.skipped.total());

  auto c = sample_average(30, 100, 500, 3, 100, 1000);
  CHECK(a.mean != c.mean);  // different seed, different sample
}

TEST_CASE("per-sample constants stay inside the sharp ratio bounds") {
  auto rep = sample_average(50, 200, 2000, 1, 7, 10000);
  GenericConstant g = generic_constant(10000);
  Rational r_min(mpz_class("5014419112"), mpz_class("5014521525"));
  Rational r_max(1150648, 1118065);
  CHECK(rep.min_value >= r_min.get_d() * g.interval.lo - 1e-12);
  CHECK(rep.max_value <= r_max.get_d() * g.interval.hi + 1e-12);
}

TEST_CASE("mean approaches the generic constant") {
  auto rep = sample_average(100, 1000, 3000, 2, 424242, 10000);
  CHECK(std::abs(rep.mean - 0.39606) < 0.01);
  CHECK(rep.central_moments[1] > 0.0);  // second moment positive
  CHECK(rep.central_moments[1] < 1e-3);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(sample_average(0, 10, 10, 1, 1), std::domain_error);
  CHECK_THROWS_AS(sample_average(10, 10, 0, 1, 1), std::domain_error);
  CHECK_THROWS_AS(sample_average(10, 10, 10, 0, 1), std::domain_error);
}
