#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "coprime/catalog.hpp"
#include "coprime/empirical.hpp"

using namespace coprime;

namespace {

WeierstrassCurve curve_of(const char* label) {
  for (const auto& e : builtin_catalog())
    if (e.label == label) return e.curve();
  throw std::runtime_error("unknown label");
}

}  // namespace

TEST_CASE("coprime counts at x = 10^3 for the three reference pairs") {
  auto c1 = pi_coprime(curve_of("140.b1"), curve_of("34020.c1"), 1000);
  CHECK(c1.coprime_count == 71);
  CHECK(c1.good_prime_count == 164);

  auto c2 = pi_coprime(curve_of("297.a1"), curve_of("405.a1"), 1000);
  CHECK(c2.coprime_count == 67);
  CHECK(c2.good_prime_count == 165);
  CHECK(c2.pi_x() == 168);
  CHECK(c2.excluded_primes == std::vector<u64>{3, 5, 11});

  auto c3 = pi_coprime(curve_of("484.a1"), curve_of("847.c1"), 1000);
  CHECK(c3.coprime_count == 0);
  CHECK(c3.good_prime_count == 165);
}

TEST_CASE("count invariants hold") {
  auto c = pi_coprime(curve_of("297.a1"), curve_of("405.a1"), 10000);
  CHECK(c.coprime_count <= c.good_prime_count);
  CHECK(c.good_prime_count <= c.pi_x());
  CHECK(c.pi_x() == 1229);  // pi(10^4)
}

TEST_CASE("worker count does not change the result") {
  auto e1 = curve_of("297.a1");
  auto e2 = curve_of("405.a1");
  auto w1 = pi_coprime(e1, e2, 100000, 1, 42);
  auto w4 = pi_coprime(e1, e2, 100000, 4, 42);
  auto w8 = pi_coprime(e1, e2, 100000, 8, 42);
  CHECK(w1.coprime_count == w4.coprime_count);
  CHECK(w1.coprime_count == w8.coprime_count);
  CHECK(w1.good_prime_count == w8.good_prime_count);
}

TEST_CASE("checkpoint resume reproduces a fresh run") {
  auto e1 = curve_of("297.a1");
  auto e2 = curve_of("405.a1");
  const u64 x = (u64(1) << 21) + 1000;
  const char* path = "pi_coprime_ck_test.jsonl";
  auto fresh = pi_coprime(e1, e2, x, 1, 1, path, false);
  REQUIRE(fresh.checkpoints.size() >= 2);

  // keep only the first checkpoint line, then resume
  {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    in.close();
    std::ofstream out(path, std::ios::trunc);
    out << first << "\n";
  }
  auto resumed = pi_coprime(e1, e2, x, 1, 1, path, true);
  CHECK(resumed.coprime_count == fresh.coprime_count);
  CHECK(resumed.good_prime_count == fresh.good_prime_count);
  CHECK(resumed.excluded_primes == fresh.excluded_primes);
  std::remove(path);
}

TEST_CASE("A_d counts: universal d, impossible d, and the parity case") {
  auto e1 = curve_of("297.a1");
  auto e2 = curve_of("405.a1");
  auto c = pi_coprime(e1, e2, 1000);
  CHECK(a_d_count(e1, e2, 1, 1000) == c.good_prime_count);
  CHECK(a_d_count(e1, e2, 1100, 1000) == 0);  // above x + 1 + 2 sqrt(x)

  // cross-check d = 2 by naive parity scan
  u64 both_even = 0;
  PrimeSieve::for_each_in_range(2, 1000, [&](u64 p) {
    if (!is_good_reduction(e1, p) || !is_good_reduction(e2, p)) return;
    if (count_points_naive(reduce(e1, p)).order % 2 == 0 &&
        count_points_naive(reduce(e2, p)).order % 2 == 0)
      ++both_even;
  });
  CHECK(a_d_count(e1, e2, 2, 1000) == both_even);
}

TEST_CASE("A_d is monotone in x and submultiplicative across coprime moduli") {
  auto e1 = curve_of("297.a1");
  auto e2 = curve_of("405.a1");
  CHECK(a_d_count(e1, e2, 2, 500) <= a_d_count(e1, e2, 2, 1000));
  u64 a6 = a_d_count(e1, e2, 6, 1000);
  CHECK(a6 <= a_d_count(e1, e2, 2, 1000));
  CHECK(a6 <= a_d_count(e1, e2, 3, 1000));
}

TEST_CASE("inclusion-exclusion identity is exact at x = 10^3") {
  for (auto [l1, l2] : {std::pair<const char*, const char*>{"140.b1", "34020.c1"},
                        {"297.a1", "405.a1"},
                        {"484.a1", "847.c1"}}) {
    auto res = inclusion_exclusion_check(curve_of(l1), curve_of(l2), 1000);
    CHECK(res.equal);
    CHECK(res.residual == 0);
  }
}

TEST_CASE("partition: coprime plus non-coprime equals good at x = 10^4") {
  auto e1 = curve_of("140.b1");
  auto e2 = curve_of("34020.c1");
  auto c = pi_coprime(e1, e2, 10000);
  u64 non_coprime = 0;
  PrimeSieve::for_each_in_range(2, 10000, [&](u64 p) {
    if (!is_good_reduction(e1, p) || !is_good_reduction(e2, p)) return;
    if (gcd_u64(count_points(e1, p).order, count_points(e2, p).order) > 1) ++non_coprime;
  });
  CHECK(c.coprime_count + non_coprime == c.good_prime_count);
}

TEST_CASE("mod-11 obstruction holds for the reference pair and fails generically") {
  auto rep = obstruction_scan(curve_of("484.a1"), curve_of("847.c1"), 10000);
  CHECK(rep.checked > 0);
  CHECK(rep.violations == 0);

  auto neg = obstruction_scan(curve_of("297.a1"), curve_of("405.a1"), 10000);
  CHECK(neg.violations > 0);
  CHECK(!neg.violating_primes.empty());
}

TEST_CASE("density report carries prediction for a Serre pair") {
  auto rep = compare_report(curve_of("297.a1"), curve_of("405.a1"), 10000, 1, 1, 1000);
  CHECK(rep.has_prediction);
  CHECK(rep.ratio == Rational(1150648, 1118065));
  double recomputed = static_cast<double>(rep.counts.coprime_count) /
                      static_cast<double>(rep.counts.pi_x());
  CHECK(rep.observed_over_pi == doctest::Approx(recomputed).epsilon(1e-12));
}

TEST_CASE("density report survives a non-pair with the empirical half intact") {
  auto rep = compare_report(curve_of("484.a1"), curve_of("847.c1"), 10000, 1, 1, 1000);
  CHECK_FALSE(rep.has_prediction);
  CHECK(!rep.prediction_error.empty());
  CHECK(rep.counts.coprime_count == 0);
  CHECK(rep.counts.good_prime_count > 0);
}

TEST_CASE("local densities appear in the divisor counts at x = 10^6") {
  auto e1 = curve_of("297.a1");
  auto e2 = curve_of("405.a1");
  SerrePairProfile profile(6, 10);
  u64 pi = 0;
  u64 a_l[3] = {0, 0, 0};
  const u64 ells[3] = {2, 3, 5};
  PrimeSieve::for_each_in_range(2, 1000000, [&](u64 p) {
    ++pi;
    if (!is_good_reduction(e1, p) || !is_good_reduction(e2, p)) return;
    u64 s = detail_empirical::prime_seed(1, p);
    u64 n1 = count_points(e1, p, s).order;
    u64 n2 = count_points(e2, p, s).order;
    for (int i = 0; i < 3; ++i)
      if (n1 % ells[i] == 0 && n2 % ells[i] == 0) ++a_l[i];
  });
  CHECK(pi == 78498);
  for (int i = 0; i < 3; ++i) {
    double observed = static_cast<double>(a_l[i]) / static_cast<double>(pi);
    double predicted = f_closed(ells[i], profile).get_d();
    CHECK(std::abs(observed - predicted) < 5e-3);
  }
}
