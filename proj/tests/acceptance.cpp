// Acceptance gate: one line per criterion, exit 0 iff every non-skipped
// criterion passes. Criterion 11 (the full 10^8 scan) only runs when
// COPRIME_FULL_RUN=1 is set; it takes hours.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "coprime/average.hpp"
#include "coprime/catalog.hpp"
#include "coprime/constants.hpp"
#include "coprime/empirical.hpp"
#include "coprime/matgroups.hpp"
#include "coprime/serre.hpp"

using namespace coprime;

namespace {

WeierstrassCurve curve_of(const char* label) {
  for (const auto& e : builtin_catalog())
    if (e.label == label) return e.curve();
  throw std::runtime_error("unknown label");
}

bool all_pass = true;

template <typename Fn>
void criterion(int number, const char* name, Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    std::printf("criterion %2d [%s]: FAIL (exception: %s)\n", number, name, e.what());
    all_pass = false;
    return;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("criterion %2d [%s]: %s (%.1fs)\n", number, name, ok ? "PASS" : "FAIL", secs);
  if (!ok) all_pass = false;
}

bool matrix_counts() {
  for (u64 ell : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    mpz_class l(static_cast<unsigned long>(ell));
    std::vector<u64> det_count(ell, 0);
    enumerate_gl2(ell, [&](const MatModN& m) { det_count[m.det()] += 1; });
    mpz_class delta_brute = 0;
    for (u64 a = 0; a < ell; ++a) {
      mpz_class c(static_cast<unsigned long>(det_count[a]));
      delta_brute += c * c;
    }
    if (delta_brute != l * l * (l - 1) * (l - 1) * (l - 1) * (l + 1) * (l + 1)) return false;
    if (count_B(ell) != l * l * (l + 2) * (l * l - l - 1)) return false;
    for (u64 a = 1; a < std::max<u64>(ell, 2); ++a) {
      if (ell > 2 && a % ell == 0) continue;
      u64 want = (a % ell == 1 % ell) ? ell * ell : ell * ell + ell;
      if (count_X_alpha_prime(ell, a % ell) != want) return false;
    }
  }
  return true;
}

bool character_sums() {
  for (u64 n : {2ull, 6ull, 10ull, 30ull, 70ull}) {
    for (u64 r : squarefree_divisors(n)) char_sums(n, r);  // throws on mismatch
    auto table = psi_split_direct(n);
    u64 nodd = odd_part(n);
    for (u64 a = 1; a < n; ++a) {
      if (gcd_u64(a, n) != 1) continue;
      long long x = static_cast<long long>(table.total[a]);
      long long want = x / 2 - jacobi(static_cast<i64>(a), nodd) * x / 4;
      if (static_cast<long long>(table.plus[a]) != want) return false;
    }
  }
  if (char_sums(6, 3).second != char_sums(6, 6).second) return false;
  if (char_sums(30, 15).second != char_sums(30, 30).second) return false;
  return true;
}

bool f_oracle_suite() {
  SerrePairProfile p1(6, 10), p2(70, 210);
  for (u64 d : squarefree_divisors(30))
    if (f_oracle(d, 6, 10) != f_closed(d, p1)) return false;
  for (u64 d : squarefree_divisors(210))
    if (f_oracle(d, 70, 210) != f_closed(d, p2)) return false;
  return f_oracle(30, 6, 10) == Rational(5263, 884736) &&
         f_oracle(210, 70, 210) == Rational(mpz_class(168823), mpz_class(1358954496));
}

bool constants_suite() {
  // The certified interval cannot literally contain the 5-decimal rounding
  // 0.39606 (the true value is ~4e-6 above it), so the containment check is:
  // the whole interval rounds to 0.39606 at five decimals.
  auto g = generic_constant(1000000);
  if (g.interval.width() >= 1e-4) return false;
  if (!(0.396055 <= g.interval.lo && g.interval.hi <= 0.396065)) return false;
  if (std::abs(g.value() - 0.39606) >= 1e-5) return false;
  if (!(g.interval.hi < 6.0 / (M_PI * M_PI))) return false;

  if (pair_ratio(SerrePairProfile(6, 10)) != Rational(1150648, 1118065)) return false;
  if (pair_ratio(SerrePairProfile(70, 210)) !=
      Rational(mpz_class("5014419112"), mpz_class("5014521525")))
    return false;

  u64 rng = 1;
  int checked = 0;
  while (checked < 50) {
    u64 t1 = 2 * (detail::splitmix64(rng) % 50) + 1;
    u64 t2 = 2 * (detail::splitmix64(rng) % 50) + 1;
    u64 mult1 = 1ull << (1 + detail::splitmix64(rng) % 3);
    u64 mult2 = 1ull << (1 + detail::splitmix64(rng) % 3);
    u64 m1 = mult1 * t1, m2 = mult2 * t2;
    if (!is_squarefree_u64(t1) || !is_squarefree_u64(t2)) continue;
    if (m1 < 6 || m2 < 6 || m1 == m2 || lcm_u64(m1, m2) > 10000) continue;
    SerrePairProfile p(m1, m2);
    if (pair_ratio(p) != pair_ratio_mobius(p)) return false;
    ++checked;
  }
  return true;
}

bool bounds_sharpness() {
  auto rep = bounds_search(30030);
  return rep.min_pair == std::make_pair(u64(70), u64(210)) &&
         rep.min_ratio == Rational(mpz_class("5014419112"), mpz_class("5014521525")) &&
         rep.max_pair == std::make_pair(u64(6), u64(10)) &&
         rep.max_ratio == Rational(1150648, 1118065);
}

bool sieve_pi_1e8() { return PrimeSieve(100000000).count() == 5761455; }

bool point_counting() {
  auto primes = small_primes(2000);
  for (const auto& entry : builtin_catalog()) {
    auto e = entry.curve();
    for (u64 p : primes) {
      if (p <= 3 || !is_good_reduction(e, p)) continue;
      auto c = reduce(e, p);
      if (count_points_bsgs(c, 1).order != count_points_naive(c).order) return false;
    }
    for (u64 p : {100003ull, 500009ull, 999983ull}) {
      if (!is_good_reduction(e, p)) continue;
      auto pc = count_points(e, p);
      if (static_cast<double>(pc.trace) * pc.trace > 4.0 * static_cast<double>(p)) return false;
    }
  }
  return true;
}

bool inclusion_exclusion() {
  for (auto [l1, l2] : {std::pair<const char*, const char*>{"140.b1", "34020.c1"},
                        {"297.a1", "405.a1"},
                        {"484.a1", "847.c1"}}) {
    if (!inclusion_exclusion_check(curve_of(l1), curve_of(l2), 10000).equal) return false;
  }
  return true;
}

bool obstruction() {
  auto e484 = curve_of("484.a1");
  auto e847 = curve_of("847.c1");
  if (pi_coprime(e484, e847, 100000).coprime_count != 0) return false;
  if (obstruction_scan(e484, e847, 100000).violations != 0) return false;
  return obstruction_scan(curve_of("297.a1"), curve_of("405.a1"), 10000).violations > 0;
}

bool desk_run() {
  for (auto [l1, l2] : {std::pair<const char*, const char*>{"140.b1", "34020.c1"},
                        {"297.a1", "405.a1"}}) {
    auto rep = compare_report(curve_of(l1), curve_of(l2), 1000000, 1, 1);
    if (!rep.has_prediction) return false;
    if (std::abs(rep.observed_over_pi - rep.predicted.midpoint()) >= 0.02) return false;
  }
  auto e1 = curve_of("297.a1");
  auto e2 = curve_of("405.a1");
  return pi_coprime(e1, e2, 100000, 1, 42).coprime_count ==
         pi_coprime(e1, e2, 100000, 8, 42).coprime_count;
}

bool full_run() {
  unsigned workers = 1;
  if (const char* env = std::getenv("COPRIME_THREADS")) {
    long v = std::atol(env);
    if (v > 0) workers = static_cast<unsigned>(v);
  }
  auto c1 = pi_coprime(curve_of("140.b1"), curve_of("34020.c1"), 100000000, workers, 1);
  std::printf("  pi_coprime(10^8) for (140.b1, 34020.c1) = %llu (reference 2250887)\n",
              (unsigned long long)c1.coprime_count);
  auto c2 = pi_coprime(curve_of("297.a1"), curve_of("405.a1"), 100000000, workers, 1);
  std::printf("  pi_coprime(10^8) for (297.a1, 405.a1) = %llu (reference 2348734)\n",
              (unsigned long long)c2.coprime_count);
  return c1.coprime_count == 2250887 && c2.coprime_count == 2348734;
}

bool average_experiment() {
  auto rep = sample_average(100, 1000, 10000, 1, 1, 100000);
  if (std::abs(rep.mean - 0.39606) >= 0.01) return false;
  auto a = sample_average(100, 1000, 1000, 2, 5, 10000);
  auto b = sample_average(100, 1000, 1000, 2, 5, 10000);
  return a.mean == b.mean && a.central_moments == b.central_moments &&
         a.sample_count == b.sample_count;
}

}  // namespace

int main() {
  criterion(1, "matrix counts", matrix_counts);
  criterion(2, "character sums", character_sums);
  criterion(3, "f oracle", f_oracle_suite);
  criterion(4, "constants", constants_suite);
  criterion(5, "bounds sharpness", bounds_sharpness);
  criterion(6, "sieve pi(10^8)", sieve_pi_1e8);
  criterion(7, "point counting", point_counting);
  criterion(8, "inclusion-exclusion", inclusion_exclusion);
  criterion(9, "obstruction", obstruction);
  criterion(10, "empirical desk run", desk_run);
  const char* full = std::getenv("COPRIME_FULL_RUN");
  if (full && std::strcmp(full, "1") == 0) {
    criterion(11, "empirical full run", full_run);
  } else {
    std::printf("criterion 11 [empirical full run]: SKIP (set COPRIME_FULL_RUN=1 to enable)\n");
  }
  criterion(12, "average experiment", average_experiment);
  std::printf("acceptance: %s\n", all_pass ? "PASS" : "FAIL");
  return all_pass ? 0 : 1;
}
