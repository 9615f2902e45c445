#pragma once

// Exact-rational constants pipeline: the multiplicative functions F1, F2 and
// their starred variants, the generic coprimality constant as a certified
// interval, the closed-form local densities f(d) for a pair of Serre levels,
// the four-case ratio R(m1, m2), and the extremal-ratio search over admissible
// level pairs.

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "coprime/arith.hpp"
#include "coprime/errors.hpp"

namespace coprime {

using Rational = mpq_class;

inline void require_squarefree(u64 n, const char* where) {
  if (!is_squarefree_u64(n)) throw std::domain_error(std::string(where) + ": argument must be squarefree");
}

// F1(l) = (l+2)(l^2-l-1) / ((l-1)^3 (l+1)^2)
inline Rational F1_prime(u64 ell) {
  mpz_class l(static_cast<unsigned long>(ell));
  Rational r(mpz_class((l + 2) * (l * l - l - 1)),
             mpz_class((l - 1) * (l - 1) * (l - 1) * (l + 1) * (l + 1)));
  r.canonicalize();
  return r;
}

// F2(l) = -(2l+1) / ((l-1)^3 (l+1)^2)
inline Rational F2_prime(u64 ell) {
  mpz_class l(static_cast<unsigned long>(ell));
  Rational r(mpz_class(-(2 * l + 1)),
             mpz_class((l - 1) * (l - 1) * (l - 1) * (l + 1) * (l + 1)));
  r.canonicalize();
  return r;
}

inline Rational F1(u64 d) {
  require_squarefree(d, "F1");
  Rational r(1);
  for (u64 ell : prime_factors_u64(d)) r *= F1_prime(ell);
  return r;
}

inline Rational F2(u64 d) {
  require_squarefree(d, "F2");
  Rational r(1);
  for (u64 ell : prime_factors_u64(d)) r *= F2_prime(ell);
  return r;
}

// F1*(l) = F1(l) / (1 - F1(l)),  F2*(l) = |F2(l)| / (1 - F1(l)),
// extended multiplicatively to squarefree n.
inline Rational F1_star(u64 n) {
  require_squarefree(n, "F1_star");
  Rational r(1);
  for (u64 ell : prime_factors_u64(n)) {
    Rational f1 = F1_prime(ell);
    r *= f1 / (Rational(1) - f1);
  }
  return r;
}

inline Rational F2_star(u64 n) {
  require_squarefree(n, "F2_star");
  Rational r(1);
  for (u64 ell : prime_factors_u64(n)) {
    Rational f2 = -F2_prime(ell);
    r *= f2 / (Rational(1) - F1_prime(ell));
  }
  return r;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

struct GenericConstant {
  u64 cutoff = 0;
  Interval interval;           // certified enclosure of prod_l (1 - F1(l))
  double heuristic_tail = 0.0; // prime-density tail estimate, informational only

  double value() const { return interval.midpoint(); }
};

namespace detail_constants {

constexpr mpfr_prec_t kPrec = 128;

// Integral check that F1(l) <= 2/l^2, i.e.
// l^2 (l+2)(l^2-l-1) <= 2 (l-1)^3 (l+1)^2.
inline bool tail_majorant_ok(u64 ell) {
  mpz_class l(static_cast<unsigned long>(ell));
  mpz_class lhs = l * l * (l + 2) * (l * l - l - 1);
  mpz_class rhs = 2 * (l - 1) * (l - 1) * (l - 1) * (l + 1) * (l + 1);
  return lhs <= rhs;
}

}  // namespace detail_constants

// prod_{l <= cutoff} (1 - F1(l)) with directed rounding, widened below by the
// tail bound sum_{l > cutoff} F1(l) <= sum_{n > cutoff} 2/n^2 < 2/cutoff,
// using 1 - x >= exp(-2x) for 0 <= x <= 1/2 on the omitted factors.
inline GenericConstant generic_constant(u64 cutoff) {
  if (cutoff < 11) throw std::domain_error("generic_constant: cutoff must be >= 11");
  using namespace detail_constants;
  mpfr_t lo, hi, tmp;
  mpfr_init2(lo, kPrec);
  mpfr_init2(hi, kPrec);
  mpfr_init2(tmp, kPrec);
  mpfr_set_ui(lo, 1, MPFR_RNDD);
  mpfr_set_ui(hi, 1, MPFR_RNDU);
  bool majorant_ok = true;
  PrimeSieve::for_each_in_range(2, cutoff, [&](u64 ell) {
    if (!tail_majorant_ok(ell)) majorant_ok = false;
    Rational term = Rational(1) - F1_prime(ell);
    mpfr_mul_q(lo, lo, term.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi, hi, term.get_mpq_t(), MPFR_RNDU);
  });
  if (!majorant_ok) {
    mpfr_clears(lo, hi, tmp, nullptr);
    throw std::logic_error("generic_constant: tail majorant F1(l) <= 2/l^2 violated");
  }
  // lo *= exp(-2 * (2/cutoff)), every rounding pushed downward
  mpfr_set_ui(tmp, 4, MPFR_RNDU);
  mpfr_div_ui(tmp, tmp, static_cast<unsigned long>(cutoff), MPFR_RNDU);
  mpfr_neg(tmp, tmp, MPFR_RNDD);
  mpfr_exp(tmp, tmp, MPFR_RNDD);
  mpfr_mul(lo, lo, tmp, MPFR_RNDD);

  GenericConstant out;
  out.cutoff = cutoff;
  out.interval.lo = mpfr_get_d(lo, MPFR_RNDD);
  out.interval.hi = mpfr_get_d(hi, MPFR_RNDU);
  out.heuristic_tail = 1.0 / (static_cast<double>(cutoff) * std::log(static_cast<double>(cutoff)));
  mpfr_clears(lo, hi, tmp, nullptr);
  return out;
}

inline u64 odd_part(u64 n) {
  while (n % 2 == 0) n /= 2;
  return n;
}

// A pair of admissible adelic levels: even, at least 6, squarefree odd part,
// and distinct from each other.
struct SerrePairProfile {
  u64 m1 = 0, m2 = 0;
  u64 m = 0;        // gcd
  u64 M = 0;        // lcm
  u64 m_prime = 0;  // M / m
  bool four_divides_m1 = false;
  bool four_divides_m2 = false;

  SerrePairProfile(u64 level1, u64 level2) : m1(level1), m2(level2) {
    for (u64 lvl : {m1, m2}) {
      if (lvl % 2 != 0 || lvl < 6)
        throw std::domain_error("level must be even and >= 6, got " + std::to_string(lvl));
      if (!is_squarefree_u64(odd_part(lvl)))
        throw std::domain_error("level has non-squarefree odd part: " + std::to_string(lvl));
    }
    if (m1 == m2) throw NotSerrePair("equal levels m1 = m2 = " + std::to_string(m1));
    m = gcd_u64(m1, m2);
    M = lcm_u64(m1, m2);
    m_prime = M / m;
    four_divides_m1 = m1 % 4 == 0;
    four_divides_m2 = m2 % 4 == 0;
  }
};

// Closed-form f(d) for squarefree d | M, selected by which levels divide d.
inline Rational f_closed(u64 d, const SerrePairProfile& p) {
  require_squarefree(d, "f_closed");
  if (d == 0 || p.M % d != 0) throw std::domain_error("f_closed: d must divide lcm(m1, m2)");
  Rational base = F1(d);
  const bool div1 = d % p.m1 == 0;
  const bool div2 = d % p.m2 == 0;
  Rational factor(1);
  if (div1) factor += Rational(2, 5) * F2(p.m1) / F1(p.m1);
  if (div2) factor += Rational(2, 5) * F2(p.m2) / F1(p.m2);
  if (div1 && div2) factor += Rational(1, 4) * F2(p.m_prime) / F1(p.m_prime);
  return factor * base;
}

// The theorem's four-case ratio R(m1, m2) with C_{E1,E2} = R * C_generic.
inline Rational pair_ratio(const SerrePairProfile& p) {
  if (p.four_divides_m1 && p.four_divides_m2) return Rational(1);
  if (p.four_divides_m1) return Rational(1) + Rational(2, 5) * F2_star(p.m2);
  if (p.four_divides_m2) return Rational(1) + Rational(2, 5) * F2_star(p.m1);
  Rational r = Rational(1) + Rational(2, 5) * F2_star(p.m1) + Rational(2, 5) * F2_star(p.m2);
  r += Rational(mobius(p.m), 4) * F1_star(p.m) * F2_star(p.m_prime);
  return r;
}

// Direct route: sum_{d | M} mu(d) f(d) divided by prod_{l | M} (1 - F1(l)).
inline Rational pair_ratio_mobius(const SerrePairProfile& p) {
  Rational num(0);
  for (u64 d : squarefree_divisors(p.M)) num += Rational(mobius(d)) * f_closed(d, p);
  Rational den(1);
  for (u64 ell : prime_factors_u64(p.M)) den *= Rational(1) - F1_prime(ell);
  return num / den;
}

struct ConstantBreakdown {
  SerrePairProfile profile;
  Rational finite_sum;  // sum_{d | M} mu(d) f(d)
  Rational ratio;       // R(m1, m2)
  GenericConstant generic;
  Interval final_value;
};

namespace detail_constants {

// Scale a nonnegative interval by a positive rational with outward rounding.
inline Interval scale_interval(const Interval& iv, const Rational& r) {
  mpfr_t t;
  mpfr_init2(t, kPrec);
  Interval out;
  mpfr_set_d(t, iv.lo, MPFR_RNDD);
  mpfr_mul_q(t, t, r.get_mpq_t(), MPFR_RNDD);
  out.lo = mpfr_get_d(t, MPFR_RNDD);
  mpfr_set_d(t, iv.hi, MPFR_RNDU);
  mpfr_mul_q(t, t, r.get_mpq_t(), MPFR_RNDU);
  out.hi = mpfr_get_d(t, MPFR_RNDU);
  mpfr_clear(t);
  return out;
}

}  // namespace detail_constants

// Exact ratio by the theorem, cross-checked against the Moebius-sum route,
// then applied to the certified generic interval.
inline ConstantBreakdown serre_pair_constant(const SerrePairProfile& p, u64 cutoff) {
  Rational ratio = pair_ratio(p);
  Rational check = pair_ratio_mobius(p);
  if (ratio != check)
    throw std::logic_error("serre_pair_constant: theorem and Moebius routes disagree for (" +
                           std::to_string(p.m1) + ", " + std::to_string(p.m2) + ")");
  Rational finite(0);
  for (u64 d : squarefree_divisors(p.M)) finite += Rational(mobius(d)) * f_closed(d, p);

  ConstantBreakdown out{p, finite, ratio, generic_constant(cutoff), Interval{}};
  out.final_value = detail_constants::scale_interval(out.generic.interval, ratio);
  return out;
}

// Escape hatch for pairs whose local densities come from an external source:
// evaluates (sum_{d | M} mu(d) table[d]) / prod_{l | M} (1 - F1(l)) * generic.
inline ConstantBreakdown custom_constant(u64 M, const std::map<u64, Rational>& f_table,
                                         u64 cutoff) {
  if (M % 2 != 0 || !is_squarefree_u64(odd_part(M)))
    throw std::domain_error("custom_constant: M must be even with squarefree odd part");
  Rational num(0);
  for (u64 d : squarefree_divisors(M)) {
    auto it = f_table.find(d);
    if (it == f_table.end())
      throw std::domain_error("custom_constant: table missing f(" + std::to_string(d) + ")");
    num += Rational(mobius(d)) * it->second;
  }
  Rational den(1);
  for (u64 ell : prime_factors_u64(M)) den *= Rational(1) - F1_prime(ell);
  Rational ratio = num / den;
  if (ratio < 0) throw std::domain_error("custom_constant: negative density ratio");
  // finite_sum and ratio are meaningful; profile is a placeholder since no
  // level pair is attached.
  ConstantBreakdown out{SerrePairProfile(6, 10), num, ratio, generic_constant(cutoff), Interval{}};
  out.final_value = detail_constants::scale_interval(out.generic.interval, ratio);
  return out;
}

struct ExtremalReport {
  u64 level_bound = 0;
  std::pair<u64, u64> min_pair{0, 0};
  Rational min_ratio;
  std::pair<u64, u64> max_pair{0, 0};
  Rational max_ratio;
  u64 profile_count = 0;
  u64 ratio_one_count = 0;
};

// Admissible levels below the bound: 2t (t odd squarefree, from discriminants
// congruent to 1 mod 4), 4t (t odd squarefree), and 8t (t odd squarefree, from
// even squarefree discriminants), all >= 6.
inline std::vector<u64> admissible_levels(u64 bound) {
  std::vector<u64> levels;
  for (u64 t = 1; 2 * t <= bound; t += 2) {
    if (!is_squarefree_u64(t)) continue;
    for (u64 mult : {2ull, 4ull, 8ull}) {
      u64 lvl = mult * t;
      if (lvl >= 6 && lvl <= bound) levels.push_back(lvl);
    }
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

// Exhaustive scan of R over admissible pairs with lcm <= level_bound.
inline ExtremalReport bounds_search(u64 level_bound) {
  if (level_bound < 210) throw std::domain_error("bounds_search: level_bound must be >= 210");
  auto levels = admissible_levels(level_bound);
  ExtremalReport rep;
  rep.level_bound = level_bound;
  bool first = true;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t j = i + 1; j < levels.size(); ++j) {
      u64 a = levels[i], b = levels[j];
      if (lcm_u64(a, b) > level_bound) continue;
      SerrePairProfile p(a, b);
      Rational r = pair_ratio(p);
      ++rep.profile_count;
      if (r == 1) ++rep.ratio_one_count;
      if (first || r < rep.min_ratio) {
        rep.min_ratio = r;
        rep.min_pair = {a, b};
      }
      if (first || r > rep.max_ratio) {
        rep.max_ratio = r;
        rep.max_pair = {a, b};
      }
      first = false;
    }
  }
  return rep;
}

}  // namespace coprime
