#pragma once

// Monte-Carlo average of the pairwise coprimality constant over random curve
// pairs sampled from an integer box. Every surviving pair is treated as a
// Serre pair, so all outputs are branded heuristic.

#include <cstdint>
#include <string>
#include <vector>

#include "coprime/arith.hpp"
#include "coprime/constants.hpp"
#include "coprime/curves.hpp"
#include "coprime/errors.hpp"
#include "coprime/serre.hpp"

namespace coprime {

struct SkipTally {
  u64 singular = 0;
  u64 delta_unit = 0;  // squarefree discriminant part +-1
  u64 unfactorable = 0;
  u64 equal_level = 0;

  u64 total() const { return singular + delta_unit + unfactorable + equal_level; }
};

struct MomentReport {
  u64 requested = 0;
  u64 sample_count = 0;  // survivors
  SkipTally skipped;
  double reference = 0.0;  // generic constant (interval midpoint)
  double mean = 0.0;
  std::vector<double> central_moments;  // k-th moment about the reference, k = 1..t
  double min_value = 0.0;
  double max_value = 0.0;
  bool heuristic = true;  // Serre-pair status assumed, never verified
};

namespace detail_average {

// Uniform draw from [-bound, bound].
inline long long draw_int(u64& rng, u64 bound) {
  u64 span = 2 * bound + 1;
  return static_cast<long long>(detail::splitmix64(rng) % span) - static_cast<long long>(bound);
}

}  // namespace detail_average

// Samples `draws` pairs of short Weierstrass curves y^2 = x^3 + ax + b with
// |a| <= a_bound, |b| <= b_bound, derives each pair's constant under the
// Serre-pair assumption, and reports the mean plus central moments about the
// generic constant.
inline MomentReport sample_average(u64 a_bound, u64 b_bound, u64 draws, unsigned t, u64 seed,
                                   u64 cutoff = 100'000) {
  if (a_bound == 0 || b_bound == 0) throw std::domain_error("sample_average: bounds must be positive");
  if (draws == 0) throw std::domain_error("sample_average: draws must be >= 1");
  if (t == 0) throw std::domain_error("sample_average: moment order must be >= 1");

  GenericConstant generic = generic_constant(cutoff);
  const double c_generic = generic.value();

  MomentReport rep;
  rep.requested = draws;
  rep.reference = c_generic;
  rep.central_moments.assign(t, 0.0);

  std::vector<double> values;
  values.reserve(draws);

  for (u64 i = 0; i < draws; ++i) {
    u64 rng = seed ^ (i * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
    long long a1 = detail_average::draw_int(rng, a_bound);
    long long b1 = detail_average::draw_int(rng, b_bound);
    long long a2 = detail_average::draw_int(rng, a_bound);
    long long b2 = detail_average::draw_int(rng, b_bound);
    try {
      WeierstrassCurve e1(0, 0, 0, static_cast<long>(a1), static_cast<long>(b1));
      WeierstrassCurve e2(0, 0, 0, static_cast<long>(a2), static_cast<long>(b2));
      auto p1 = serre_level(e1);
      auto p2 = serre_level(e2);
      auto pair = pair_profile(p1, p2);
      Rational r = pair_ratio(pair);
      values.push_back(r.get_d() * c_generic);
    } catch (const SingularCurve&) {
      ++rep.skipped.singular;
    } catch (const NotSerreCurve&) {
      ++rep.skipped.delta_unit;
    } catch (const NotSerrePair&) {
      ++rep.skipped.equal_level;
    } catch (const Unfactorable&) {
      ++rep.skipped.unfactorable;
    }
  }

  rep.sample_count = values.size();
  if (!values.empty()) {
    double sum = 0;
    rep.min_value = values.front();
    rep.max_value = values.front();
    for (double v : values) {
      sum += v;
      rep.min_value = std::min(rep.min_value, v);
      rep.max_value = std::max(rep.max_value, v);
    }
    rep.mean = sum / static_cast<double>(values.size());
    for (unsigned k = 1; k <= t; ++k) {
      double acc = 0;
      for (double v : values) {
        double dpow = 1;
        for (unsigned j = 0; j < k; ++j) dpow *= (v - c_generic);
        acc += dpow;
      }
      rep.central_moments[k - 1] = acc / static_cast<double>(values.size());
    }
  }
  return rep;
}

}  // namespace coprime
