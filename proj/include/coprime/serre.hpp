#pragma once

// Adelic levels derived from curve discriminants under a declared Serre-curve
// assumption. Delta' is the squarefree part of the discriminant; the level is
// 2|Delta'| when Delta' is 1 mod 4 and 4|Delta'| otherwise.

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "coprime/arith.hpp"
#include "coprime/constants.hpp"
#include "coprime/curves.hpp"
#include "coprime/errors.hpp"

namespace coprime {

struct SerreCurveProfile {
  mpz_class delta_prime;  // signed squarefree part of the discriminant
  u64 d_E = 0;            // conductor of Q(sqrt(delta_prime))
  u64 M_level = 0;        // lcm(2, d_E)
  u64 m_E = 0;            // adelic level
  bool serre_assumed = true;
  std::string label;
};

inline SerreCurveProfile serre_level(const WeierstrassCurve& curve,
                                     u64 trial_bound = 1'000'000) {
  mpz_class dp = squarefree_part(curve.discriminant, trial_bound);
  if (dp == 1 || dp == -1)
    throw NotSerreCurve("squarefree discriminant part is " + dp.get_str() +
                        "; mod-4 image is not surjective so the curve is not a Serre curve");
  mpz_class abs_dp = abs(dp);
  if (!abs_dp.fits_ulong_p())
    throw Unfactorable("squarefree discriminant part too large: " + dp.get_str());
  u64 a = abs_dp.get_ui();

  SerreCurveProfile out;
  out.delta_prime = dp;
  bool one_mod_four = mpz_class(dp % 4 + 4) % 4 == 1;
  out.d_E = one_mod_four ? a : 4 * a;
  out.M_level = lcm_u64(2, out.d_E);
  out.m_E = one_mod_four ? 2 * a : 4 * a;
  out.label = curve.label;
  if (out.m_E < 6)
    throw NotSerreCurve("derived level " + std::to_string(out.m_E) + " below 6");
  return out;
}

inline SerrePairProfile pair_profile(const SerreCurveProfile& p1, const SerreCurveProfile& p2) {
  if (p1.m_E == p2.m_E)
    throw NotSerrePair("equal adelic levels " + std::to_string(p1.m_E) +
                       "; a genuine Serre pair has distinct levels");
  return SerrePairProfile(p1.m_E, p2.m_E);
}

}  // namespace coprime
