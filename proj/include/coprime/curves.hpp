#pragma once

// Elliptic curves over Q in long Weierstrass form, reduction mod p, and
// point counting #E(F_p). Counting dispatches between a full character-sum
// enumeration for small p and baby-step/giant-step order finding above it.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "coprime/arith.hpp"
#include "coprime/errors.hpp"

namespace coprime {

struct WeierstrassCurve {
  mpz_class a1, a2, a3, a4, a6;
  mpz_class discriminant;
  std::string label;

  WeierstrassCurve(mpz_class a1_, mpz_class a2_, mpz_class a3_, mpz_class a4_, mpz_class a6_,
                   std::string label_ = {})
      : a1(std::move(a1_)),
        a2(std::move(a2_)),
        a3(std::move(a3_)),
        a4(std::move(a4_)),
        a6(std::move(a6_)),
        label(std::move(label_)) {
    discriminant = compute_discriminant(a1, a2, a3, a4, a6);
    if (discriminant == 0) throw SingularCurve("curve " + label + " has zero discriminant");
  }

  static mpz_class compute_discriminant(const mpz_class& a1, const mpz_class& a2,
                                        const mpz_class& a3, const mpz_class& a4,
                                        const mpz_class& a6) {
    mpz_class b2 = a1 * a1 + 4 * a2;
    mpz_class b4 = 2 * a4 + a1 * a3;
    mpz_class b6 = a3 * a3 + 4 * a6;
    mpz_class b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  }
};

inline mpz_class discriminant(const WeierstrassCurve& curve) { return curve.discriminant; }

inline bool is_good_reduction(const WeierstrassCurve& curve, u64 p) {
  return mpz_fdiv_ui(curve.discriminant.get_mpz_t(), p) != 0;
}

struct CurveModP {
  u64 p;
  u64 a1, a2, a3, a4, a6;
};

inline u64 reduce_mod(const mpz_class& a, u64 p) { return mpz_fdiv_ui(a.get_mpz_t(), p); }

inline CurveModP reduce(const WeierstrassCurve& curve, u64 p) {
  if (!is_good_reduction(curve, p)) throw BadReduction(p);
  return CurveModP{p, reduce_mod(curve.a1, p), reduce_mod(curve.a2, p), reduce_mod(curve.a3, p),
                   reduce_mod(curve.a4, p), reduce_mod(curve.a6, p)};
}

struct PointCount {
  u64 p;
  u64 order;
  i64 trace;  // a_p = p + 1 - order
};

namespace detail {

inline u64 addm(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
inline u64 subm(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 invmod(u64 a, u64 p) {
  // extended Euclid; p prime, a != 0 mod p
  i64 t = 0, nt = 1;
  i64 r = static_cast<i64>(p), nr = static_cast<i64>(a % p);
  while (nr != 0) {
    i64 q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  return static_cast<u64>(t < 0 ? t + static_cast<i64>(p) : t);
}

// Short Weierstrass y^2 = x^3 + Ax + B equivalent to the long model, valid
// for p >= 5 (uses the c4/c6 model, an isomorphism away from 2 and 3).
struct ShortCurve {
  u64 p, A, B;
};

inline ShortCurve to_short(const CurveModP& c) {
  const u64 p = c.p;
  u64 b2 = addm(mulmod(c.a1, c.a1, p), mulmod(4 % p, c.a2, p), p);
  u64 b4 = addm(mulmod(2 % p, c.a4, p), mulmod(c.a1, c.a3, p), p);
  u64 b6 = addm(mulmod(c.a3, c.a3, p), mulmod(4 % p, c.a6, p), p);
  u64 c4 = subm(mulmod(b2, b2, p), mulmod(24 % p, b4, p), p);
  u64 c6 = subm(mulmod(36 % p, mulmod(b2, b4, p), p),
                addm(mulmod(b2, mulmod(b2, b2, p), p), mulmod(216 % p, b6, p), p), p);
  // y^2 = x^3 - 27 c4 x - 54 c6
  u64 A = mulmod(27 % p, c4 == 0 ? 0 : p - c4, p);
  u64 B = mulmod(54 % p, c6 == 0 ? 0 : p - c6, p);
  return ShortCurve{p, A, B};
}

struct AffinePoint {
  u64 x = 0, y = 0;
  bool infinity = true;
};

// Affine addition on y^2 = x^3 + Ax + B.
inline AffinePoint ec_add(const AffinePoint& P, const AffinePoint& Q, const ShortCurve& E) {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  const u64 p = E.p;
  u64 lambda;
  if (P.x == Q.x) {
    if (addm(P.y, Q.y, p) == 0) return AffinePoint{};  // P = -Q
    u64 num = addm(mulmod(3 % p, mulmod(P.x, P.x, p), p), E.A, p);
    lambda = mulmod(num, invmod(addm(P.y, P.y, p), p), p);
  } else {
    lambda = mulmod(subm(Q.y, P.y, p), invmod(subm(Q.x, P.x, p), p), p);
  }
  u64 x3 = subm(subm(mulmod(lambda, lambda, p), P.x, p), Q.x, p);
  u64 y3 = subm(mulmod(lambda, subm(P.x, x3, p), p), P.y, p);
  return AffinePoint{x3, y3, false};
}

inline AffinePoint ec_neg(const AffinePoint& P, const ShortCurve& E) {
  if (P.infinity) return P;
  return AffinePoint{P.x, P.y == 0 ? 0 : E.p - P.y, false};
}

inline AffinePoint ec_mul(u64 k, AffinePoint P, const ShortCurve& E) {
  AffinePoint R{};
  while (k) {
    if (k & 1) R = ec_add(R, P, E);
    P = ec_add(P, P, E);
    k >>= 1;
  }
  return R;
}

inline u64 splitmix64(u64& state) {
  u64 z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Tonelli-Shanks square root mod p; requires (a/p) = 1.
inline u64 sqrt_mod(u64 a, u64 p) {
  if (a == 0) return 0;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) q >>= 1, ++s;
  u64 z = 2;
  while (jacobi(static_cast<i64>(z), p) != -1) ++z;
  u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 t2 = t;
    u64 i = 0;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

inline AffinePoint random_point(const ShortCurve& E, u64& rng) {
  const u64 p = E.p;
  for (;;) {
    u64 x = splitmix64(rng) % p;
    u64 rhs = addm(mulmod(x, addm(mulmod(x, x, p), E.A, p), p), E.B, p);
    if (rhs == 0) return AffinePoint{x, 0, false};
    if (jacobi(static_cast<i64>(rhs), p) == 1) {
      u64 y = sqrt_mod(rhs, p);
      return AffinePoint{x, y, false};
    }
  }
}

// Finds some positive m in the Hasse interval with m*P = O, by BSGS on
// (p+1+a)P = O over |a| <= 2*sqrt(p). Writing a = cW +/- b, the baby table
// holds bP and the giant walk visits Q + c(WP) with Q = (p+1)P.
inline u64 order_multiple_bsgs(const AffinePoint& P, const ShortCurve& E) {
  const u64 p = E.p;
  u64 two_sqrt = 2 * static_cast<u64>(std::sqrt(static_cast<double>(p)));
  while (two_sqrt * two_sqrt < 4 * p) ++two_sqrt;
  const u64 W = static_cast<u64>(std::sqrt(static_cast<double>(2 * two_sqrt))) + 1;

  struct Baby {
    u64 x, y, b;
  };
  std::vector<Baby> baby;  // bP for b in [1, W), sorted by x
  baby.reserve(W);
  AffinePoint B = P;
  for (u64 b = 1; b < W && !B.infinity; ++b) {
    baby.push_back({B.x, B.y, b});
    B = ec_add(B, P, E);
  }
  std::sort(baby.begin(), baby.end(), [](const Baby& l, const Baby& r) { return l.x < r.x; });

  auto try_a = [&](i64 a) -> u64 {
    if (a < -static_cast<i64>(two_sqrt) || a > static_cast<i64>(two_sqrt)) return 0;
    u64 m = static_cast<u64>(static_cast<i64>(p) + 1 + a);
    return ec_mul(m, P, E).infinity ? m : 0;
  };

  AffinePoint Q = ec_mul(p + 1, P, E);
  AffinePoint WP = ec_mul(W, P, E);
  const i64 C = static_cast<i64>(two_sqrt / W) + 2;
  AffinePoint step = ec_neg(WP, E);
  AffinePoint S = ec_add(Q, ec_mul(static_cast<u64>(C), WP, E), E);
  for (i64 c = C; c >= -C; --c) {
    if (S.infinity) {
      if (u64 m = try_a(c * static_cast<i64>(W))) return m;
    } else {
      auto it = std::lower_bound(baby.begin(), baby.end(), S.x,
                                 [](const Baby& l, u64 x) { return l.x < x; });
      for (; it != baby.end() && it->x == S.x; ++it) {
        // S = -bP  =>  a = cW + b ; S = bP  =>  a = cW - b
        if (S.y == (it->y == 0 ? 0 : p - it->y)) {
          if (u64 m = try_a(c * static_cast<i64>(W) + static_cast<i64>(it->b))) return m;
        }
        if (S.y == it->y) {
          if (u64 m = try_a(c * static_cast<i64>(W) - static_cast<i64>(it->b))) return m;
        }
      }
    }
    S = ec_add(S, step, E);
  }
  // P of very small order is caught by the baby walk hitting infinity.
  AffinePoint R = P;
  for (u64 m = 1; m <= W + 1; ++m) {
    if (R.infinity) return m;
    R = ec_add(R, P, E);
  }
  throw std::logic_error("order_multiple_bsgs: no annihilating multiple found");
}

// Exact order of P given a multiple m of it.
inline u64 exact_order(const AffinePoint& P, u64 m, const ShortCurve& E) {
  u64 ord = m;
  for (u64 q : prime_factors_u64(m)) {
    while (ord % q == 0 && ec_mul(ord / q, P, E).infinity) ord /= q;
  }
  return ord;
}

}  // namespace detail

// Exact order via full enumeration: a quadratic character sum for p > 3 and
// direct point enumeration for p in {2, 3}.
inline PointCount count_points_naive(const CurveModP& c) {
  const u64 p = c.p;
  u64 order;
  if (p <= 3) {
    order = 1;  // point at infinity
    for (u64 x = 0; x < p; ++x) {
      for (u64 y = 0; y < p; ++y) {
        u64 lhs = (y * y + c.a1 * x * y + c.a3 * y) % p;
        u64 rhs = (x * x * x + c.a2 * x * x + c.a4 * x + c.a6) % p;
        if (lhs == rhs) ++order;
      }
    }
  } else {
    auto E = detail::to_short(c);
    i64 sum = 0;
    for (u64 x = 0; x < p; ++x) {
      u64 rhs = detail::addm(mulmod(x, detail::addm(mulmod(x, x, p), E.A, p), p), E.B, p);
      sum += jacobi(static_cast<i64>(rhs), p);
    }
    order = static_cast<u64>(static_cast<i64>(p) + 1 + sum);
  }
  return PointCount{p, order, static_cast<i64>(p) + 1 - static_cast<i64>(order)};
}

// Exact order by accumulating point orders on the curve and its quadratic
// twist until a unique group order survives in the Hasse interval. The curve
// order N and twist order N' satisfy N = p+1-a, N' = p+1+a.
inline PointCount count_points_bsgs(const CurveModP& c, u64 seed = 1) {
  const u64 p = c.p;
  assert(p > 3);
  auto E = detail::to_short(c);

  // quadratic twist by a non-residue g: y^2 = x^3 + A g^2 x + B g^3
  u64 g = 2;
  while (jacobi(static_cast<i64>(g), p) != -1) ++g;
  detail::ShortCurve Et{p, mulmod(E.A, mulmod(g, g, p), p), mulmod(E.B, mulmod(g, mulmod(g, g, p), p), p)};

  u64 two_sqrt = 2 * static_cast<u64>(std::sqrt(static_cast<double>(p)));
  while (two_sqrt * two_sqrt < 4 * p) ++two_sqrt;
  const i64 lo = static_cast<i64>(p) + 1 - static_cast<i64>(two_sqrt);
  const i64 hi = static_cast<i64>(p) + 1 + static_cast<i64>(two_sqrt);

  u64 rng = seed ^ (p * 0x9e3779b97f4a7c15ull);
  u64 L = 1, Lt = 1;  // known divisors of N and N'
  for (int iter = 0; iter < 64; ++iter) {
    const bool twist = iter & 1;
    const detail::ShortCurve& curve = twist ? Et : E;
    auto P = detail::random_point(curve, rng);
    u64 m = detail::order_multiple_bsgs(P, curve);
    u64 ord = detail::exact_order(P, m, curve);
    (twist ? Lt : L) = lcm_u64(twist ? Lt : L, ord);

    // candidates: N in [lo,hi], L | N, Lt | (2p+2-N)
    u64 found = 0;
    int nfound = 0;
    i64 first = lo + (L - (lo % static_cast<i64>(L))) % static_cast<i64>(L);
    for (i64 N = first; N <= hi; N += static_cast<i64>(L)) {
      i64 Ntw = 2 * static_cast<i64>(p) + 2 - N;
      if (Ntw % static_cast<i64>(Lt) == 0) {
        found = static_cast<u64>(N);
        if (++nfound > 1) break;
      }
    }
    if (nfound == 1) {
      return PointCount{p, found, static_cast<i64>(p) + 1 - static_cast<i64>(found)};
    }
  }
  throw std::logic_error("count_points_bsgs: order not pinned down (p=" + std::to_string(p) + ")");
}

constexpr u64 kNaiveThreshold = 1024;

inline PointCount count_points(const WeierstrassCurve& curve, u64 p, u64 seed = 1) {
  auto c = reduce(curve, p);  // throws BadReduction
  return p <= kNaiveThreshold ? count_points_naive(c) : count_points_bsgs(c, seed);
}

}  // namespace coprime
