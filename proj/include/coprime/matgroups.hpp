#pragma once

// Brute-force and CRT-combined counting in GL2(Z/nZ) and in the determinant
// fiber product: the independent oracle against which every closed-form count
// is checked. All global counts over composite squarefree moduli are built
// from per-prime enumerations; only tiny moduli are ever enumerated directly.

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include <gmpxx.h>

#include "coprime/arith.hpp"
#include "coprime/constants.hpp"
#include "coprime/errors.hpp"

namespace coprime {

struct MatModN {
  u64 n;
  u64 a, b, c, d;

  u64 det() const { return (mulmod(a, d, n) + n - mulmod(b, c, n)) % n; }
  u64 det_i_minus() const {
    // det(I - M) mod n
    u64 ia = (1 + n - a % n) % n;
    u64 id = (1 + n - d % n) % n;
    u64 nb = (n - b % n) % n;
    u64 nc = (n - c % n) % n;
    return (mulmod(ia, id, n) + n - mulmod(nb, nc, n)) % n;
  }
  bool invertible() const { return gcd_u64(det(), n) == 1; }

  MatModN reduce(u64 m) const { return MatModN{m, a % m, b % m, c % m, d % m}; }

  MatModN operator*(const MatModN& o) const {
    return MatModN{n, (mulmod(a, o.a, n) + mulmod(b, o.c, n)) % n,
                   (mulmod(a, o.b, n) + mulmod(b, o.d, n)) % n,
                   (mulmod(c, o.a, n) + mulmod(d, o.c, n)) % n,
                   (mulmod(c, o.b, n) + mulmod(d, o.d, n)) % n};
  }
};

constexpr u64 kEnumerationGuard = 10'000'000'000ull;  // n^4 bound

// Streams each element of GL2(Z/nZ) exactly once.
template <typename Fn>
inline void enumerate_gl2(u64 n, Fn&& fn) {
  if (n < 2) throw std::domain_error("enumerate_gl2: n >= 2 required");
  u64 n4 = n * n * n * n;
  if (n > 316 || n4 > kEnumerationGuard)
    throw EnumerationTooLarge("enumerate_gl2: n^4 exceeds guard for n=" + std::to_string(n));
  for (u64 a = 0; a < n; ++a)
    for (u64 b = 0; b < n; ++b)
      for (u64 c = 0; c < n; ++c)
        for (u64 d = 0; d < n; ++d) {
          MatModN m{n, a, b, c, d};
          if (m.invertible()) fn(m);
        }
}

inline mpz_class gl2_order(u64 ell) {
  // (l^2-1)(l^2-l) for prime l
  mpz_class l(static_cast<unsigned long>(ell));
  return (l * l - 1) * (l * l - l);
}

// |Delta(Z/lZ)| = l^2 (l-1)^3 (l+1)^2 for prime l.
inline mpz_class delta_order(u64 ell) {
  mpz_class l(static_cast<unsigned long>(ell));
  return l * l * (l - 1) * (l - 1) * (l - 1) * (l + 1) * (l + 1);
}

inline mpz_class delta_order_squarefree(u64 n) {
  mpz_class r = 1;
  for (u64 ell : prime_factors_u64(n)) r *= delta_order(ell);
  return r;
}

// |G1 x_Q G2| = |G1||G2| / |Q|.
inline mpz_class fiber_product_order(const mpz_class& g1, const mpz_class& g2, const mpz_class& q) {
  mpz_class prod = g1 * g2;
  if (q == 0 || prod % q != 0)
    throw std::domain_error("fiber_product_order: quotient order does not divide");
  return prod / q;
}

// #{M in GL2(Z/lZ) : det(I-M)=0, det M = alpha} by enumeration, prime l.
inline u64 count_X_alpha_prime(u64 ell, u64 alpha) {
  u64 count = 0;
  enumerate_gl2(ell, [&](const MatModN& m) {
    if (m.det_i_minus() == 0 && m.det() == alpha % ell) ++count;
  });
  return count;
}

// CRT product over the primes of squarefree n.
inline mpz_class count_X_alpha(u64 n, u64 alpha) {
  if (!is_squarefree_u64(n)) throw std::domain_error("count_X_alpha: n must be squarefree");
  if (gcd_u64(alpha % n, n) != 1) throw std::domain_error("count_X_alpha: alpha must be a unit");
  mpz_class r = 1;
  for (u64 ell : prime_factors_u64(n)) r *= count_X_alpha_prime(ell, alpha % ell);
  return r;
}

// #{(M1,M2) in Delta(Z/lZ) : det(I-M1)=det(I-M2)=0} = sum_alpha |X_l^alpha|^2.
inline mpz_class count_B(u64 ell) {
  mpz_class total = 0;
  for (u64 alpha = 1; alpha < std::max<u64>(ell, 2); ++alpha) {
    if (ell > 2 && alpha % ell == 0) continue;
    mpz_class c(static_cast<unsigned long>(count_X_alpha_prime(ell, alpha % ell)));
    total += c * c;
  }
  if (ell == 2) {
    mpz_class c(static_cast<unsigned long>(count_X_alpha_prime(2, 1)));
    total = c * c;
  }
  return total;
}

// Sign of the permutation a mod-2 matrix induces on the three nonzero
// vectors of F_2^2.
inline int epsilon_sign(const MatModN& m) {
  if (m.n != 2) throw std::domain_error("epsilon_sign: modulus must be 2");
  // nonzero vectors: (1,0), (0,1), (1,1) indexed 0,1,2
  auto apply = [&](int v) {
    u64 x = (v == 0 || v == 2) ? 1 : 0;
    u64 y = (v == 1 || v == 2) ? 1 : 0;
    u64 nx = (m.a * x + m.b * y) & 1;
    u64 ny = (m.c * x + m.d * y) & 1;
    if (nx == 1 && ny == 0) return 0;
    if (nx == 0 && ny == 1) return 1;
    return 2;
  };
  std::array<int, 3> perm{apply(0), apply(1), apply(2)};
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (perm[i] > perm[j]) ++inversions;
  return (inversions & 1) ? -1 : +1;
}

inline void check_psi_level(u64 m) {
  if (m % 2 != 0 || !is_squarefree_u64(m))
    throw std::domain_error("psi level must be even and squarefree, got " + std::to_string(m));
}

// psi_m(M) = prod_{l | m} psi_l(M mod l), with psi_2 the sign map and
// psi_l = (det(.)/l) for odd l.
inline int psi_value(const MatModN& m, u64 level) {
  check_psi_level(level);
  if (m.n % level != 0) throw std::domain_error("psi_value: level must divide modulus");
  int sign = epsilon_sign(m.reduce(2));
  for (u64 ell : prime_factors_u64(level)) {
    if (ell == 2) continue;
    sign *= jacobi(static_cast<i64>(m.reduce(ell).det()), ell);
  }
  return sign;
}

// #(psi_n^{-1}(+1) cap X_n^alpha) by direct enumeration of GL2(Z/nZ).
inline mpz_class count_psi_plus_X_alpha(u64 n, u64 alpha) {
  check_psi_level(n);
  if (gcd_u64(alpha % n, n) != 1)
    throw std::domain_error("count_psi_plus_X_alpha: alpha must be a unit");
  u64 count = 0;
  enumerate_gl2(n, [&](const MatModN& m) {
    if (m.det_i_minus() == 0 && m.det() == alpha % n && psi_value(m, n) == +1) ++count;
  });
  return mpz_class(static_cast<unsigned long>(count));
}

// One enumeration pass over GL2(Z/nZ) tallying, for every unit alpha,
// |X_n^alpha| and the size of its psi_n = +1 part.
struct PsiSplitTable {
  u64 n;
  std::vector<u64> total;  // indexed by alpha
  std::vector<u64> plus;
};

inline PsiSplitTable psi_split_direct(u64 n) {
  check_psi_level(n);
  PsiSplitTable t{n, std::vector<u64>(n, 0), std::vector<u64>(n, 0)};
  auto odd_primes = prime_factors_u64(n);
  enumerate_gl2(n, [&](const MatModN& m) {
    if (m.det_i_minus() != 0) return;
    u64 alpha = m.det();
    t.total[alpha] += 1;
    int sign = epsilon_sign(m.reduce(2));
    for (u64 ell : odd_primes) {
      if (ell == 2) continue;
      sign *= jacobi(static_cast<i64>(m.reduce(ell).det()), ell);
    }
    if (sign == +1) t.plus[alpha] += 1;
  });
  return t;
}

// Per-prime table of |X_l^alpha| split by the local character sign.
struct LocalXTable {
  u64 ell;
  std::vector<u64> total;  // indexed by alpha in [0, ell), zero at non-units
  std::vector<i64> diff;   // n_plus - n_minus under psi_ell
};

inline LocalXTable local_x_table(u64 ell) {
  LocalXTable t{ell, std::vector<u64>(std::max<u64>(ell, 2), 0),
                std::vector<i64>(std::max<u64>(ell, 2), 0)};
  enumerate_gl2(ell, [&](const MatModN& m) {
    if (m.det_i_minus() != 0) return;
    u64 alpha = m.det();
    t.total[alpha] += 1;
    int s = (ell == 2) ? epsilon_sign(m) : jacobi(static_cast<i64>(alpha), ell);
    t.diff[alpha] += s;
  });
  return t;
}

// Per-alpha brute-force sums S(n) = sum |X_n^alpha|^2 and
// T_r(n) = sum (alpha/r_odd) |X_n^alpha|^2, n squarefree, r | n.
// Cross-checked on the spot against the closed forms in terms of F1/F2.
inline std::pair<mpz_class, mpz_class> char_sums(u64 n, u64 r) {
  if (!is_squarefree_u64(n)) throw std::domain_error("char_sums: n must be squarefree");
  if (r == 0 || n % r != 0) throw std::domain_error("char_sums: r must divide n");
  u64 r_odd = r;
  while (r_odd % 2 == 0) r_odd /= 2;

  std::map<u64, LocalXTable> tables;
  for (u64 ell : prime_factors_u64(n)) tables.emplace(ell, local_x_table(ell));

  mpz_class S = 0, T = 0;
  for (u64 alpha = 1; alpha <= n; ++alpha) {
    if (gcd_u64(alpha % n, n) != 1) continue;
    mpz_class x = 1;
    for (auto& [ell, t] : tables) x *= t.total[alpha % ell];
    S += x * x;
    T += mpz_class(jacobi(static_cast<i64>(alpha), r_odd)) * x * x;
  }

  // closed forms: S(n) = |Delta| F1(n); T_r(n) = (-4/5 if r even) |Delta| F1(n/r) F2(r)
  mpz_class delta_n = delta_order_squarefree(n);
  Rational s_closed = Rational(delta_n) * F1(n);
  Rational t_closed = Rational(delta_n) * F1(n / r) * F2(r);
  if (r % 2 == 0) t_closed *= Rational(-4, 5);
  if (Rational(S) != s_closed || Rational(T) != t_closed)
    throw std::logic_error("char_sums: brute-force and closed forms disagree for n=" +
                           std::to_string(n) + " r=" + std::to_string(r));
  return {S, T};
}

// f(d) for a Serre pair with levels (m1, m2), computed entirely from
// per-prime brute-force tables combined by CRT; the closed-form route lives
// in constants.hpp and the two are compared in the verification suites.
//
//   f(d) = [sum_alpha c1(alpha) c2(alpha)] / |G(d)|
//   c_i(alpha) = #(H_i(d) cap X_d^alpha),
//   H_i(d) = ker psi_{m_i} when m_i | d, else all of GL2(Z/dZ),
//   |G(d)| = |Delta(Z/dZ)| / 2^{#{i : m_i | d}}.
inline Rational f_oracle(u64 d, u64 m1, u64 m2) {
  if (!is_squarefree_u64(d)) throw std::domain_error("f_oracle: d must be squarefree");
  for (u64 m : {m1, m2}) {
    if (m % 2 != 0 || m < 6) throw std::domain_error("f_oracle: invalid level");
    u64 modd = m;
    while (modd % 2 == 0) modd /= 2;
    if (!is_squarefree_u64(modd)) throw std::domain_error("f_oracle: level odd part not squarefree");
  }
  if (d == 1) return Rational(1);

  auto ells = prime_factors_u64(d);
  std::map<u64, LocalXTable> tables;
  for (u64 ell : ells) tables.emplace(ell, local_x_table(ell));

  const bool div1 = d % m1 == 0;
  const bool div2 = d % m2 == 0;

  // c(alpha) for H = ker psi_m (m | d) is (1/2)(|X_d^a| + prod_{l|m} diff_l
  // * prod_{l|d, l∤m} |X_l^a|); for H = GL2 it is |X_d^a|.
  auto kernel_count = [&](u64 m, u64 alpha) -> mpz_class {
    mpz_class tot = 1, signed_part = 1;
    for (u64 ell : ells) {
      auto& t = tables.at(ell);
      tot *= t.total[alpha % ell];
      signed_part *= (m % ell == 0) ? mpz_class(t.diff[alpha % ell])
                                    : mpz_class(static_cast<unsigned long>(t.total[alpha % ell]));
    }
    mpz_class two_c = tot + signed_part;
    return two_c / 2;
  };

  mpz_class numer = 0;
  for (u64 alpha = 1; alpha <= d; ++alpha) {
    if (gcd_u64(alpha % d, d) != 1) continue;
    mpz_class c1, c2;
    if (div1) {
      c1 = kernel_count(m1, alpha);
    } else {
      c1 = 1;
      for (u64 ell : ells) c1 *= tables.at(ell).total[alpha % ell];
    }
    if (div2) {
      c2 = kernel_count(m2, alpha);
    } else {
      c2 = 1;
      for (u64 ell : ells) c2 *= tables.at(ell).total[alpha % ell];
    }
    numer += c1 * c2;
  }

  int halvings = (div1 ? 1 : 0) + (div2 ? 1 : 0);
  mpz_class group = delta_order_squarefree(d);
  for (int i = 0; i < halvings; ++i) group /= 2;
  Rational f(numer, group);
  f.canonicalize();
  return f;
}

}  // namespace coprime
