#pragma once

// Elementary number-theoretic primitives: segmented prime sieve, trial-division
// factorization with a deterministic 64-bit primality certificate, Moebius
// function, Jacobi symbol, and signed squarefree parts.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

#include "coprime/errors.hpp"

namespace coprime {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin for 64-bit inputs; the base set below is a
// known witness set for all n < 3.3e24.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Simple sieve used to seed the segmented sieve and for small prime lists.
inline std::vector<u64> small_primes(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> comp(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (!comp[i]) {
      primes.push_back(i);
      for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
    }
  }
  return primes;
}

// Segmented sieve over [2, limit]. Memory is bounded by the segment size,
// not the limit. Single-consumer; independent sieves over disjoint ranges
// may run concurrently.
class PrimeSieve {
 public:
  static constexpr u64 kDefaultSegment = u64(1) << 20;

  explicit PrimeSieve(u64 limit, u64 segment_size = kDefaultSegment)
      : limit_(limit), segment_size_(std::max<u64>(segment_size, 64)) {}

  u64 limit() const { return limit_; }

  // Calls fn(p) for every prime p in [lo, hi] in ascending order.
  template <typename Fn>
  static void for_each_in_range(u64 lo, u64 hi, Fn&& fn, u64 segment_size = kDefaultSegment) {
    if (hi < 2 || hi < lo) return;
    lo = std::max<u64>(lo, 2);
    u64 root = 1;
    while ((root + 1) * (root + 1) <= hi) ++root;
    const auto base = small_primes(root);
    std::vector<bool> seg;
    for (u64 start = lo; start <= hi; start += segment_size) {
      const u64 end = std::min(hi, start + segment_size - 1);
      seg.assign(end - start + 1, true);
      for (u64 p : base) {
        u64 first = std::max(p * p, (start + p - 1) / p * p);
        for (u64 j = first; j <= end; j += p) seg[j - start] = false;
      }
      for (u64 i = start; i <= end; ++i) {
        if (seg[i - start]) fn(i);
      }
    }
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for_each_in_range(2, limit_, std::forward<Fn>(fn), segment_size_);
  }

  u64 count() const {
    u64 n = 0;
    for_each([&](u64) { ++n; });
    return n;
  }

  std::vector<u64> to_vector() const {
    std::vector<u64> v;
    for_each([&](u64 p) { v.push_back(p); });
    return v;
  }

 private:
  u64 limit_;
  u64 segment_size_;
};

inline PrimeSieve sieve_primes(u64 limit, u64 segment_size = PrimeSieve::kDefaultSegment) {
  return PrimeSieve(limit, segment_size);
}

// Sign and sorted (prime, exponent) list. `complete` is false when a
// composite cofactor above the trial bound remains; the cofactor is kept
// for diagnostics.
struct FactoredInteger {
  int sign = 1;
  std::vector<std::pair<u64, int>> factors;
  bool complete = true;
  mpz_class cofactor = 1;

  mpz_class value() const {
    mpz_class v = sign;
    for (auto [p, e] : factors) {
      for (int i = 0; i < e; ++i) v *= mpz_class(static_cast<unsigned long>(p));
    }
    return v * cofactor;
  }

  mpz_class squarefree_part() const {
    mpz_class d = sign;
    for (auto [p, e] : factors) {
      if (e & 1) d *= mpz_class(static_cast<unsigned long>(p));
    }
    return d;
  }

  mpz_class radical() const {
    mpz_class r = 1;
    for (auto [p, e] : factors) r *= mpz_class(static_cast<unsigned long>(p));
    return r;
  }

  // Enumerates all positive divisors (complete factorizations only).
  std::vector<mpz_class> divisors() const {
    std::vector<mpz_class> divs{1};
    for (auto [p, e] : factors) {
      const std::size_t n = divs.size();
      mpz_class pe = 1;
      for (int i = 1; i <= e; ++i) {
        pe *= mpz_class(static_cast<unsigned long>(p));
        for (std::size_t j = 0; j < n; ++j) divs.push_back(divs[j] * pe);
      }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
  }
};

// Trial division up to trial_bound (with early exit once the square of the
// trial prime exceeds the cofactor), then a primality certificate on the
// remainder. 64-bit cofactors get a deterministic Miller-Rabin test; larger
// ones fall back to GMP's probable-prime test and are otherwise left as an
// incomplete cofactor.
inline FactoredInteger factorize(const mpz_class& n, u64 trial_bound = 1'000'000) {
  if (n == 0) throw std::domain_error("factorize: n must be nonzero");
  FactoredInteger out;
  mpz_class rem = n;
  if (rem < 0) {
    out.sign = -1;
    rem = -rem;
  }
  auto divide_out = [&](u64 p) {
    int e = 0;
    while (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
      mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
      ++e;
    }
    if (e) out.factors.emplace_back(p, e);
  };
  divide_out(2);
  divide_out(3);
  for (u64 p = 5; p <= trial_bound; p += 6) {
    mpz_class psq = mpz_class(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
    if (psq > rem) break;
    divide_out(p);
    divide_out(p + 2);
  }
  if (rem != 1) {
    // Any cofactor left after trial division has no prime factor <= trial_bound,
    // so if it is below trial_bound^2 it is prime outright.
    mpz_class bound_sq = mpz_class(static_cast<unsigned long>(trial_bound));
    bound_sq *= bound_sq;
    if (rem.fits_ulong_p() && (rem < bound_sq || is_prime_u64(rem.get_ui()))) {
      out.factors.emplace_back(rem.get_ui(), 1);
    } else {
      out.complete = false;
      out.cofactor = rem;
    }
  }
  std::sort(out.factors.begin(), out.factors.end());
  return out;
}

inline int mobius(u64 n) {
  if (n == 0) throw std::domain_error("mobius: n must be positive");
  int k = 0;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      ++k;
    }
  }
  if (n > 1) ++k;
  return (k & 1) ? -1 : 1;
}

// Jacobi symbol (a/n) for odd n >= 1, via the reciprocity loop.
inline int jacobi(i64 a, u64 n) {
  if (n == 0 || n % 2 == 0) throw std::domain_error("jacobi: n must be odd and positive");
  u64 b = static_cast<u64>(((a % static_cast<i64>(n)) + static_cast<i64>(n)) % static_cast<i64>(n));
  int t = 1;
  while (b != 0) {
    while (b % 2 == 0) {
      b /= 2;
      u64 r = n % 8;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(b, n);
    if (b % 4 == 3 && n % 4 == 3) t = -t;
    b %= n;
  }
  return n == 1 ? t : 0;
}

// The unique squarefree d with n = d * s^2, sign preserved.
inline mpz_class squarefree_part(const mpz_class& n, u64 trial_bound = 1'000'000) {
  auto f = factorize(n, trial_bound);
  if (!f.complete)
    throw Unfactorable("squarefree_part: unfactored cofactor " + f.cofactor.get_str());
  return f.squarefree_part();
}

inline u64 gcd_u64(u64 a, u64 b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

inline u64 lcm_u64(u64 a, u64 b) { return a / gcd_u64(a, b) * b; }

// Distinct prime factors of a small integer, ascending.
inline std::vector<u64> prime_factors_u64(u64 n) {
  std::vector<u64> ps;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

inline bool is_squarefree_u64(u64 n) {
  if (n == 0) return false;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
    }
  }
  return true;
}

// Squarefree divisors of a squarefree n, ascending.
inline std::vector<u64> squarefree_divisors(u64 n) {
  auto ps = prime_factors_u64(n);
  std::vector<u64> divs{1};
  for (u64 p : ps) {
    const std::size_t m = divs.size();
    for (std::size_t i = 0; i < m; ++i) divs.push_back(divs[i] * p);
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

}  // namespace coprime
