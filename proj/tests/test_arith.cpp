#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coprime/arith.hpp"

using namespace coprime;

TEST_CASE("deterministic primality matches a sieve up to 10^4") {
  auto primes = small_primes(10000);
  std::vector<bool> is_p(10001, false);
  for (u64 p : primes) is_p[p] = true;
  for (u64 n = 0; n <= 10000; ++n) CHECK(is_prime_u64(n) == is_p[n]);
}

TEST_CASE("primality on 64-bit edge cases") {
  CHECK(is_prime_u64(2147483647ull));           // 2^31 - 1
  CHECK(is_prime_u64(18446744073709551557ull)); // largest 64-bit prime
  CHECK_FALSE(is_prime_u64(3215031751ull));     // strong pseudoprime to 2,3,5,7
  CHECK_FALSE(is_prime_u64(1ull));
  CHECK_FALSE(is_prime_u64(25326001ull));
}

TEST_CASE("segmented sieve agrees with the simple sieve up to 10^6") {
  auto simple = small_primes(1000000);
  auto segmented = sieve_primes(1000000, 1 << 14).to_vector();
  REQUIRE(segmented.size() == simple.size());
  CHECK(segmented == simple);
  CHECK(segmented.size() == 78498);
}

TEST_CASE("ranged sieve covers an interior window") {
  std::vector<u64> got;
  PrimeSieve::for_each_in_range(999900, 1000100, [&](u64 p) { got.push_back(p); });
  std::vector<u64> want;
  for (u64 n = 999900; n <= 1000100; ++n)
    if (is_prime_u64(n)) want.push_back(n);
  CHECK(got == want);
}

TEST_CASE("factorize recovers sign, exponents, and value") {
  auto f = factorize(mpz_class(-21512960));
  CHECK(f.sign == -1);
  CHECK(f.complete);
  CHECK(f.factors == std::vector<std::pair<u64, int>>{{2, 8}, {5, 1}, {7, 5}});
  CHECK(f.value() == mpz_class(-21512960));
  CHECK(f.squarefree_part() == mpz_class(-35));
  CHECK(f.radical() == mpz_class(70));
}

TEST_CASE("factorize flags an unfactored composite cofactor") {
  mpz_class n = mpz_class("10000000019") * mpz_class("10000000033");
  auto f = factorize(n, 1000);
  CHECK_FALSE(f.complete);
  CHECK(f.cofactor == n);
  CHECK(f.value() == n);
}

TEST_CASE("factorize certifies a large prime cofactor below the bound squared") {
  auto f = factorize(mpz_class("10000000019") * 4, 1000000);
  CHECK(f.complete);
  CHECK(f.factors == std::vector<std::pair<u64, int>>{{2, 2}, {10000000019ull, 1}});
}

TEST_CASE("divisor enumeration of a complete factorization") {
  auto f = factorize(mpz_class(60));
  auto divs = f.divisors();
  CHECK(divs.size() == 12);
  CHECK(divs.front() == 1);
  CHECK(divs.back() == 60);
}

TEST_CASE("mobius satisfies sum over divisors = [n = 1]") {
  for (u64 n = 1; n <= 10000; ++n) {
    int total = 0;
    for (u64 d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      total += mobius(d);
      if (d != n / d) total += mobius(n / d);
    }
    CHECK(total == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("jacobi symbol is multiplicative in the numerator") {
  for (u64 n = 1; n <= 99; n += 2)
    for (i64 a = -10; a <= 10; ++a)
      for (i64 b = -10; b <= 10; ++b)
        CHECK(jacobi(a * b, n) == jacobi(a, n) * jacobi(b, n));
}

TEST_CASE("jacobi on primes matches the Euler criterion") {
  for (u64 p : {3ull, 5ull, 7ull, 11ull, 13ull, 101ull, 997ull}) {
    for (i64 a = 1; a < static_cast<i64>(p); ++a) {
      u64 e = powmod(static_cast<u64>(a), (p - 1) / 2, p);
      int want = e == 1 ? 1 : (e == p - 1 ? -1 : 0);
      CHECK(jacobi(a, p) == want);
    }
  }
}

TEST_CASE("jacobi rejects even modulus") {
  CHECK_THROWS_AS(jacobi(3, 4), std::domain_error);
}

TEST_CASE("squarefree part leaves a square complement") {
  for (long n = -1000; n <= 1000; ++n) {
    if (n == 0) continue;
    mpz_class d = squarefree_part(mpz_class(n));
    mpz_class q = mpz_class(n) / d;
    CHECK(q > 0);
    mpz_class r = sqrt(q);
    CHECK(r * r == q);
    CHECK(squarefree_part(d) == d);
  }
}

TEST_CASE("squarefree part throws when the cofactor resists factoring") {
  mpz_class n = mpz_class("10000000019") * mpz_class("10000000033");
  CHECK_THROWS_AS(squarefree_part(n, 1000), Unfactorable);
}

TEST_CASE("u64 helpers: gcd, lcm, prime factors, squarefree") {
  CHECK(gcd_u64(70, 210) == 70);
  CHECK(lcm_u64(6, 10) == 30);
  CHECK(prime_factors_u64(210) == std::vector<u64>{2, 3, 5, 7});
  CHECK(is_squarefree_u64(210));
  CHECK_FALSE(is_squarefree_u64(12));
  CHECK(squarefree_divisors(30) == std::vector<u64>{1, 2, 3, 5, 6, 10, 15, 30});
}
