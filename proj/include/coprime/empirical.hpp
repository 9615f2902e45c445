#pragma once

// Prime-by-prime experiments: pi_coprime(x) scans with chunked parallelism and
// checkpoint/resume, the divisor counts A_d(x), the finite inclusion-exclusion
// identity, the residue-pattern obstruction scan, and the prediction-versus-
// observation report.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "coprime/arith.hpp"
#include "coprime/constants.hpp"
#include "coprime/curves.hpp"
#include "coprime/errors.hpp"
#include "coprime/serre.hpp"

namespace coprime {

struct CheckpointRecord {
  u64 range_end = 0;  // all primes <= range_end are accounted for
  u64 coprime_count = 0;
  u64 good_prime_count = 0;
  std::vector<u64> excluded_primes;
};

struct CoprimeCount {
  u64 x = 0;
  u64 coprime_count = 0;
  u64 good_prime_count = 0;
  std::vector<u64> excluded_primes;  // bad primes for either curve, <= x
  std::vector<CheckpointRecord> checkpoints;

  u64 pi_x() const { return good_prime_count + excluded_primes.size(); }
};

namespace detail_empirical {

constexpr u64 kChunkSpan = u64(1) << 20;

inline u64 prime_seed(u64 seed, u64 p) { return seed ^ (p * 0x9e3779b97f4a7c15ull); }

struct ChunkResult {
  u64 index = 0;
  u64 coprime = 0;
  u64 good = 0;
  std::vector<u64> excluded;
};

// Scans primes in [lo, hi] for one chunk.
inline ChunkResult scan_chunk(const WeierstrassCurve& e1, const WeierstrassCurve& e2, u64 index,
                              u64 lo, u64 hi, u64 seed) {
  ChunkResult out;
  out.index = index;
  PrimeSieve::for_each_in_range(lo, hi, [&](u64 p) {
    if (!is_good_reduction(e1, p) || !is_good_reduction(e2, p)) {
      out.excluded.push_back(p);
      return;
    }
    u64 s = prime_seed(seed, p);
    u64 n1 = count_points(e1, p, s).order;
    u64 n2 = count_points(e2, p, s).order;
    ++out.good;
    if (gcd_u64(n1, n2) == 1) ++out.coprime;
  });
  return out;
}

inline void to_json(nlohmann::json& j, const CheckpointRecord& r) {
  j = nlohmann::json{{"range_end", r.range_end},
                     {"coprime_count", r.coprime_count},
                     {"good_prime_count", r.good_prime_count},
                     {"excluded_primes", r.excluded_primes}};
}

inline CheckpointRecord checkpoint_from_json(const nlohmann::json& j) {
  CheckpointRecord r;
  r.range_end = j.at("range_end").get<u64>();
  r.coprime_count = j.at("coprime_count").get<u64>();
  r.good_prime_count = j.at("good_prime_count").get<u64>();
  r.excluded_primes = j.at("excluded_primes").get<std::vector<u64>>();
  return r;
}

}  // namespace detail_empirical

// Counts good primes p <= x with gcd(#E1(F_p), #E2(F_p)) = 1. The range is
// split into fixed-span chunks pulled by workers from a shared counter; chunk
// results are merged in index order, so the outcome does not depend on the
// worker count. When checkpoint_path is set, one JSON line is appended per
// chunk; resume=true replays the last line instead of rescanning its range.
inline CoprimeCount pi_coprime(const WeierstrassCurve& e1, const WeierstrassCurve& e2, u64 x,
                               unsigned workers = 1, u64 seed = 1,
                               const std::string& checkpoint_path = {}, bool resume = false) {
  using namespace detail_empirical;
  if (x < 2) throw std::domain_error("pi_coprime: x must be >= 2");
  if (workers == 0) workers = 1;

  CoprimeCount total;
  total.x = x;
  u64 first_chunk = 0;

  if (resume && !checkpoint_path.empty()) {
    std::ifstream in(checkpoint_path);
    std::string line, last;
    while (std::getline(in, line)) {
      if (!line.empty()) last = line;
    }
    if (!last.empty()) {
      auto rec = checkpoint_from_json(nlohmann::json::parse(last));
      if (rec.range_end + 1 <= x && (rec.range_end + 1) % kChunkSpan == 0) {
        total.coprime_count = rec.coprime_count;
        total.good_prime_count = rec.good_prime_count;
        total.excluded_primes = rec.excluded_primes;
        total.checkpoints.push_back(rec);
        first_chunk = (rec.range_end + 1) / kChunkSpan;
      }
    }
  }

  const u64 last_chunk = x / kChunkSpan;
  std::atomic<u64> next{first_chunk};
  std::vector<ChunkResult> results(last_chunk - first_chunk + 1);
  std::mutex mu;

  auto work = [&] {
    for (;;) {
      u64 idx = next.fetch_add(1);
      if (idx > last_chunk) return;
      u64 lo = std::max<u64>(2, idx * kChunkSpan);
      u64 hi = std::min(x, (idx + 1) * kChunkSpan - 1);
      auto res = scan_chunk(e1, e2, idx, lo, hi, seed);
      std::lock_guard<std::mutex> lock(mu);
      results[idx - first_chunk] = std::move(res);
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::ofstream ck;
  if (!checkpoint_path.empty())
    ck.open(checkpoint_path, resume ? std::ios::app : std::ios::trunc);

  for (u64 idx = first_chunk; idx <= last_chunk; ++idx) {
    auto& r = results[idx - first_chunk];
    total.coprime_count += r.coprime;
    total.good_prime_count += r.good;
    for (u64 p : r.excluded) total.excluded_primes.push_back(p);
    CheckpointRecord rec{std::min(x, (idx + 1) * kChunkSpan - 1), total.coprime_count,
                         total.good_prime_count, total.excluded_primes};
    total.checkpoints.push_back(rec);
    if (ck.is_open()) {
      nlohmann::json j;
      detail_empirical::to_json(j, rec);
      ck << j.dump() << "\n";
    }
  }
  return total;
}

// A_d(x): good primes p <= x with d dividing both group orders.
inline u64 a_d_count(const WeierstrassCurve& e1, const WeierstrassCurve& e2, u64 d, u64 x,
                     u64 seed = 1) {
  if (d == 0) throw std::domain_error("a_d_count: d must be positive");
  u64 count = 0;
  PrimeSieve::for_each_in_range(2, x, [&](u64 p) {
    if (!is_good_reduction(e1, p) || !is_good_reduction(e2, p)) return;
    u64 s = detail_empirical::prime_seed(seed, p);
    u64 n1 = count_points(e1, p, s).order;
    u64 n2 = count_points(e2, p, s).order;
    if (n1 % d == 0 && n2 % d == 0) ++count;
  });
  return count;
}

struct InclusionExclusionResult {
  bool equal = false;
  long long residual = 0;  // pi_coprime - mobius sum
  u64 pi_coprime_value = 0;
  long long mobius_sum = 0;
  u64 divisor_bound = 0;
};

// Verifies pi_coprime(x) = sum_{d <= x+1+2*sqrt(x)} mu(d) A_d(x) exactly.
inline InclusionExclusionResult inclusion_exclusion_check(const WeierstrassCurve& e1,
                                                          const WeierstrassCurve& e2, u64 x,
                                                          u64 seed = 1) {
  std::vector<u64> gcds;
  PrimeSieve::for_each_in_range(2, x, [&](u64 p) {
    if (!is_good_reduction(e1, p) || !is_good_reduction(e2, p)) return;
    u64 s = detail_empirical::prime_seed(seed, p);
    gcds.push_back(gcd_u64(count_points(e1, p, s).order, count_points(e2, p, s).order));
  });

  InclusionExclusionResult out;
  out.divisor_bound = x + 1 + 2 * static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(x))));
  for (u64 g : gcds)
    if (g == 1) ++out.pi_coprime_value;
  for (u64 d = 1; d <= out.divisor_bound; ++d) {
    int mu = mobius(d);
    if (mu == 0) continue;
    u64 a_d = 0;
    for (u64 g : gcds)
      if (g % d == 0) ++a_d;
    if (d > 1 && a_d == 0) continue;
    out.mobius_sum += static_cast<long long>(mu) * static_cast<long long>(a_d);
  }
  out.residual = static_cast<long long>(out.pi_coprime_value) - out.mobius_sum;
  out.equal = out.residual == 0;
  return out;
}

struct ObstructionReport {
  u64 modulus = 0;
  u64 checked = 0;
  u64 violations = 0;
  std::vector<u64> violating_primes;  // capped at 32 entries
};

// Default pattern for the persistent mod-11 obstruction: the asserted divisor
// of gcd(#E1, #E2) keyed by p mod 11.
inline std::map<u64, u64> mod11_pattern() {
  std::map<u64, u64> pat;
  for (u64 r : {2ull, 6ull, 7ull, 8ull, 10ull}) pat[r] = 2;
  for (u64 r : {1ull, 3ull, 4ull, 5ull, 9ull}) pat[r] = 3;
  return pat;
}

inline ObstructionReport obstruction_scan(const WeierstrassCurve& e1, const WeierstrassCurve& e2,
                                          u64 x, u64 modulus = 11,
                                          const std::map<u64, u64>& pattern = mod11_pattern(),
                                          u64 seed = 1) {
  ObstructionReport rep;
  rep.modulus = modulus;
  PrimeSieve::for_each_in_range(2, x, [&](u64 p) {
    if (!is_good_reduction(e1, p) || !is_good_reduction(e2, p)) return;
    auto it = pattern.find(p % modulus);
    if (it == pattern.end()) return;
    u64 s = detail_empirical::prime_seed(seed, p);
    u64 g = gcd_u64(count_points(e1, p, s).order, count_points(e2, p, s).order);
    ++rep.checked;
    if (g % it->second != 0) {
      ++rep.violations;
      if (rep.violating_primes.size() < 32) rep.violating_primes.push_back(p);
    }
  });
  return rep;
}

struct DensityReport {
  std::string label1, label2;
  u64 bound = 0;
  CoprimeCount counts;
  double observed_over_pi = 0.0;    // coprime_count / pi(x), the ratio quoted in reports
  double observed_over_good = 0.0;  // coprime_count / good_prime_count
  bool has_prediction = false;
  std::string prediction_error;  // set when the level derivation fails
  Rational ratio;                // R(m1, m2)
  Interval predicted;            // R * generic interval
  bool serre_assumed = true;
};

inline DensityReport compare_report(const WeierstrassCurve& e1, const WeierstrassCurve& e2, u64 x,
                                    unsigned workers = 1, u64 seed = 1,
                                    u64 cutoff = 1'000'000) {
  DensityReport rep;
  rep.label1 = e1.label;
  rep.label2 = e2.label;
  rep.bound = x;
  rep.counts = pi_coprime(e1, e2, x, workers, seed);
  rep.observed_over_pi =
      static_cast<double>(rep.counts.coprime_count) / static_cast<double>(rep.counts.pi_x());
  rep.observed_over_good = static_cast<double>(rep.counts.coprime_count) /
                           static_cast<double>(rep.counts.good_prime_count);
  try {
    auto profile = pair_profile(serre_level(e1), serre_level(e2));
    auto bd = serre_pair_constant(profile, cutoff);
    rep.has_prediction = true;
    rep.ratio = bd.ratio;
    rep.predicted = bd.final_value;
  } catch (const NotSerreCurve& e) {
    rep.prediction_error = e.what();
  } catch (const NotSerrePair& e) {
    rep.prediction_error = e.what();
  }
  return rep;
}

}  // namespace coprime
