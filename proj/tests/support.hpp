#pragma once

// Seeded generators shared by the property tests.

#include "dyadfrac/dyadic.hpp"

#include <random>
#include <set>
#include <vector>

namespace dyadfrac::testing {

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

/// Each position in [1, n] forced with probability 1/2, then a cutoff at n.
inline ZeroForcedRule random_rule(std::mt19937_64& rng, std::uint64_t n) {
  std::vector<PositionInterval> forced;
  for (std::uint64_t p = 1; p <= n; ++p) {
    if (rng() & 1) forced.push_back({p, p});
  }
  return ZeroForcedRule(IntervalSet(std::move(forced)), n);
}

inline RuleUnion random_union(std::mt19937_64& rng, std::uint64_t n, std::size_t max_rules = 3) {
  RuleUnion u;
  const std::size_t rules = 1 + below(rng, max_rules);
  for (std::size_t k = 0; k < rules; ++k) u.rules.push_back(random_rule(rng, n));
  return u;
}

/// Each depth-n cell kept with probability 1/2; never empty.
inline CellCover random_cover(std::mt19937_64& rng, std::uint32_t n) {
  std::vector<std::uint64_t> idx;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    if (rng() & 1) idx.push_back(k);
  }
  if (idx.empty()) idx.push_back(below(rng, std::uint64_t{1} << n));
  return CellCover(n, 1, std::move(idx));
}

/// Digit strings of length n in the rule union, by testing all 2^n strings.
inline std::vector<std::uint64_t> brute_members(const RuleUnion& u, std::uint32_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    if (u.contains(DigitString(n, BigInt(k)))) out.push_back(k);
  }
  return out;
}

/// Distinct sums of j points of `pts` (with repetition), by iterating over tuples.
inline std::set<std::uint64_t> tuple_sums(const std::vector<std::uint64_t>& pts, std::uint64_t j) {
  std::set<std::uint64_t> sums{0};
  for (std::uint64_t r = 0; r < j; ++r) {
    std::set<std::uint64_t> next;
    for (auto s : sums)
      for (auto p : pts) next.insert(s + p);
    sums.swap(next);
  }
  return sums;
}

}  // namespace dyadfrac::testing
