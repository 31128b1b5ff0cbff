#pragma once

// j-fold sumsets of digit-restriction sets at finite depth, their rescalings, and product covers.
//
// All sums are of depth-n truncated points: every prefix of a member extends by zeros to a
// member, so each K 2^-n produced here is a true point of A_j, and [K, K+j) 2^-n covers the
// sums of the untruncated tails.

#include "dyadfrac/dyadic.hpp"
#include "dyadfrac/schedule.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dyadfrac {

struct SumsetCover {
  std::uint64_t j = 1;
  std::uint32_t depth = 0;
  std::vector<std::uint64_t> base_indices;  // sorted K with K 2^-n a j-fold sum

  Rational tail_bound() const { return Rational(BigInt(j), pow2(depth)); }
  /// Cells K, ..., K+j-1 for each base index, inside span j.
  CellCover outer_cover() const;
  /// The base indices as an exact cover of the sum points (span j).
  CellCover point_cover() const;

  friend bool operator==(const SumsetCover&, const SumsetCover&) = default;
};

/// Sorted multisets of size j drawn from {0, ..., count-1}.
std::vector<std::vector<std::size_t>> rule_multisets(std::size_t count, std::uint64_t j);

/// Carry DP from the least significant digit: state (carry, low bits), digit sums bounded by the
/// number of addends free at each position.
SumsetCover sumset_cover_dp(const RuleUnion& spec, std::uint64_t j, std::uint32_t depth,
                            const Budget& budget = Budget::from_env());
/// Same result for an arbitrary exact cover (span 1), by repeated Minkowski addition.
SumsetCover sumset_cover_dp(const CellCover& cover, std::uint64_t j, const Budget& budget = Budget::from_env());

/// Enumerates every multiset of j cover points.
SumsetCover brute_sumset(const CellCover& cover, std::uint64_t j, const Budget& budget = Budget::from_env());

/// Number of addends free at each position, run-length encoded.
struct CapacityRun {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  std::uint32_t capacity = 0;
};
std::vector<CapacityRun> capacity_runs(const std::vector<const ZeroForcedRule*>& addends, std::uint64_t depth);

/// Distinct j-fold sums of depth-m truncated points for m = 1..max_depth, in one MSB-first pass.
/// Calls visit(m, count) for each m. Counting is exact (subset construction over the carry NFA).
void sumset_count_sweep(const RuleUnion& spec, std::uint64_t j, std::uint64_t max_depth,
                        const std::function<void(std::uint64_t, const BigInt&)>& visit,
                        const Budget& budget = Budget::from_env());
/// Same sweep restricted to one multiset of addends (the sum B_{l1} + ... + B_{lj}).
void member_count_sweep(const std::vector<const ZeroForcedRule*>& addends, std::uint64_t max_depth,
                        const std::function<void(std::uint64_t, const BigInt&)>& visit);
BigInt sumset_count(const RuleUnion& spec, std::uint64_t j, std::uint64_t depth,
                    const Budget& budget = Budget::from_env());

/// Which fractional digits (1-based positions) can appear in sums of the addends at the given depth.
struct DigitPossibility {
  std::uint64_t depth = 0;
  std::vector<std::uint8_t> mask;  // mask[p-1]: bit 0 set if digit 0 occurs, bit 1 if digit 1 occurs

  bool only_zero(std::uint64_t p) const { return mask.at(p - 1) == 1; }
  bool only_zero_on(const IntervalSet& positions) const;
};
DigitPossibility digit_possibility(const std::vector<const ZeroForcedRule*>& addends, std::uint64_t depth);

/// For each multiset l_1..l_j of B-rules, whether some slot q of block j has only zero digits on
/// [gamma, eta - 2j] (and on the tighter [gamma, eta - (j-1)]) across the sums at the given depth.
struct SharedElementCase {
  std::vector<std::size_t> members;  // 1-based rule indices l
  std::optional<std::uint64_t> slot;        // a q that works with slack 2j
  std::optional<std::uint64_t> tight_slot;  // a q that works with slack j-1
};
struct SharedElementReport {
  std::uint64_t i = 0;
  std::uint64_t j = 0;
  std::uint64_t depth = 0;
  std::vector<SharedElementCase> cases;
  bool all_found() const;
  bool all_tight_found() const;
};
SharedElementReport shared_element_check(const IntervalSchedule& sched, std::uint64_t j, std::uint64_t depth);

/// Union of half-open intervals [p/D, q/D) plus exact member points p/D.
struct RationalCover {
  BigInt denominator = 1;
  std::vector<BigInt> points;                          // sorted numerators of known members
  std::vector<std::pair<BigInt, BigInt>> intervals;    // sorted, disjoint, merged outer cover

  bool empty() const { return intervals.empty(); }
  RationalCover rescaled(const BigInt& new_denominator) const;
  bool contains_point(const Rational& x) const;
  bool covers(const Rational& x) const;
};

RationalCover scale_down(const SumsetCover& s);
RationalCover rational_union(const RationalCover& a, const RationalCover& b);
/// E truncated at j_max: ∪_{j <= j_max} A_j / j over the common denominator lcm(1..j_max) 2^n.
RationalCover e_set(const RuleUnion& spec, std::uint64_t j_max, std::uint32_t depth,
                    const Budget& budget = Budget::from_env());

/// c × [0,1)^d0, kept implicit.
struct ProductCover {
  CellCover base;
  std::uint32_t extra_dims = 1;

  BigInt box_count() const;
  std::uint32_t dimension() const { return extra_dims + 1; }
};

std::string format_sumset(const SumsetCover& s);
std::string format_rational_cover(const RationalCover& r);

}  // namespace dyadfrac
