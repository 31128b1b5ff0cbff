#pragma once

// Dimension estimators: lower density, box counts, OFF_n, measure lower bounds and covering sums.

#include "dyadfrac/dyadic.hpp"
#include "dyadfrac/measures.hpp"
#include "dyadfrac/schedule.hpp"
#include "dyadfrac/sumset.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dyadfrac {

/// Prefix counts |S ∩ [1,n]| for n = 1..size.
struct DensityProfile {
  std::vector<std::uint64_t> counts;

  std::uint64_t size() const { return counts.size(); }
  Rational density(std::uint64_t n) const { return Rational(counts.at(n - 1), n); }
  /// min over m <= n of the prefix density.
  Rational running_min(std::uint64_t n) const;
};

DensityProfile lower_density(const IntervalSet& s, std::uint64_t n);
DensityProfile lower_density(const std::function<bool(std::uint64_t)>& member, std::uint64_t n);

/// gamma / (eta - 2j) over the (j, q) slots in generation order; these tend to alpha_j.
struct DensityTarget {
  Rational target;
  std::vector<std::pair<std::uint64_t, Rational>> ratios;  // (s, gamma_s / (eta_s - 2j))
};
DensityTarget density_target(const IntervalSchedule& sched, std::uint64_t j, std::uint64_t q);

/// floor and ceil of log2 N for N >= 1.
struct Log2Bracket {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  bool exact() const { return lo == hi; }
};
Log2Bracket log2_bracket(const BigInt& n);

BigInt box_count(const CellCover& c);
BigInt box_count(const SumsetCover& s);

struct DimensionRow {
  std::uint64_t depth = 0;
  std::optional<BigInt> count;    // nullopt: skipped over budget
  Rational estimate;              // floor(log2 N) / n, exact when N is a power of two
  std::optional<Rational> off;    // OFF_n when the trie (or a single rule) gives it
  std::string method;
};

struct DimensionReport {
  std::vector<DimensionRow> rows;
};

/// Box counts of a rule union at each depth; OFF_n from the rule itself (single rule) or from the
/// materialized trie when it fits the budget.
DimensionReport dim_profile(const RuleUnion& spec, const std::vector<std::uint64_t>& depths,
                            const Budget& budget = Budget::from_env());
/// Counts of distinct depth-n j-fold sums.
DimensionReport sumset_dim_profile(const RuleUnion& spec, std::uint64_t j, const std::vector<std::uint64_t>& depths,
                                   const Budget& budget = Budget::from_env());

/// Minimum over depth-n nodes of the number of two-child ancestors, divided by n.
Rational off_n(const CoverTrie& trie, std::uint32_t n);
inline Rational off_n(const CoverTrie& trie) { return off_n(trie, trie.depth()); }

/// min over positive-mass depth-n cells of -log2(mu(I)) / n. Exact when the largest mass is a power of
/// one half; otherwise a lower bound.
struct BillingsleyBound {
  Rational value;
  bool exact = true;
};
BillingsleyBound billingsley_lower(const DyadicMeasure& m, std::uint32_t n);

/// `count` intervals of length 2^-depth.
struct CoverTerm {
  BigInt count;
  std::uint64_t depth = 0;
};

/// sum count * 2^(-depth * beta), bracketed by [value_lo, value_hi].
struct CoveringCertificate {
  Rational beta;
  Rational value_lo;
  Rational value_hi;
  bool decided = false;
  bool below_one = false;
};
CoveringCertificate covering_sum_certificate(const std::vector<CoverTerm>& terms, const Rational& beta);
CoveringCertificate covering_sum_certificate(const CellCover& cover, const Rational& beta);

/// One term per slot q of block j covering the Q^i_j(p) piece for q: among the slots s whose interval starts
/// by p - 2j, the depth min(eta_s, p) - 2j with the smallest covering sum. nullopt when some slot has none.
std::optional<std::vector<CoverTerm>> q_cover(const IntervalSchedule& sched, std::uint64_t j, const BigInt& p);

/// Estimates of p_i, q_i(p) and m_{i+1} from the generated schedules (toy mode only).
EmpiricalBounds estimate_empirical(const IntervalSchedule& sched, const IntervalSchedule* next);

/// eta_s for the last slot of block j in each period k >= 1.
std::vector<std::uint64_t> aligned_depths(const IntervalSchedule& sched, std::uint64_t j);

/// Box-count evidence for the j-fold sumset of A^i at given depths.
/// member_lo/hi: max over members B_l1 + ... + B_lj of the running min over m <= depth of
/// floor/ceil(log2 N_m) / m. union_lo/hi: floor/ceil(log2 N) / depth for the whole sumset.
struct SumsetDimensionRow {
  std::uint64_t depth = 0;
  Rational member_lo;
  Rational member_hi;
  Rational union_lo;
  Rational union_hi;
};
std::vector<SumsetDimensionRow> sumset_dimension(const IntervalSchedule& sched, std::uint64_t j,
                                                 const std::vector<std::uint64_t>& depths,
                                                 const Budget& budget = Budget::from_env());

/// `depth,count,estimate_num,estimate_den,off_num,off_den,method`
std::string format_dimension_csv(const DimensionReport& r);
std::string format_sumset_dimension_csv(std::uint64_t j, const std::vector<SumsetDimensionRow>& rows);

}  // namespace dyadfrac
