#pragma once

// Dyadic pre-measures with exact dyadic-rational masses and mass-bound verification.

#include "dyadfrac/dyadic.hpp"
#include "dyadfrac/schedule.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dyadfrac {

/// num / 2^log2_den, kept with num odd (or num == 0, log2_den == 0).
struct DyadicMass {
  BigInt num = 0;
  std::uint64_t log2_den = 0;

  static DyadicMass one() { return {1, 0}; }
  static DyadicMass pow2_inverse(std::uint64_t e) { return {1, e}; }
  DyadicMass normalized() const;
  DyadicMass half() const { return DyadicMass{num, log2_den + 1}.normalized(); }
  Rational as_rational() const { return Rational(num, pow2(log2_den)); }
  bool is_zero() const { return num == 0; }

  friend DyadicMass operator+(const DyadicMass& a, const DyadicMass& b);
  friend DyadicMass operator*(const DyadicMass& a, const DyadicMass& b);
  friend bool operator==(const DyadicMass& a, const DyadicMass& b);
  friend bool operator<(const DyadicMass& a, const DyadicMass& b);
};

/// Masses on the nodes of an exact cover's trie, from the root down to the cover depth.
class DyadicMeasure {
 public:
  DyadicMeasure(CoverTrie trie, std::vector<std::vector<DyadicMass>> masses);

  std::uint32_t depth() const { return trie_.depth(); }
  const CoverTrie& trie() const { return trie_; }
  /// Mass of the depth-d cell with the given index (zero off the support).
  DyadicMass mass(std::uint32_t d, std::uint64_t index) const;
  const std::vector<DyadicMass>& level_masses(std::uint32_t d) const { return masses_[d]; }

  /// Every violated additivity or normalization condition, one message each.
  std::vector<std::string> check_additivity() const;

 private:
  CoverTrie trie_;
  std::vector<std::vector<DyadicMass>> masses_;
};

/// Halves mass at two-child nodes and passes it down at one-child nodes.
DyadicMeasure equal_split_measure(const CellCover& cover);
/// The equal-split measure on B^i_1, materialized to the given depth.
DyadicMeasure mu_i_measure(const IntervalSchedule& sched, std::uint32_t depth, const Budget& budget = Budget::from_env());
/// Cell mass = product of component masses on the block-restricted substrings; the last block
/// may be partial (its component is read at the prefix depth).
DyadicMeasure block_product_measure(const std::vector<DyadicMeasure>& components,
                                    const std::vector<std::uint32_t>& block_lengths, std::uint32_t depth,
                                    const Budget& budget = Budget::from_env());

/// The equal-split measure on a single rule set without materializing it: every depth-n cell of
/// the set carries 2^-(free positions <= n), and the zero cell is always in the set.
struct RuleMeasure {
  ZeroForcedRule rule;

  DyadicMass cell_mass(std::uint64_t n) const { return DyadicMass::pow2_inverse(rule.free_count_upto(n)); }
};

/// Piecewise-constant c(n) keyed by depth thresholds; depths before the first threshold have no bound.
class StepFunction {
 public:
  StepFunction() = default;
  explicit StepFunction(std::vector<std::pair<std::uint64_t, Rational>> steps);

  static StepFunction constant(const Rational& c) { return StepFunction({{0, c}}); }
  /// c(n) = 1/s for gamma_s <= n < gamma_{s+1}.
  static StepFunction inverse_s(const IntervalSchedule& sched);

  std::optional<Rational> at(std::uint64_t n) const;
  const std::vector<std::pair<std::uint64_t, Rational>>& steps() const { return steps_; }

 private:
  std::vector<std::pair<std::uint64_t, Rational>> steps_;
};

/// mass <= c 2^(-n delta), exactly.
bool mass_within(const DyadicMass& mass, std::uint64_t n, const Rational& delta, const Rational& c);

struct MassBoundRow {
  std::uint64_t depth = 0;
  DyadicMass sup;  // largest depth-n cell mass
  std::uint64_t witness = 0;
  std::optional<Rational> bound;  // c(depth), if the step function covers this depth
  bool pass = true;
};

struct MassBoundReport {
  Rational delta;
  std::string shape;
  std::vector<MassBoundRow> rows;

  bool all_pass() const;
  /// First depth from which every later row passes, if any.
  std::optional<std::uint64_t> holds_from() const;
  /// Whether sup mass * 2^(n delta) is non-increasing across the rows (evidence only).
  bool sup_ratio_nonincreasing() const;
};

MassBoundReport verify_mass_bound(const DyadicMeasure& m, const Rational& delta, const StepFunction& c,
                                  const std::string& shape);
/// Same sweep for the implicit rule measure over depths [from, to].
MassBoundReport verify_mass_bound(const RuleMeasure& m, const Rational& delta, const StepFunction& c,
                                  const std::string& shape, std::uint64_t from, std::uint64_t to);

/// Product with Lebesgue measure on [0,1)^d0 tested on dyadic cubes I × Q (I a base cell, Q a
/// depth-n cube): mass(I) 2^(-n d0) <= c(n) 2^(-n (s0 + d0)).
struct RectangleCheck {
  std::uint64_t sampled = 0;
  std::uint64_t passed = 0;
  std::optional<std::uint64_t> failing_depth;
  bool all_pass() const { return sampled == passed; }
};
RectangleCheck rectangle_product_bound(const DyadicMeasure& base, std::uint32_t d0, const Rational& s0,
                                       const StepFunction& c, std::uint64_t samples, std::uint64_t seed);

std::string format_measure(const DyadicMeasure& m);
std::string format_mass_report(const MassBoundReport& r);

}  // namespace dyadfrac
