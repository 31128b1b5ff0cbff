#pragma once

// Dyadic cells, digit strings, zero-forced digit rules and finite-depth covers.
//
// Cells are half-open: the depth-n cell with index k is [k 2^-n, (k+1) 2^-n).
// Digit positions are 1-based: position 1 is the 1/2 digit.

#include "dyadfrac/bigint.hpp"
#include "dyadfrac/budget.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dyadfrac {

/// Position value meaning "no upper end".
inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

/// Deepest depth an explicit cover may use (span * 2^depth must fit in 63 bits).
inline constexpr std::uint32_t kMaxExplicitDepth = 62;

struct DyadicCell {
  std::uint32_t depth = 0;
  std::uint64_t index = 0;

  std::array<DyadicCell, 2> children() const { return {{{depth + 1, 2 * index}, {depth + 1, 2 * index + 1}}}; }
  DyadicCell parent() const { return {depth - 1, index >> 1}; }
  Rational left() const { return Rational(BigInt(index), pow2(depth)); }

  friend bool operator==(const DyadicCell&, const DyadicCell&) = default;
};

/// Finite binary expansion x = sum_i x_i 2^-i, stored as the integer x * 2^length.
class DigitString {
 public:
  DigitString() = default;
  DigitString(std::uint64_t length, BigInt value);

  static DigitString from_bits(std::string_view bits);
  static DigitString zeros(std::uint64_t length) { return DigitString(length, 0); }

  std::uint64_t length() const { return length_; }
  const BigInt& value() const { return value_; }

  /// Digit at 1-based position p (0 beyond the length).
  bool digit(std::uint64_t p) const;
  Rational as_rational() const { return Rational(value_, pow2(length_)); }
  /// Zero-padded or truncated to `n` digits.
  DigitString resized(std::uint64_t n) const;
  DyadicCell cell() const;
  std::string bits() const;

  friend bool operator==(const DigitString&, const DigitString&) = default;

 private:
  std::uint64_t length_ = 0;
  BigInt value_ = 0;
};

struct PositionInterval {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;  // inclusive; kUnbounded allowed

  std::uint64_t count_upto(std::uint64_t n) const;
  friend bool operator==(const PositionInterval&, const PositionInterval&) = default;
};

/// Sorted, disjoint, non-adjacent closed intervals of positive integers.
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Normalizes arbitrary input (sorts, merges overlapping and adjacent runs, drops empty ones).
  explicit IntervalSet(std::vector<PositionInterval> intervals);

  static IntervalSet range(std::uint64_t lo, std::uint64_t hi) {
    return IntervalSet(std::vector<PositionInterval>{PositionInterval{lo, hi}});
  }

  const std::vector<PositionInterval>& intervals() const { return runs_; }
  bool empty() const { return runs_.empty(); }
  bool contains(std::uint64_t p) const;
  /// |S ∩ [1, n]|
  std::uint64_t count_upto(std::uint64_t n) const;
  IntervalSet truncated(std::uint64_t n) const;
  /// [1, n] \ S
  IntervalSet complement_upto(std::uint64_t n) const;
  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet shifted(std::uint64_t offset) const;
  /// Largest finite upper end, or kUnbounded.
  std::uint64_t max_position() const { return runs_.empty() ? 0 : runs_.back().hi; }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<PositionInterval> runs_;
};

/// The set {x in [0,1) : x_p = 0 for every forced position p}, known up to `cutoff_depth`.
class ZeroForcedRule {
 public:
  ZeroForcedRule() = default;
  ZeroForcedRule(IntervalSet forced, std::uint64_t cutoff_depth);

  /// Rule whose free positions inside [1, cutoff] are exactly `free`.
  static ZeroForcedRule from_free(const IntervalSet& free, std::uint64_t cutoff_depth);

  const IntervalSet& forced() const { return forced_; }
  std::uint64_t cutoff_depth() const { return cutoff_; }

  bool is_forced(std::uint64_t p) const { return forced_.contains(p); }
  std::uint64_t free_count_upto(std::uint64_t n) const { return n - forced_.count_upto(n); }
  IntervalSet free_upto(std::uint64_t n) const { return forced_.complement_upto(n); }
  /// Forced-zero test on every digit the string carries.
  bool consistent(const DigitString& s) const;
  /// Intersection of the two sets: forced positions unite.
  ZeroForcedRule intersect(const ZeroForcedRule& other) const;

 private:
  IntervalSet forced_;
  std::uint64_t cutoff_ = kUnbounded;
};

/// Finite union of rule sets; the empty list is the empty set.
struct RuleUnion {
  std::vector<ZeroForcedRule> rules;

  bool empty() const { return rules.empty(); }
  bool contains(const DigitString& s) const;
  std::uint64_t min_cutoff() const;
};

enum class Exactness { kExact, kOuter };

std::string_view to_string(Exactness e);

/// Sorted set of depth-n cell indices inside [0, span).
class CellCover {
 public:
  CellCover() = default;
  /// Requires strictly increasing indices below span * 2^depth.
  CellCover(std::uint32_t depth, std::uint64_t span, std::vector<std::uint64_t> indices,
            Exactness exactness = Exactness::kExact);
  /// Sorts and dedupes first.
  static CellCover from_unsorted(std::uint32_t depth, std::uint64_t span, std::vector<std::uint64_t> indices,
                                 Exactness exactness = Exactness::kExact);

  std::uint32_t depth() const { return depth_; }
  std::uint64_t span() const { return span_; }
  Exactness exactness() const { return exactness_; }
  const std::vector<std::uint64_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool has(std::uint64_t index) const;
  std::uint64_t limit() const { return span_ << depth_; }

  /// Drops the last (depth - new_depth) digits of every index.
  CellCover coarsened(std::uint32_t new_depth) const;

  friend bool operator==(const CellCover&, const CellCover&) = default;

 private:
  std::uint32_t depth_ = 0;
  std::uint64_t span_ = 1;
  std::vector<std::uint64_t> indices_;
  Exactness exactness_ = Exactness::kExact;
};

/// Exact depth-n cover of a rule union.
CellCover materialize(const RuleUnion& spec, std::uint32_t depth, std::uint64_t span = 1,
                      const Budget& budget = Budget::from_env());
CellCover materialize(const ZeroForcedRule& rule, std::uint32_t depth, const Budget& budget = Budget::from_env());

/// Number of depth-n cells met by the union, by inclusion-exclusion (no enumeration).
BigInt count_cells(const RuleUnion& spec, std::uint64_t depth);

/// Cover of {x/2 : x in set} at depth + 1.
CellCover halve_cover(const CellCover& c);
CellCover cover_union(const CellCover& a, const CellCover& b);
bool cover_contains(const CellCover& outer, const CellCover& inner);

/// Level-by-level view of an exact cover: levels[d] holds the sorted depth-d ancestors.
class CoverTrie {
 public:
  explicit CoverTrie(const CellCover& cover);

  std::uint32_t depth() const { return static_cast<std::uint32_t>(levels_.size() - 1); }
  std::uint64_t span() const { return span_; }
  const std::vector<std::uint64_t>& level(std::uint32_t d) const { return levels_[d]; }
  /// Offsets into level(d+1) of the children of level(d)[pos]: [first, last).
  std::pair<std::size_t, std::size_t> children(std::uint32_t d, std::size_t pos) const {
    return {child_begin_[d][pos], child_begin_[d][pos + 1]};
  }

 private:
  std::uint64_t span_ = 1;
  std::vector<std::vector<std::uint64_t>> levels_;
  std::vector<std::vector<std::size_t>> child_begin_;
};

}  // namespace dyadfrac
