#pragma once

// Integer machinery of the construction: block partitions of each period, the interval
// sequences [gamma_s, eta_s], the per-block lengths zeta_i, and the digit rules built on them.

#include "dyadfrac/bigint.hpp"
#include "dyadfrac/dyadic.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dyadfrac {

/// Non-decreasing rationals in (0,1), indexed from 1.
class AlphaSequence {
 public:
  AlphaSequence() = default;
  explicit AlphaSequence(std::vector<Rational> values);

  std::size_t size() const { return values_.size(); }
  const Rational& at(std::size_t j) const;  // 1-based
  const std::vector<Rational>& values() const { return values_; }

 private:
  std::vector<Rational> values_;
};

/// Consecutive blocks of one period {0, ..., i(i+1)/2 - 1}: sizes 2, 3, ..., i, 1.
struct ZPartition {
  std::uint64_t i = 1;
  std::vector<std::vector<std::uint64_t>> blocks;  // blocks[t-1] = Z^i_t
  bool degenerate = false;                         // i == 1: the single block {0}

  std::uint64_t period() const { return i * (i + 1) / 2; }
  /// Offset of the q-th element (1-based) of block t inside a period.
  std::uint64_t element(std::uint64_t t, std::uint64_t q) const;
  std::uint64_t block_size(std::uint64_t t) const { return blocks.at(t - 1).size(); }
};

ZPartition z_partition(std::uint64_t i);

struct Location {
  std::uint64_t t = 0;
  std::uint64_t q = 0;
  std::uint64_t k = 0;
  friend bool operator==(const Location&, const Location&) = default;
};

/// Unique (t, q, k) with s = period * k + (q-th element of block t).
Location locate(std::uint64_t i, std::uint64_t s);

/// Index s of the (t, q) slot in period k.
std::uint64_t slot_index(const ZPartition& z, std::uint64_t t, std::uint64_t q, std::uint64_t k);

struct ScheduleMode {
  enum class Kind { kFaithful, kToy };
  Kind kind = Kind::kToy;
  std::uint64_t growth_base = 3;
  /// Toy growth factor is growth_base^min(2^s, cap).
  std::uint64_t growth_exponent_cap = 1;

  static ScheduleMode faithful() { return {Kind::kFaithful, 2, 0}; }
  static ScheduleMode toy(std::uint64_t base, std::uint64_t cap = 1) { return {Kind::kToy, base, cap}; }
  bool is_toy() const { return kind == Kind::kToy; }
  /// Lower bound factor F with gamma_{s+1} > F * eta_s.
  BigInt growth_factor(std::uint64_t s) const;
  std::string describe() const;
};

struct ScheduleEntry {
  std::uint64_t s = 0;
  Location where;
  BigInt gamma;
  BigInt eta;
  BigInt d;
};

class IntervalSchedule {
 public:
  IntervalSchedule(std::uint64_t i, AlphaSequence alphas, ScheduleMode mode, std::vector<ScheduleEntry> entries);

  std::uint64_t i() const { return i_; }
  const AlphaSequence& alphas() const { return alphas_; }
  const ScheduleMode& mode() const { return mode_; }
  const ZPartition& partition() const { return partition_; }
  std::uint64_t count() const { return entries_.size(); }
  const std::vector<ScheduleEntry>& entries() const { return entries_; }
  const ScheduleEntry& entry(std::uint64_t s) const { return entries_.at(s - 1); }
  const BigInt& gamma(std::uint64_t s) const { return entry(s).gamma; }
  const BigInt& eta(std::uint64_t s) const { return entry(s).eta; }

  /// Positions up to here are fully determined by the generated entries
  /// (the next interval starts beyond growth_factor(count) * eta_count).
  BigInt known_horizon() const;

 private:
  std::uint64_t i_;
  AlphaSequence alphas_;
  ScheduleMode mode_;
  ZPartition partition_;
  std::vector<ScheduleEntry> entries_;
};

IntervalSchedule build_interval_schedule(std::uint64_t i, const AlphaSequence& alphas, std::uint64_t count,
                                         const ScheduleMode& mode);

/// Re-checks every defining inequality of a schedule from scratch; one message per violation.
std::vector<std::string> check_schedule(const IntervalSchedule& sched);

/// The positive-integer position set ∪_{k>=1} [gamma, eta - 2j] over the (j, q) slots.
struct XiSet {
  IntervalSet positions;
  std::vector<std::string> diagnostics;  // skipped empty intervals
};

XiSet xi_set(std::uint64_t i, std::uint64_t j, std::uint64_t q, const IntervalSchedule& sched,
             std::uint64_t cutoff);

/// ∪_{k>=1} [gamma, eta - trim] over the (t, q) slots, up to cutoff; empty intervals are skipped.
XiSet slot_intervals(const IntervalSchedule& sched, std::uint64_t t, std::uint64_t q, std::uint64_t trim,
                     std::uint64_t cutoff);

/// Forced positions of B^i_l: every (t <= i-1, q != l) slot and the (i, 1) slot, periods k >= 1.
ZeroForcedRule b_rule(std::uint64_t l, const IntervalSchedule& sched, std::uint64_t cutoff,
                      std::vector<std::string>* diagnostics = nullptr);
RuleUnion a_rule_union(const IntervalSchedule& sched, std::uint64_t cutoff,
                       std::vector<std::string>* diagnostics = nullptr);

/// Union over the slots of every block t >= j of the forcing intervals, periods k >= 1, up to cutoff.
IntervalSet forced_from_block(const IntervalSchedule& sched, std::uint64_t j, std::uint64_t cutoff);

/// Estimates for the quantities the zeta construction needs but no formula provides.
struct EmpiricalBounds {
  std::optional<BigInt> p;       // p_i
  std::optional<BigInt> m_next;  // m_{i+1}
  /// q_i(p); returns nullopt where no certificate exists.
  std::function<std::optional<BigInt>(const BigInt&)> q;
  /// Values of p at which q may change, ascending.
  std::vector<BigInt> q_breakpoints;
};

struct ZetaConstraint {
  std::uint64_t i = 0;
  std::string name;
  enum class Status { kSatisfied, kUnverified, kViolated } status = Status::kSatisfied;
  std::string detail;
};

std::string_view to_string(ZetaConstraint::Status s);

struct ZetaSchedule {
  std::vector<BigInt> zeta;    // zeta[i-1] = zeta_i
  std::vector<BigInt> starts;  // starts[i-1] = s_i, one extra trailing entry s_{imax+1}
  std::vector<ZetaConstraint> constraints;

  std::uint64_t i_max() const { return zeta.size(); }
  const BigInt& zeta_at(std::uint64_t i) const { return zeta.at(i - 1); }
  const BigInt& start(std::uint64_t i) const { return starts.at(i - 1); }
};

/// Minimal zeta_i satisfying every constraint that can be evaluated. scheds[i-1] is the schedule for i;
/// empirical[i-1] may be empty.
ZetaSchedule build_zeta(std::uint64_t i_max, const std::vector<IntervalSchedule>& scheds,
                        const std::vector<EmpiricalBounds>& empirical);

/// Independent re-check of the zeta inequalities (growth and gamma_2 bound, plus the recorded constraint statuses).
std::vector<std::string> check_zeta(const ZetaSchedule& z, const std::vector<IntervalSchedule>& scheds);

/// One digit block of the final set: positions start+1 .. start+length follow a member of A^i.
struct FinalBlock {
  std::uint64_t i = 0;
  std::uint64_t start = 0;
  std::uint64_t length = 0;  // visible length (<= zeta_i)
  RuleUnion rules;           // rules over block-local positions 1..length
};

struct FinalASpec {
  std::uint64_t depth = 0;
  std::vector<FinalBlock> blocks;

  bool contains(const DigitString& x) const;
  /// Product of the block unions as one rule union over global positions (one rule per choice of members).
  RuleUnion expand(const Budget& budget = Budget::from_env()) const;
  /// Forced set of the expanded rule picked by `choice` (choice[b] indexes block b's rules).
  ZeroForcedRule combine(const std::vector<std::size_t>& choice) const;
};

FinalASpec final_a_spec(const ZetaSchedule& zeta, const std::vector<IntervalSchedule>& scheds, std::uint64_t depth);

/// Versioned text records: `i s t q k gamma eta d` and `i zeta s_i`.
std::string format_schedule(const IntervalSchedule& sched);
std::string format_zeta(const ZetaSchedule& zeta);

}  // namespace dyadfrac
