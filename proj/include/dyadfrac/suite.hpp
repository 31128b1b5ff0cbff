#pragma once

// Run configuration, the end-to-end construction pipeline and the acceptance checks.

#include "dyadfrac/budget.hpp"
#include "dyadfrac/schedule.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dyadfrac {

struct RunConfig {
  std::vector<Rational> alphas{Rational(1, 2), Rational(2, 3)};
  ScheduleMode mode = ScheduleMode::toy(3);
  std::uint64_t count = 8;
  std::uint64_t i_max = 2;
  std::uint64_t j_max = 3;
  std::uint64_t depth = 0;  // 0: the full constructed depth s_{imax+1}
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 1000;
  Budget budget = Budget::from_env();
  enum class Format { kCsv, kRecords } format = Format::kRecords;
  std::string out_dir;
  bool timestamp = true;

  /// Every field as `key value` lines, in a fixed order.
  std::string describe() const;
};

/// Schedules for i <= i_max (plus i_max + 1 when the alphas reach it), the empirical estimates,
/// the zeta sequence and the final set.
struct Construction {
  std::vector<IntervalSchedule> scheds;
  std::vector<EmpiricalBounds> empirical;
  ZetaSchedule zeta;
  FinalASpec final_a;
};

Construction build_construction(const RunConfig& cfg);

struct CriterionResult {
  int id = 0;
  std::string name;
  enum class Verdict { kPass, kFail, kSkip } verdict = Verdict::kSkip;
  std::string detail;
  double limit_seconds = 0;
};

std::string_view to_string(CriterionResult::Verdict v);

/// Checks 1 to 10; `built` is the configured construction (nullptr when it could not be built).
CriterionResult check_schedules(const RunConfig& cfg);
CriterionResult check_sumset_oracle(const RunConfig& cfg);
CriterionResult check_off_measure(const RunConfig& cfg);
CriterionResult check_lower_density(const RunConfig& cfg);
CriterionResult check_mass_bound(const RunConfig& cfg, const Construction* built);
CriterionResult check_covering(const RunConfig& cfg, const Construction* built);
CriterionResult check_midpoints(const RunConfig& cfg, const Construction* built);
CriterionResult check_dimension_targets(const RunConfig& cfg, const Construction* built);
CriterionResult check_product_counts(const RunConfig& cfg);
CriterionResult check_non_convexity(const RunConfig& cfg, const Construction* built);

/// Runs every check in order, calling `on_result` after each (for progress and timing).
std::vector<CriterionResult> run_criteria(const RunConfig& cfg,
                                          const std::function<void(const CriterionResult&)>& on_result = {});

/// The consolidated report text; identical config and seed give identical bytes.
std::string format_report(const RunConfig& cfg, const std::vector<CriterionResult>& results,
                          const std::string& timestamp_line);

}  // namespace dyadfrac
