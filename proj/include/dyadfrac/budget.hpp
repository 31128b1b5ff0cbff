#pragma once

#include <cstdint>
#include <string>

namespace dyadfrac {

inline constexpr const char* kBudgetEnvVar = "DYADFRAC_BUDGET_CELLS";
inline constexpr std::uint64_t kDefaultBudgetCells = std::uint64_t{1} << 26;

/// Upper bound on the number of cells (or DP states) any single materialization may hold.
struct Budget {
  std::uint64_t max_cells = kDefaultBudgetCells;

  /// Reads DYADFRAC_BUDGET_CELLS when set, otherwise the default.
  static Budget from_env();

  /// Throws BudgetError naming the budget when `requested` exceeds it.
  void require(std::uint64_t requested, const std::string& what) const;
};

}  // namespace dyadfrac
