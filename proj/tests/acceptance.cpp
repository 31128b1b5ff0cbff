// Runs every acceptance criterion at its stated limits and prints one PASS/FAIL line each.

#include "dyadfrac/cli.hpp"
#include "dyadfrac/cover_io.hpp"
#include "dyadfrac/errors.hpp"
#include "dyadfrac/suite.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace dyadfrac;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Line {
  int id;
  std::string name;
  bool pass;
  double seconds, limit;
  std::string detail;
};

void print(const Line& l) {
  std::printf("%s criterion %d %s (%.3f s, limit %.0f s) %s\n", l.pass ? "PASS" : "FAIL", l.id, l.name.c_str(),
              l.seconds, l.limit, l.detail.c_str());
  std::fflush(stdout);
}

Line timed(const std::function<CriterionResult()>& check) {
  const auto start = Clock::now();
  CriterionResult r = check();
  const double t = seconds_since(start);
  const bool ok = r.verdict == CriterionResult::Verdict::kPass && t < r.limit_seconds;
  std::string detail = r.detail;
  if (r.verdict == CriterionResult::Verdict::kPass && !ok) detail += "; over the time limit";
  return {r.id, r.name, ok, t, r.limit_seconds, detail};
}

struct ReportRun {
  int code = -1;
  std::string err;
};

ReportRun run_report(const fs::path& dir) {
  const std::string out = dir.string();
  const std::vector<const char*> argv{"dyadfrac", "report", "--no-timestamp", "--seed", "7", "--out", out.c_str()};
  std::ostringstream sink, err;
  ReportRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), sink, err);
  r.err = err.str();
  return r;
}

/// Criteria 1 to 10 against one shared construction.
std::vector<Line> run_checks(const RunConfig& cfg) {
  std::vector<Line> lines;
  std::optional<Construction> built;
  const auto build_start = Clock::now();
  std::string build_error;
  try {
    built = build_construction(cfg);
  } catch (const Error& e) {
    build_error = e.what();
  }
  std::printf("setup construction (%.3f s) %s\n", seconds_since(build_start),
              build_error.empty() ? "built" : build_error.c_str());
  const Construction* c = built ? &*built : nullptr;

  const std::vector<std::function<CriterionResult()>> checks{
      [&] { return check_schedules(cfg); },
      [&] { return check_sumset_oracle(cfg); },
      [&] { return check_off_measure(cfg); },
      [&] { return check_lower_density(cfg); },
      [&] { return check_mass_bound(cfg, c); },
      [&] { return check_covering(cfg, c); },
      [&] { return check_midpoints(cfg, c); },
      [&] { return check_dimension_targets(cfg, c); },
      [&] { return check_product_counts(cfg); },
      [&] { return check_non_convexity(cfg, c); },
  };
  for (const auto& check : checks) {
    Line l = timed(check);
    if (l.id == 1 && !build_error.empty()) {
      l.pass = false;
      l.detail = "construction failed: " + build_error;
    }
    print(l);
    lines.push_back(l);
  }
  return lines;
}

}  // namespace

int main() {
  RunConfig cfg;
  cfg.seed = 7;
  cfg.timestamp = false;

  const auto suite_start = Clock::now();
  std::vector<Line> lines = run_checks(cfg);
  const double suite_seconds = seconds_since(suite_start);

  // Two report runs into separate directories, compared byte for byte; concurrent when cores allow.
  {
    const fs::path root = fs::temp_directory_path() / "dyadfrac_acceptance";
    fs::remove_all(root);
    const fs::path a = root / "a", b = root / "b";
    ReportRun ra, rb;
    const auto start = Clock::now();
    if (std::thread::hardware_concurrency() > 1) {
      std::thread ta([&] { ra = run_report(a); });
      rb = run_report(b);
      ta.join();
    } else {
      ra = run_report(a);
      rb = run_report(b);
    }
    const double t = seconds_since(start);
    const double limit = 2 * suite_seconds;
    std::string detail;
    bool ok = false;
    if (!fs::exists(a / "report.txt") || !fs::exists(b / "report.txt")) {
      detail = "report missing (exit codes " + std::to_string(ra.code) + ", " + std::to_string(rb.code) + ")";
    } else {
      const std::string first = read_file(a / "report.txt"), second = read_file(b / "report.txt");
      ok = first == second && t < limit;
      detail = first == second ? "byte-identical reports (" + std::to_string(first.size()) + " bytes)"
                               : "reports differ";
      if (first == second && !ok) detail += "; over the time limit";
    }
    Line l{11, "determinism", ok, t, limit, detail};
    print(l);
    lines.push_back(l);
    fs::remove_all(root);
  }

  int failed = 0;
  for (const auto& l : lines) failed += !l.pass;
  std::printf("summary pass=%zu fail=%d\n", lines.size() - failed, failed);
  return failed == 0 ? 0 : 1;
}
