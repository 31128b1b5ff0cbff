#include "dyadfrac/cli.hpp"

#include "dyadfrac/convexity.hpp"
#include "dyadfrac/cover_io.hpp"
#include "dyadfrac/dimension.hpp"
#include "dyadfrac/errors.hpp"
#include "dyadfrac/measures.hpp"
#include "dyadfrac/suite.hpp"
#include "dyadfrac/sumset.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace dyadfrac {

namespace {

/// Raw option values; empty optionals mean "not given on the command line".
struct Flags {
  std::string config_file;
  std::optional<std::string> alphas, mode, format, out, depths, set;
  std::optional<std::uint64_t> growth_base, count, depth, j_max, i_max, seed, budget_cells, samples, j;
  bool no_timestamp = false;
  bool oracle = false;
  bool emit_measure = false;
};

ScheduleMode parse_mode(const std::string& name, std::uint64_t base) {
  if (name == "toy") return ScheduleMode::toy(base);
  if (name == "faithful") return ScheduleMode::faithful();
  throw UsageError("mode must be 'toy' or 'faithful', got '" + name + "'");
}

RunConfig::Format parse_format(const std::string& name) {
  if (name == "csv") return RunConfig::Format::kCsv;
  if (name == "records") return RunConfig::Format::kRecords;
  throw UsageError("format must be 'csv' or 'records', got '" + name + "'");
}

/// Config file values first, then flags on top.
RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  std::string mode_name = "toy";
  std::uint64_t base = cfg.mode.growth_base;
  if (!f.config_file.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(f.config_file));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file '" + f.config_file + "': " + e.what());
    }
    try {
      if (j.contains("alphas")) {
        const auto& a = j["alphas"];
        if (a.is_string()) {
          cfg.alphas = parse_rational_list(a.get<std::string>());
        } else {
          cfg.alphas.clear();
          for (const auto& v : a) cfg.alphas.push_back(parse_rational(v.get<std::string>()));
        }
      }
      if (j.contains("mode")) mode_name = j["mode"].get<std::string>();
      if (j.contains("growth_base")) base = j["growth_base"].get<std::uint64_t>();
      if (j.contains("count")) cfg.count = j["count"].get<std::uint64_t>();
      if (j.contains("depth")) cfg.depth = j["depth"].get<std::uint64_t>();
      if (j.contains("jmax")) cfg.j_max = j["jmax"].get<std::uint64_t>();
      if (j.contains("imax")) cfg.i_max = j["imax"].get<std::uint64_t>();
      if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("samples")) cfg.samples = j["samples"].get<std::uint64_t>();
      if (j.contains("budget_cells")) cfg.budget.max_cells = j["budget_cells"].get<std::uint64_t>();
      if (j.contains("format")) cfg.format = parse_format(j["format"].get<std::string>());
      if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
      if (j.contains("timestamp")) cfg.timestamp = j["timestamp"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file '" + f.config_file + "': " + e.what());
    }
  }
  if (f.alphas) cfg.alphas = parse_rational_list(*f.alphas);
  if (f.mode) mode_name = *f.mode;
  if (f.growth_base) base = *f.growth_base;
  cfg.mode = parse_mode(mode_name, base);
  if (f.count) cfg.count = *f.count;
  if (f.depth) cfg.depth = *f.depth;
  if (f.j_max) cfg.j_max = *f.j_max;
  if (f.i_max) cfg.i_max = *f.i_max;
  if (f.seed) cfg.seed = *f.seed;
  if (f.samples) cfg.samples = *f.samples;
  if (f.budget_cells) cfg.budget.max_cells = *f.budget_cells;
  if (f.format) cfg.format = parse_format(*f.format);
  if (f.out) cfg.out_dir = *f.out;
  if (f.no_timestamp) cfg.timestamp = false;
  if (cfg.budget.max_cells == 0) throw UsageError("budget must be positive");
  if (cfg.j_max == 0) throw UsageError("jmax must be positive");
  AlphaSequence{cfg.alphas};  // validates
  return cfg;
}

/// `A..B` or a comma list.
std::vector<std::uint64_t> parse_depths(const std::string& text) {
  std::vector<std::uint64_t> out;
  auto num = [&](const std::string& s) {
    const BigInt v = numer(parse_rational(s));
    if (v <= 0 || s.find('/') != std::string::npos) throw UsageError("depths must be positive integers, got '" + s + "'");
    return to_u64(v);
  };
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = num(text.substr(0, dots));
    const auto hi = num(text.substr(dots + 2));
    if (hi < lo) throw UsageError("depth range " + text + " is empty");
    if (hi - lo > 100000) throw UsageError("depth range " + text + " has too many depths");
    for (auto d = lo; d <= hi; ++d) out.push_back(d);
    return out;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(num(part));
  if (out.empty()) throw UsageError("no depths given");
  return out;
}

std::string header(const std::string& command, const RunConfig& cfg) {
  std::ostringstream os;
  os << "# dyadfrac " << command << " v1\n";
  if (cfg.timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "# generated " << buf << '\n';
  }
  std::istringstream conf(cfg.describe());
  for (std::string line; std::getline(conf, line);) os << "# config " << line << '\n';
  return os.str();
}

/// Writes to out_dir/name when an output directory is set, else to `out`.
void emit(const RunConfig& cfg, const std::string& name, const std::string& text, std::ostream& out) {
  if (cfg.out_dir.empty()) {
    out << text;
    return;
  }
  std::filesystem::create_directories(cfg.out_dir);
  write_file_atomic(std::filesystem::path(cfg.out_dir) / name, text);
}

std::vector<IntervalSchedule> schedules_upto(const RunConfig& cfg, std::uint64_t top) {
  const AlphaSequence alphas(cfg.alphas);
  if (top == 0 || top > alphas.size()) {
    throw UsageError("i=" + std::to_string(top) + " needs at least that many alphas, got " +
                     std::to_string(alphas.size()));
  }
  std::vector<IntervalSchedule> out;
  for (std::uint64_t i = 1; i <= top; ++i) out.push_back(build_interval_schedule(i, alphas, cfg.count, cfg.mode));
  return out;
}

/// `rule:FILE` or `a:I` (the A^I union from the configured schedule).
RuleUnion resolve_set(const std::optional<std::string>& set, const RunConfig& cfg, std::uint64_t cutoff) {
  const std::string spec = set.value_or("a:" + std::to_string(cfg.i_max));
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("--set must be rule:FILE or a:I");
  const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (kind == "rule") return parse_rule_union(read_file(arg));
  if (kind == "a") {
    const auto i = to_u64(numer(parse_rational(arg)));
    return a_rule_union(schedules_upto(cfg, i).back(), cutoff);
  }
  throw UsageError("--set must be rule:FILE or a:I, got '" + spec + "'");
}

int cmd_schedule(const RunConfig& cfg, const Flags& f, std::ostream& out) {
  const std::uint64_t top = f.i_max ? cfg.i_max : AlphaSequence(cfg.alphas).size();
  const auto scheds = schedules_upto(cfg, top);
  std::string text = header("schedule", cfg);
  bool ok = true;
  for (const auto& s : scheds) {
    text += format_schedule(s);
    for (const auto& msg : check_schedule(s)) {
      text += "# violation i=" + std::to_string(s.i()) + ": " + msg + "\n";
      ok = false;
    }
  }
  if (cfg.mode.is_toy()) {
    std::vector<EmpiricalBounds> emp;
    for (std::size_t k = 0; k < scheds.size(); ++k) {
      emp.push_back(estimate_empirical(scheds[k], k + 1 < scheds.size() ? &scheds[k + 1] : nullptr));
    }
    const ZetaSchedule z = build_zeta(scheds.size(), scheds, emp);
    text += format_zeta(z);
    const auto bad = check_zeta(z, scheds);
    for (const auto& msg : bad) text += "# violation zeta: " + msg + "\n";
    ok = ok && bad.empty();
  }
  emit(cfg, "schedule.txt", text, out);
  return ok ? 0 : static_cast<int>(ExitCode::kUsage);
}

int cmd_dim(const RunConfig& cfg, const Flags& f, std::ostream& out) {
  const auto depths = parse_depths(f.depths.value_or(cfg.depth ? std::to_string(cfg.depth) : "1..20"));
  const RuleUnion spec = resolve_set(f.set, cfg, depths.back());
  std::string text = header("dim", cfg);
  text += "# set " + f.set.value_or("a:" + std::to_string(cfg.i_max)) + "\n";
  text += format_dimension_csv(f.j ? sumset_dim_profile(spec, *f.j, depths, cfg.budget) : dim_profile(spec, depths, cfg.budget));
  emit(cfg, "dim.csv", text, out);
  return 0;
}

int cmd_sumset(const RunConfig& cfg, const Flags& f, std::ostream& out) {
  const std::uint64_t j = f.j.value_or(2);
  const std::uint64_t depth = cfg.depth ? cfg.depth : 10;
  if (j == 0) throw UsageError("--j must be positive");
  if (depth > kMaxExplicitDepth) throw UsageError("sumset depth must be at most " + std::to_string(kMaxExplicitDepth));
  const RuleUnion spec = resolve_set(f.set, cfg, depth);
  const auto n = static_cast<std::uint32_t>(depth);
  const SumsetCover dp = sumset_cover_dp(spec, j, n, cfg.budget);
  std::string text = header("sumset", cfg);
  text += "# set " + f.set.value_or("a:" + std::to_string(cfg.i_max)) + "\n";
  text += "j " + std::to_string(j) + "\ndepth " + std::to_string(depth) + "\ncount " +
          std::to_string(dp.base_indices.size()) + "\n";
  int code = 0;
  if (f.oracle) {
    const SumsetCover brute = brute_sumset(materialize(spec, n, 1, cfg.budget), j, cfg.budget);
    const bool agree = brute == dp;
    text += "oracle dp=" + std::to_string(dp.base_indices.size()) + " brute=" + std::to_string(brute.base_indices.size()) +
            (agree ? " agree\n" : " disagree\n");
    if (!agree) code = static_cast<int>(ExitCode::kVerificationFailure);
  }
  emit(cfg, "sumset.txt", text + format_sumset(dp), out);
  if (!cfg.out_dir.empty()) out << text;
  return code;
}

int cmd_measure(const RunConfig& cfg, const Flags& f, std::ostream& out) {
  const auto scheds = schedules_upto(cfg, cfg.i_max);
  const IntervalSchedule& sched = scheds.back();
  const std::uint64_t depth = cfg.depth ? cfg.depth : 20;
  if (depth > kMaxExplicitDepth) throw UsageError("measure depth must be at most " + std::to_string(kMaxExplicitDepth));
  const DyadicMeasure mu = mu_i_measure(sched, static_cast<std::uint32_t>(depth), cfg.budget);
  std::string text = header("measure", cfg);
  const auto bad = mu.check_additivity();
  text += "# additivity " + std::string(bad.empty() ? "holds" : "fails: " + bad.front()) + "\n";
  const MassBoundReport rep =
      verify_mass_bound(mu, sched.alphas().at(1), StepFunction::inverse_s(sched), "1/s");
  text += format_mass_report(rep);
  if (const auto from = rep.holds_from()) text += "# holds_from " + std::to_string(*from) + "\n";
  text += std::string("# sup_ratio_nonincreasing ") + (rep.sup_ratio_nonincreasing() ? "yes" : "no") +
          " (finite-depth evidence only)\n";
  emit(cfg, "mass.csv", text, out);
  if (f.emit_measure) emit(cfg, "measure.txt", header("measure", cfg) + format_measure(mu), out);
  return bad.empty() ? 0 : static_cast<int>(ExitCode::kVerificationFailure);
}

int cmd_convexity(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.seed) throw UsageError("convexity samples pairs: --seed is required");
  const Construction built = build_construction(cfg);
  const PointSet a = point_set(built.final_a);
  const MidpointReport mid = midpoint_certify(a, cfg.j_max, cfg.samples, *cfg.seed);
  std::string text = header("convexity", cfg);
  text += "depth " + std::to_string(a.depth) + "\n";
  text += format_midpoint_report(mid);
  constexpr std::uint64_t kHullDepth = 20;
  if (a.depth <= kHullDepth) {
    const auto n = static_cast<std::uint32_t>(a.depth);
    text += format_hull_report(hull_gap(e_set(built.final_a.expand(cfg.budget), cfg.j_max, n, cfg.budget), cfg.j_max));
  } else {
    const FinalBlock& first = built.final_a.blocks.front();
    const auto n = static_cast<std::uint32_t>(std::min<std::uint64_t>(first.length, kHullDepth));
    text += "# hull computed on the first block at depth " + std::to_string(n) + "\n";
    text += format_hull_report(hull_gap(e_set(first.rules, cfg.j_max, n, cfg.budget), cfg.j_max));
  }
  emit(cfg, "convexity.txt", text, out);
  return mid.all_certified() ? 0 : static_cast<int>(ExitCode::kVerificationFailure);
}

int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto results = run_criteria(cfg, [&](const CriterionResult& r) {
    err << "criterion " << r.id << ' ' << to_string(r.verdict) << '\n';
  });
  std::string stamp;
  if (cfg.timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    stamp = std::string("generated ") + buf;
  }
  const bool csv = cfg.format == RunConfig::Format::kCsv;
  emit(cfg, csv ? "report.csv" : "report.txt", format_report(cfg, results, stamp), out);
  for (const auto& r : results) {
    if (r.verdict == CriterionResult::Verdict::kFail) return static_cast<int>(ExitCode::kVerificationFailure);
  }
  return 0;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_file, "JSON config file; flags override its values");
  sub->add_option("--alphas", f.alphas, "comma-separated rationals, e.g. 1/2,2/3");
  sub->add_option("--mode", f.mode, "toy or faithful");
  sub->add_option("--growth-base", f.growth_base, "toy growth base");
  sub->add_option("--count", f.count, "schedule entries per i");
  sub->add_option("--depth", f.depth, "working depth");
  sub->add_option("--jmax", f.j_max, "largest j in sumsets and witnesses");
  sub->add_option("--imax", f.i_max, "number of blocks in the final set");
  sub->add_option("--seed", f.seed, "seed for sampled checks");
  sub->add_option("--samples", f.samples, "sampled pairs");
  sub->add_option("--budget-cells", f.budget_cells, "cell budget (default from DYADFRAC_BUDGET_CELLS)");
  sub->add_option("--format", f.format, "csv or records");
  sub->add_option("--out", f.out, "output directory");
  sub->add_flag("--no-timestamp", f.no_timestamp, "omit the timestamp line");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Digit-restriction fractals, their sumsets and measures at finite depth"};
  app.require_subcommand(1);
  Flags f;
  auto* schedule = app.add_subcommand("schedule", "emit interval schedules and zeta");
  auto* dim = app.add_subcommand("dim", "box-count dimension profile of a set");
  auto* sumset = app.add_subcommand("sumset", "j-fold sumset at one depth");
  auto* measure = app.add_subcommand("measure", "equal-split measure and mass bounds");
  auto* convexity = app.add_subcommand("convexity", "midpoint certification and hull gaps");
  auto* report = app.add_subcommand("report", "run every acceptance check");
  for (auto* sub : {schedule, dim, sumset, measure, convexity, report}) add_common(sub, f);
  for (auto* sub : {dim, sumset}) {
    sub->add_option("--set", f.set, "rule:FILE or a:I");
    sub->add_option("--j", f.j, "number of summands");
  }
  dim->add_option("--depths", f.depths, "A..B or a comma list");
  sumset->add_flag("--oracle", f.oracle, "cross-check against brute force");
  measure->add_flag("--emit-measure", f.emit_measure, "also write every node mass");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kUsage);
  }

  try {
    const RunConfig cfg = resolve(f);
    if (schedule->parsed()) return cmd_schedule(cfg, f, out);
    if (dim->parsed()) return cmd_dim(cfg, f, out);
    if (sumset->parsed()) return cmd_sumset(cfg, f, out);
    if (measure->parsed()) return cmd_measure(cfg, f, out);
    if (convexity->parsed()) return cmd_convexity(cfg, out);
    return cmd_report(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kUsage);
  }
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace dyadfrac
