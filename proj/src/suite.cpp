#include "dyadfrac/suite.hpp"

#include "dyadfrac/convexity.hpp"
#include "dyadfrac/dimension.hpp"
#include "dyadfrac/errors.hpp"
#include "dyadfrac/measures.hpp"
#include "dyadfrac/sumset.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace dyadfrac {

namespace {

constexpr std::uint64_t kDefaultSeed = 7;

std::uint64_t seed_of(const RunConfig& cfg) { return cfg.seed.value_or(kDefaultSeed); }

using Verdict = CriterionResult::Verdict;

CriterionResult make(int id, std::string name, double limit) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.limit_seconds = limit;
  return r;
}

CriterionResult& finish(CriterionResult& r, bool pass, std::string detail) {
  r.verdict = pass ? Verdict::kPass : Verdict::kFail;
  r.detail = std::move(detail);
  return r;
}

CriterionResult& skip(CriterionResult& r, std::string why) {
  r.verdict = Verdict::kSkip;
  r.detail = std::move(why);
  return r;
}

// The i = 2 toy schedule of the configured construction, if there is one.
const IntervalSchedule* toy_i2(const Construction* built) {
  if (!built || built->scheds.size() < 2 || !built->scheds[1].mode().is_toy()) return nullptr;
  return &built->scheds[1];
}

std::string frac(const Rational& q) { return to_string(q); }

// Random zero-forced rule on [1, n]: each position forced with probability 1/2.
ZeroForcedRule random_rule(std::mt19937_64& rng, std::uint64_t n) {
  std::vector<PositionInterval> forced;
  for (std::uint64_t p = 1; p <= n; ++p) {
    if (rng() & 1) forced.push_back({p, p});
  }
  return ZeroForcedRule(IntervalSet(std::move(forced)), n);
}

}  // namespace

std::string RunConfig::describe() const {
  std::ostringstream os;
  os << "alphas ";
  for (std::size_t k = 0; k < alphas.size(); ++k) os << (k ? "," : "") << to_string(alphas[k]);
  os << "\nmode " << mode.describe() << "\ncount " << count << "\nimax " << i_max << "\njmax " << j_max
     << "\ndepth " << (depth ? std::to_string(depth) : std::string("auto")) << "\nseed "
     << (seed ? std::to_string(*seed) : std::string("default(") + std::to_string(kDefaultSeed) + ")")
     << "\nsamples " << samples << "\nbudget_cells " << budget.max_cells << "\nformat "
     << (format == Format::kCsv ? "csv" : "records") << '\n';
  return os.str();
}

Construction build_construction(const RunConfig& cfg) {
  const AlphaSequence alphas(cfg.alphas);
  if (cfg.i_max == 0) throw UsageError("imax must be at least 1");
  if (cfg.i_max > alphas.size()) {
    throw UsageError("imax " + std::to_string(cfg.i_max) + " needs at least that many alphas, got " +
                     std::to_string(alphas.size()));
  }
  Construction c;
  const std::uint64_t top = std::min<std::uint64_t>(cfg.i_max + 1, alphas.size());
  for (std::uint64_t i = 1; i <= top; ++i) c.scheds.push_back(build_interval_schedule(i, alphas, cfg.count, cfg.mode));
  for (std::uint64_t i = 1; i <= cfg.i_max; ++i) {
    c.empirical.push_back(estimate_empirical(c.scheds[i - 1], i < c.scheds.size() ? &c.scheds[i] : nullptr));
  }
  c.zeta = build_zeta(cfg.i_max, c.scheds, c.empirical);
  const auto bad = check_zeta(c.zeta, c.scheds);
  if (!bad.empty()) throw ConstraintError("zeta sequence violates: " + bad.front());
  const std::uint64_t depth = cfg.depth ? cfg.depth : to_u64(c.zeta.start(cfg.i_max + 1));
  c.final_a = final_a_spec(c.zeta, c.scheds, depth);
  return c;
}

std::string_view to_string(CriterionResult::Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kSkip: return "SKIP";
  }
  return "?";
}

CriterionResult check_schedules(const RunConfig& cfg) {
  auto r = make(1, "schedule exactness", 1);
  const std::vector<Rational> four{Rational(1, 2), Rational(2, 3), Rational(3, 4), Rational(4, 5)};
  std::vector<std::vector<Rational>> alpha_sets{four};
  if (cfg.alphas != four) alpha_sets.push_back(cfg.alphas);
  const ScheduleMode toy = cfg.mode.is_toy() ? cfg.mode : ScheduleMode::toy(3);
  std::uint64_t schedules = 0, zetas = 0;
  std::vector<std::string> bad;
  for (const auto& mode : {toy, ScheduleMode::faithful()}) {
    for (const auto& values : alpha_sets) {
      const AlphaSequence alphas(values);
      const std::uint64_t top = std::min<std::uint64_t>(4, alphas.size());
      std::vector<IntervalSchedule> scheds;
      try {
        for (std::uint64_t i = 1; i <= top; ++i) scheds.push_back(build_interval_schedule(i, alphas, 8, mode));
      } catch (const ConstraintError& e) {
        return finish(r, false, mode.describe() + ": " + e.what());
      }
      for (const auto& s : scheds) {
        ++schedules;
        for (const auto& msg : check_schedule(s)) bad.push_back(mode.describe() + " i=" + std::to_string(s.i()) + ": " + msg);
      }
      for (std::uint64_t i_max = 1; i_max <= top; ++i_max) {
        std::vector<EmpiricalBounds> emp;
        for (std::uint64_t i = 1; i <= i_max; ++i) {
          emp.push_back(estimate_empirical(scheds[i - 1], i < scheds.size() ? &scheds[i] : nullptr));
        }
        const ZetaSchedule z = build_zeta(i_max, scheds, emp);
        ++zetas;
        for (const auto& msg : check_zeta(z, scheds)) bad.push_back(mode.describe() + " zeta: " + msg);
      }
    }
  }
  std::string detail = std::to_string(schedules) + " schedules and " + std::to_string(zetas) +
                       " zeta sequences checked, " + std::to_string(bad.size()) + " violations";
  if (!bad.empty()) detail += "; first: " + bad.front();
  return finish(r, bad.empty(), detail);
}

CriterionResult check_sumset_oracle(const RunConfig& cfg) {
  auto r = make(2, "sumset oracle equivalence", 30);
  std::mt19937_64 rng(seed_of(cfg));
  const Budget budget{std::uint64_t{2000000}};
  std::uint64_t compared = 0, drawn = 0;
  std::string first_bad;
  while (compared < 250 && drawn < 5000) {
    ++drawn;
    const std::uint32_t n = 1 + rng() % 12;
    const std::uint64_t j = 1 + rng() % 4;
    RuleUnion spec;
    const std::size_t rules = 1 + rng() % 3;
    for (std::size_t k = 0; k < rules; ++k) spec.rules.push_back(random_rule(rng, n));
    const CellCover cover = materialize(spec, n, 1, cfg.budget);
    SumsetCover brute;
    try {
      brute = brute_sumset(cover, j, budget);
    } catch (const BudgetError&) {
      continue;
    }
    ++compared;
    const SumsetCover dp = sumset_cover_dp(spec, j, n, cfg.budget);
    const SumsetCover iterated = sumset_cover_dp(cover, j, cfg.budget);
    const BigInt counted = sumset_count(spec, j, n, cfg.budget);
    if (first_bad.empty() && (dp.base_indices != brute.base_indices || iterated.base_indices != brute.base_indices ||
                              counted != BigInt(brute.base_indices.size()))) {
      first_bad = "mismatch at n=" + std::to_string(n) + " j=" + std::to_string(j);
    }
  }
  const bool pass = first_bad.empty() && compared >= 200;
  return finish(r, pass,
                std::to_string(compared) + " instances compared (carry DP, iterated Minkowski sum, counting DP vs brute force)" +
                    (first_bad.empty() ? "" : "; " + first_bad));
}

CriterionResult check_off_measure(const RunConfig& cfg) {
  auto r = make(3, "OFF/measure identity", 30);
  std::mt19937_64 rng(seed_of(cfg) + 1);
  std::uint64_t tries = 0, leaves = 0;
  std::string first_bad;
  for (; tries < 120; ++tries) {
    const std::uint32_t n = 1 + rng() % 20;
    std::vector<std::uint64_t> level{0};
    for (std::uint32_t d = 0; d < n; ++d) {
      std::vector<std::uint64_t> next;
      for (auto k : level) {
        const auto pick = rng() % 4;
        const bool crowded = level.size() + next.size() > 3000;
        if (pick == 0 || crowded) next.push_back(2 * k + (rng() & 1));
        else if (pick == 1) next.push_back(2 * k + 1);
        else {
          next.push_back(2 * k);
          next.push_back(2 * k + 1);
        }
      }
      std::sort(next.begin(), next.end());
      level.swap(next);
    }
    const CellCover cover(n, 1, level);
    const DyadicMeasure mu = equal_split_measure(cover);
    if (!mu.check_additivity().empty() && first_bad.empty()) first_bad = "additivity failed";
    // Branch counts from prefix sets, without the trie.
    std::vector<std::set<std::uint64_t>> prefixes(n + 1);
    for (auto k : level) {
      for (std::uint32_t d = 0; d <= n; ++d) prefixes[d].insert(k >> (n - d));
    }
    std::uint64_t min_branch = n + 1;
    for (std::size_t pos = 0; pos < level.size(); ++pos) {
      std::uint64_t branches = 0;
      for (std::uint32_t d = 0; d < n; ++d) {
        const std::uint64_t pre = level[pos] >> (n - d);
        if (prefixes[d + 1].count(2 * pre) && prefixes[d + 1].count(2 * pre + 1)) ++branches;
      }
      min_branch = std::min(min_branch, branches);
      const DyadicMass m = mu.level_masses(n)[pos].normalized();
      if ((m.num != 1 || m.log2_den != branches) && first_bad.empty()) {
        first_bad = "leaf " + std::to_string(level[pos]) + " at depth " + std::to_string(n) + ": mass exponent " +
                    std::to_string(m.log2_den) + " vs " + std::to_string(branches) + " branches";
      }
      ++leaves;
    }
    const Rational off = off_n(CoverTrie(cover));
    const BillingsleyBound bl = billingsley_lower(mu, n);
    if ((!bl.exact || bl.value != off || off != Rational(min_branch, n)) && first_bad.empty()) {
      first_bad = "Billingsley " + frac(bl.value) + " vs OFF " + frac(off) + " at depth " + std::to_string(n);
    }
  }
  return finish(r, first_bad.empty(),
                std::to_string(tries) + " tries, " + std::to_string(leaves) + " leaves" +
                    (first_bad.empty() ? "" : "; " + first_bad));
}

CriterionResult check_lower_density(const RunConfig&) {
  auto r = make(4, "lower-density convergence", 1);
  constexpr std::uint64_t kTop = 1000;
  const auto free = [](std::uint64_t p) { return p % 3 != 0; };
  const DensityProfile prof = lower_density(free, kTop);
  std::string bad;
  for (std::uint64_t n = 300; n <= kTop && bad.empty(); ++n) {
    const Rational gap = prof.density(n) - Rational(2, 3);
    if (gap > Rational(1, 50) || gap < Rational(-1, 50)) bad = "density off at n=" + std::to_string(n);
  }
  std::vector<PositionInterval> forced;
  for (std::uint64_t p = 3; p <= kTop; p += 3) forced.push_back({p, p});
  const ZeroForcedRule rule(IntervalSet(std::move(forced)), kTop);
  const RuleUnion spec{{rule}};
  std::vector<const ZeroForcedRule*> one{&rule};
  member_count_sweep(one, kTop, [&](std::uint64_t n, const BigInt& count) {
    if (!bad.empty()) return;
    const BigInt expect = pow2(prof.counts[n - 1]);
    if (count != expect) bad = "counting DP disagrees at n=" + std::to_string(n);
    else if (n >= 300 && count_cells(spec, n) != expect) bad = "box count disagrees at n=" + std::to_string(n);
    else if (n <= 20 && BigInt(materialize(rule, static_cast<std::uint32_t>(n)).size()) != expect) {
      bad = "materialized count disagrees at n=" + std::to_string(n);
    }
  });
  return finish(r, bad.empty(),
                "prefix density at n=1000 is " + frac(prof.density(kTop)) + ", running min " +
                    frac(prof.running_min(kTop)) + (bad.empty() ? "" : "; " + bad));
}

CriterionResult check_mass_bound(const RunConfig& cfg, const Construction* built) {
  auto r = make(5, "mass bound mu(I) <= |I|^alpha_1 / s", 60);
  const IntervalSchedule* sched = toy_i2(built);
  if (!sched) return skip(r, "needs a toy schedule for i = 2");
  if (sched->count() < 3) return skip(r, "needs count >= 3");
  const std::uint64_t top = to_u64(sched->eta(sched->count()));
  const RuleMeasure mu{b_rule(1, *sched, top)};
  std::vector<std::pair<std::uint64_t, Rational>> steps;
  for (std::uint64_t s = 1; s <= 3; ++s) steps.emplace_back(to_u64(sched->gamma(s)), Rational(1, s));
  const Rational delta = sched->alphas().at(1);
  const MassBoundReport rep = verify_mass_bound(mu, delta, StepFunction(steps), "1/s", steps.front().first, top);

  // The implicit masses must match the equal-split measure on the materialized set.
  const std::uint32_t small = static_cast<std::uint32_t>(std::min<std::uint64_t>(20, top));
  const DyadicMeasure explicit_mu = equal_split_measure(materialize(mu.rule, small, cfg.budget));
  std::string bad = explicit_mu.check_additivity().empty() ? "" : "explicit measure not additive";
  for (std::uint32_t n = 1; n <= small && bad.empty(); ++n) {
    for (const auto& m : explicit_mu.level_masses(n)) {
      if (!(m == mu.cell_mass(n))) {
        bad = "explicit mass differs at depth " + std::to_string(n);
        break;
      }
    }
  }
  std::string detail = std::to_string(rep.rows.size()) + " depths in [" + std::to_string(steps.front().first) + ", " +
                       std::to_string(top) + "], delta " + frac(delta);
  if (!rep.all_pass()) {
    for (const auto& row : rep.rows) {
      if (!row.pass) {
        detail += "; first failure at depth " + std::to_string(row.depth);
        break;
      }
    }
  }
  if (!bad.empty()) detail += "; " + bad;
  return finish(r, rep.all_pass() && bad.empty(), detail);
}

CriterionResult check_covering(const RunConfig&, const Construction* built) {
  auto r = make(6, "covering certificate", 10);
  const IntervalSchedule* sched = toy_i2(built);
  if (!sched) return skip(r, "needs a toy schedule for i = 2");
  const auto aligned = aligned_depths(*sched, sched->i());
  if (aligned.empty()) return skip(r, "no eta boundary of the last block within the schedule");
  const BigInt p(aligned.front());
  bool pass = true;
  std::string detail = "p = " + p.str();
  for (std::uint64_t j = 1; j <= sched->i(); ++j) {
    const Rational beta = sched->alphas().at(j) + Rational(1, 2 * sched->i());
    const auto terms = q_cover(*sched, j, p);
    if (!terms) {
      pass = false;
      detail += "; j=" + std::to_string(j) + ": no cover";
      continue;
    }
    const auto cert = covering_sum_certificate(*terms, beta);
    pass = pass && cert.decided && cert.below_one;
    detail += "; j=" + std::to_string(j) + " beta " + frac(beta) + ": ";
    if (cert.below_one) {
      const std::uint64_t margin = bit_length(denom(cert.value_hi)) - bit_length(numer(cert.value_hi));
      detail += "sum < 2^-" + std::to_string(margin);
    } else {
      detail += cert.decided ? "sum >= 1" : "undecided";
    }
  }
  return finish(r, pass, detail);
}

CriterionResult check_midpoints(const RunConfig& cfg, const Construction* built) {
  auto r = make(7, "midpoint certification", 60);
  if (!built) return skip(r, "construction unavailable");
  const PointSet a = point_set(built->final_a);
  const MidpointReport rep = midpoint_certify(a, std::min<std::uint64_t>(cfg.j_max, 3), cfg.samples, seed_of(cfg));
  std::string detail = std::to_string(rep.certified) + "/" + std::to_string(rep.pairs) + " pairs certified at depth " +
                       std::to_string(a.depth);
  if (rep.violation) detail += "; " + rep.detail;
  if (rep.pairs < 1000) detail += "; fewer than 1000 pairs requested";
  return finish(r, rep.all_certified() && rep.pairs >= 1000, detail);
}

CriterionResult check_dimension_targets(const RunConfig& cfg, const Construction* built) {
  auto r = make(8, "dimension targeting evidence", 120);
  const IntervalSchedule* sched = toy_i2(built);
  if (!sched) return skip(r, "needs a toy schedule for i = 2");
  std::map<std::uint64_t, std::vector<std::uint64_t>> own;
  std::set<std::uint64_t> all;
  for (std::uint64_t j = 1; j <= 2; ++j) {
    auto d = aligned_depths(*sched, j);
    if (d.size() > 2) d.resize(2);
    if (d.empty()) return skip(r, "no aligned depth for j=" + std::to_string(j));
    own[j] = d;
    all.insert(d.begin(), d.end());
  }
  const std::vector<std::uint64_t> depths(all.begin(), all.end());
  std::map<std::uint64_t, std::vector<SumsetDimensionRow>> rows;
  for (std::uint64_t j = 1; j <= 2; ++j) rows[j] = sumset_dimension(*sched, j, depths, cfg.budget);
  const Rational tol(3, 20);
  bool pass = true;
  std::ostringstream detail;
  for (std::uint64_t j = 1; j <= 2; ++j) {
    const Rational target = sched->alphas().at(j);
    for (std::size_t k = 0; k < depths.size(); ++k) {
      if (std::find(own[j].begin(), own[j].end(), depths[k]) == own[j].end()) continue;
      const auto& row = rows[j][k];
      const bool ok = row.member_lo >= target - tol && row.member_hi <= target + tol;
      pass = pass && ok;
      detail << "j=" << j << " n=" << depths[k] << " [" << frac(row.member_lo) << ", " << frac(row.member_hi) << "]"
             << (ok ? "" : " outside") << "; ";
    }
  }
  for (std::size_t k = 0; k < depths.size(); ++k) {
    if (!(rows[2][k].member_lo > rows[1][k].member_hi)) {
      pass = false;
      detail << "j=2 not above j=1 at n=" << depths[k] << "; ";
    }
  }
  detail << "j=2 above j=1 checked at " << depths.size() << " depths";
  return finish(r, pass, detail.str());
}

CriterionResult check_product_counts(const RunConfig& cfg) {
  auto r = make(9, "product additivity", 1);
  std::mt19937_64 rng(seed_of(cfg) + 2);
  std::string bad;
  std::uint64_t cases = 0;
  for (std::uint32_t d0 = 1; d0 <= 2; ++d0) {
    for (std::uint32_t n = 1; n <= 20; ++n) {
      const CellCover base = materialize(random_rule(rng, n), n, cfg.budget);
      const ProductCover prod{base, d0};
      BigInt oracle = 0;
      const std::uint64_t side = std::uint64_t{1} << n;
      if (base.size() * (d0 == 1 ? side : side * side) <= (std::uint64_t{1} << 18)) {
        for (std::size_t c = 0; c < base.size(); ++c) {
          for (std::uint64_t y = 0; y < side; ++y) {
            if (d0 == 1) oracle += 1;
            else
              for (std::uint64_t z = 0; z < side; ++z) oracle += 1;
          }
        }
      } else {
        oracle = base.size();
        for (std::uint32_t a = 0; a < d0; ++a) oracle *= side;
      }
      ++cases;
      if (prod.box_count() != oracle || prod.dimension() != d0 + 1) {
        bad = "d0=" + std::to_string(d0) + " n=" + std::to_string(n);
        break;
      }
    }
  }
  return finish(r, bad.empty(), std::to_string(cases) + " products counted" + (bad.empty() ? "" : "; mismatch at " + bad));
}

CriterionResult check_non_convexity(const RunConfig& cfg, const Construction* built) {
  auto r = make(10, "non-convexity evidence", 60);
  if (!built || built->final_a.blocks.empty()) return skip(r, "construction unavailable");
  const FinalBlock& block = built->final_a.blocks.front();
  if (block.length > kMaxExplicitDepth - 6) return skip(r, "first block too long for explicit sumsets");
  const auto depth = static_cast<std::uint32_t>(block.length);
  const std::uint64_t j_max = 3;
  const HullGapReport hull = hull_gap(e_set(block.rules, j_max, depth, cfg.budget), j_max);
  const MidpointReport mid = midpoint_certify(point_set(block.rules, depth), j_max, cfg.samples, seed_of(cfg));
  std::string detail = std::to_string(hull.gaps.size()) + " gaps inside the hull [" +
                       frac(Rational(hull.hull_lo, hull.denominator)) + ", " +
                       frac(Rational(hull.hull_hi, hull.denominator)) + ") at depth " + std::to_string(depth);
  if (!hull.gaps.empty()) {
    detail += ", first [" + frac(Rational(hull.gaps.front().first, hull.denominator)) + ", " +
              frac(Rational(hull.gaps.front().second, hull.denominator)) + ")";
  }
  detail += "; midpoints " + std::to_string(mid.certified) + "/" + std::to_string(mid.pairs) + " certified; " + hull.caveat;
  return finish(r, !hull.gaps.empty() && mid.all_certified() && mid.pairs > 0, detail);
}

std::vector<CriterionResult> run_criteria(const RunConfig& cfg,
                                          const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  auto emit = [&](CriterionResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  std::optional<Construction> built;
  std::string build_error;
  try {
    built = build_construction(cfg);
  } catch (const ConstraintError& e) {
    build_error = e.what();
  }
  CriterionResult first = check_schedules(cfg);
  if (!build_error.empty()) {
    first.verdict = Verdict::kFail;
    first.detail = "construction failed: " + build_error;
  }
  const bool go = first.verdict == Verdict::kPass;
  emit(first);
  const Construction* c = built ? &*built : nullptr;
  const std::vector<std::function<CriterionResult()>> rest{
      [&] { return check_sumset_oracle(cfg); },      [&] { return check_off_measure(cfg); },
      [&] { return check_lower_density(cfg); },      [&] { return check_mass_bound(cfg, c); },
      [&] { return check_covering(cfg, c); },        [&] { return check_midpoints(cfg, c); },
      [&] { return check_dimension_targets(cfg, c); }, [&] { return check_product_counts(cfg); },
      [&] { return check_non_convexity(cfg, c); },
  };
  static const char* const kNames[] = {"sumset oracle equivalence", "OFF/measure identity",
                                       "lower-density convergence", "mass bound mu(I) <= |I|^alpha_1 / s",
                                       "covering certificate",      "midpoint certification",
                                       "dimension targeting evidence", "product additivity",
                                       "non-convexity evidence"};
  for (std::size_t k = 0; k < rest.size(); ++k) {
    if (go) {
      emit(rest[k]());
    } else {
      CriterionResult s = make(static_cast<int>(k) + 2, kNames[k], 0);
      emit(skip(s, "skipped: schedule suite failed"));
    }
  }
  return out;
}

std::string format_report(const RunConfig& cfg, const std::vector<CriterionResult>& results,
                           const std::string& timestamp_line) {
  std::ostringstream os;
  os << "# dyadfrac report v1\n";
  if (!timestamp_line.empty()) os << "# " << timestamp_line << '\n';
  std::istringstream conf(cfg.describe());
  for (std::string line; std::getline(conf, line);) os << "# config " << line << '\n';
  std::size_t pass = 0, fail = 0, skipped = 0;
  auto clean = [](std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
  };
  if (cfg.format == RunConfig::Format::kCsv) os << "criterion,name,verdict,detail\n";
  for (const auto& r : results) {
    (r.verdict == Verdict::kPass ? pass : r.verdict == Verdict::kFail ? fail : skipped)++;
    if (cfg.format == RunConfig::Format::kCsv) {
      os << r.id << ',' << clean(r.name) << ',' << to_string(r.verdict) << ',' << clean(r.detail) << '\n';
    } else {
      os << "criterion " << r.id << "\nname " << r.name << "\nverdict " << to_string(r.verdict) << "\ndetail "
         << r.detail << "\n\n";
    }
  }
  os << "# summary pass=" << pass << " fail=" << fail << " skip=" << skipped << '\n';
  return os.str();
}

}  // namespace dyadfrac
