#include "dyadfrac/schedule.hpp"

#include "dyadfrac/errors.hpp"

#include <algorithm>
#include <sstream>

namespace dyadfrac {

AlphaSequence::AlphaSequence(std::vector<Rational> values) : values_(std::move(values)) {
  if (values_.empty()) throw UsageError("alphas must not be empty");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] <= 0 || values_[k] >= 1) throw UsageError("alphas must lie strictly between 0 and 1");
    if (k > 0 && values_[k] < values_[k - 1]) throw UsageError("alphas must be non-decreasing");
  }
}

const Rational& AlphaSequence::at(std::size_t j) const {
  if (j == 0 || j > values_.size()) {
    throw UsageError("alpha_" + std::to_string(j) + " requested but only " + std::to_string(values_.size()) +
                     " alphas given");
  }
  return values_[j - 1];
}

std::uint64_t ZPartition::element(std::uint64_t t, std::uint64_t q) const {
  if (t == 0 || t > blocks.size()) throw UsageError("block index t=" + std::to_string(t) + " out of range");
  const auto& b = blocks[t - 1];
  if (q == 0 || q > b.size()) {
    throw UsageError("slot q=" + std::to_string(q) + " out of range for block " + std::to_string(t));
  }
  return b[q - 1];
}

ZPartition z_partition(std::uint64_t i) {
  if (i == 0) throw UsageError("partition index i must be positive");
  ZPartition z;
  z.i = i;
  if (i == 1) {
    z.blocks = {std::vector<std::uint64_t>{0}};
    z.degenerate = true;
    return z;
  }
  std::uint64_t next = 0;
  for (std::uint64_t t = 1; t < i; ++t) {
    std::vector<std::uint64_t> block;
    for (std::uint64_t c = 0; c <= t; ++c) block.push_back(next++);
    z.blocks.push_back(std::move(block));
  }
  z.blocks.push_back({next});
  return z;
}

Location locate(std::uint64_t i, std::uint64_t s) {
  if (s == 0) throw UsageError("schedule index s must be positive");
  const ZPartition z = z_partition(i);
  const std::uint64_t a = s % z.period();
  for (std::uint64_t t = 1; t <= z.blocks.size(); ++t) {
    const auto& b = z.blocks[t - 1];
    if (a >= b.front() && a <= b.back()) return {t, a - b.front() + 1, s / z.period()};
  }
  throw std::logic_error("partition does not cover its period");
}

std::uint64_t slot_index(const ZPartition& z, std::uint64_t t, std::uint64_t q, std::uint64_t k) {
  return z.period() * k + z.element(t, q);
}

BigInt ScheduleMode::growth_factor(std::uint64_t s) const {
  if (kind == Kind::kFaithful) {
    if (s > 24) throw BudgetError("faithful growth factor 2^(2^" + std::to_string(s) + ") is too large to hold");
    return pow2(std::uint64_t{1} << s);
  }
  std::uint64_t e = growth_exponent_cap;
  if (s < 64) e = std::min<std::uint64_t>(growth_exponent_cap, std::uint64_t{1} << s);
  return ipow(BigInt(growth_base), e);
}

std::string ScheduleMode::describe() const {
  if (kind == Kind::kFaithful) return "faithful";
  return "toy(base=" + std::to_string(growth_base) + ",cap=" + std::to_string(growth_exponent_cap) + ")";
}

IntervalSchedule::IntervalSchedule(std::uint64_t i, AlphaSequence alphas, ScheduleMode mode,
                                   std::vector<ScheduleEntry> entries)
    : i_(i), alphas_(std::move(alphas)), mode_(mode), partition_(z_partition(i)), entries_(std::move(entries)) {}

BigInt IntervalSchedule::known_horizon() const {
  if (entries_.empty()) return 0;
  return mode_.growth_factor(count()) * entries_.back().eta;
}

namespace {

// ceil(log2 x) for x >= 1.
std::uint64_t ceil_log2(const BigInt& x) { return is_pow2(x) ? bit_length(x) - 1 : bit_length(x); }

// x < 2^e, exactly, for x >= 1 and any integer e.
bool below_pow2(const BigInt& x, const BigInt& e) {
  if (e < 0) return false;
  if (e >= BigInt(bit_length(x))) return true;
  return x < pow2(e.convert_to<std::uint64_t>());
}

// x <= 2^e, exactly, for x >= 1.
bool at_most_pow2(const BigInt& x, const BigInt& e) {
  if (e < 0) return false;
  if (e >= BigInt(bit_length(x))) return true;
  return x <= pow2(e.convert_to<std::uint64_t>());
}

}  // namespace

IntervalSchedule build_interval_schedule(std::uint64_t i, const AlphaSequence& alphas, std::uint64_t count,
                                         const ScheduleMode& mode) {
  if (count == 0) throw UsageError("schedule count must be at least 1");
  if (i == 0) throw UsageError("schedule index i must be positive");
  if (mode.is_toy() && mode.growth_base < 2) {
    throw ConstraintError("growth base " + std::to_string(mode.growth_base) +
                          " cannot keep gamma_{s+1} > growth_base * eta_s above eta_s; use a base of at least 2");
  }
  if (mode.is_toy() && mode.growth_exponent_cap == 0) throw UsageError("growth exponent cap must be positive");
  std::vector<Rational> own(alphas.values().begin(), alphas.values().begin() + std::min<std::size_t>(i, alphas.size()));
  AlphaSequence used(own);
  used.at(i);  // all alphas up to i must be present

  const BigInt a1 = numer(used.at(1));
  const BigInt b1 = denom(used.at(1));
  std::vector<ScheduleEntry> entries;
  BigInt d_sum = 0;
  for (std::uint64_t s = 1; s <= count; ++s) {
    const BigInt r = 1 + d_sum;
    const BigInt log_term = bit_length(ipow(BigInt(s), b1.convert_to<std::uint64_t>()));
    BigInt gamma = ceil_div(log_term + b1 * r, b1 - a1);
    if (s == 1) {
      gamma = std::max(gamma, BigInt(3));
    } else {
      gamma = std::max(gamma, mode.growth_factor(s - 1) * entries.back().eta + 1);
    }
    const Location where = locate(i, s);
    const BigInt at = numer(used.at(where.t));
    const BigInt bt = denom(used.at(where.t));
    const BigInt g = gamma - r;
    const BigInt need = ceil_log2(ipow(BigInt(s), bt.convert_to<std::uint64_t>()));
    BigInt eta = std::max(gamma, floor_div(bt * g - need, at));
    BigInt d = eta - gamma + 1;
    d_sum += d;
    entries.push_back({s, where, std::move(gamma), std::move(eta), std::move(d)});
  }
  return IntervalSchedule(i, used, mode, std::move(entries));
}

std::vector<std::string> check_schedule(const IntervalSchedule& sched) {
  std::vector<std::string> bad;
  const auto fail = [&](std::uint64_t s, const std::string& what) {
    bad.push_back("i=" + std::to_string(sched.i()) + " s=" + std::to_string(s) + ": " + what);
  };
  const Rational alpha1 = sched.alphas().at(1);
  BigInt d_before = 0;
  for (const auto& e : sched.entries()) {
    const std::uint64_t s = e.s;
    if (e.eta < e.gamma) fail(s, "eta below gamma");
    if (e.d != e.eta - e.gamma + 1) fail(s, "d != eta - gamma + 1");
    if (s == 1 && e.gamma <= 2) fail(s, "gamma_1 must exceed 2");
    if (s > 1) {
      const auto& prev = sched.entry(s - 1);
      if (e.gamma <= sched.mode().growth_factor(s - 1) * prev.eta) fail(s, "growth constraint gamma_s > F * eta_{s-1}");
    }
    if (e.eta < d_before + e.d) fail(s, "eta_s below the sum of interval lengths");
    if (!(locate(sched.i(), s) == e.where)) fail(s, "stored slot disagrees with locate");

    // 2^-(gamma - 1 - D) < 2^(-alpha1 gamma) / s  <=>  s^b < 2^(b (gamma - 1 - D) - a gamma)
    const BigInt a = numer(alpha1), b = denom(alpha1);
    const BigInt x = b * (e.gamma - 1 - d_before) - a * e.gamma;
    const BigInt sb = ipow(BigInt(s), b.convert_to<std::uint64_t>());
    if (!below_pow2(sb, x)) fail(s, "measure inequality fails");

    // eta = max(gamma, floor((G - log2 s) / alpha_t)) with G = gamma - 1 - D.
    const Rational at_alpha = sched.alphas().at(e.where.t);
    const BigInt at = numer(at_alpha), bt = denom(at_alpha);
    const BigInt g = e.gamma - 1 - d_before;
    const BigInt st = ipow(BigInt(s), bt.convert_to<std::uint64_t>());
    // The floor value F is the largest integer with s^bt <= 2^(bt G - at F).
    const auto floor_reaches = [&](const BigInt& f) { return at_most_pow2(st, bt * g - at * f); };
    if (e.eta > e.gamma) {
      if (!floor_reaches(e.eta) || floor_reaches(e.eta + 1)) fail(s, "eta is not the floor value");
    } else if (floor_reaches(e.gamma + 1)) {
      fail(s, "eta = gamma but the floor value exceeds gamma");
    }

    // Minimality of gamma: gamma - 1 must break some constraint.
    const BigInt g1 = e.gamma - 1;
    bool g1_ok = true;
    if (s == 1 && g1 <= 2) g1_ok = false;
    if (s > 1 && g1 <= sched.mode().growth_factor(s - 1) * sched.entry(s - 1).eta) g1_ok = false;
    if (!below_pow2(sb, b * (g1 - 1 - d_before) - a * g1)) g1_ok = false;
    if (g1_ok) fail(s, "gamma is not minimal");
    d_before += e.d;
  }
  return bad;
}

namespace {

// Calls f(t, q, k, entry) for every slot with k >= 1 inside the generated range, in increasing s.
template <typename F>
void for_each_forcing_slot(const IntervalSchedule& sched, F&& f) {
  const auto& z = sched.partition();
  for (std::uint64_t s = z.period(); s <= sched.count(); ++s) {
    const auto& e = sched.entry(s);
    if (e.where.k >= 1) f(e);
  }
}

void require_horizon(const IntervalSchedule& sched, std::uint64_t cutoff) {
  if (BigInt(cutoff) > sched.known_horizon()) {
    throw UsageError("schedule for i=" + std::to_string(sched.i()) + " with count " + std::to_string(sched.count()) +
                     " only determines positions up to " + sched.known_horizon().str() + ", below cutoff " +
                     std::to_string(cutoff) + "; raise --count");
  }
}

// [lo, hi] clipped at cutoff; empty when lo > min(hi, cutoff).
std::optional<PositionInterval> clip(const BigInt& lo, const BigInt& hi, std::uint64_t cutoff) {
  if (lo > BigInt(cutoff) || hi < lo) return std::nullopt;
  const std::uint64_t l = lo.convert_to<std::uint64_t>();
  const std::uint64_t h = hi > BigInt(cutoff) ? cutoff : hi.convert_to<std::uint64_t>();
  return PositionInterval{l, h};
}

}  // namespace

XiSet slot_intervals(const IntervalSchedule& sched, std::uint64_t t, std::uint64_t q, std::uint64_t trim,
                     std::uint64_t cutoff) {
  sched.partition().element(t, q);
  require_horizon(sched, cutoff);
  XiSet out;
  std::vector<PositionInterval> runs;
  for_each_forcing_slot(sched, [&](const ScheduleEntry& e) {
    if (e.where.t != t || e.where.q != q) return;
    const BigInt hi = e.eta - trim;
    if (hi < e.gamma) {
      if (e.gamma <= BigInt(cutoff)) {
        out.diagnostics.push_back("s=" + std::to_string(e.s) + ": empty interval [" + e.gamma.str() + ", " +
                                  hi.str() + "] skipped");
      }
      return;
    }
    if (auto r = clip(e.gamma, hi, cutoff)) runs.push_back(*r);
  });
  out.positions = IntervalSet(std::move(runs));
  return out;
}

XiSet xi_set(std::uint64_t i, std::uint64_t j, std::uint64_t q, const IntervalSchedule& sched, std::uint64_t cutoff) {
  if (sched.i() != i) throw UsageError("schedule was built for a different i");
  if (j == 0 || j > i) throw UsageError("xi set needs 1 <= j <= i");
  if (j == i && q != 1) throw UsageError("block j=i is a singleton: q must be 1");
  return slot_intervals(sched, j, q, 2 * j, cutoff);
}

ZeroForcedRule b_rule(std::uint64_t l, const IntervalSchedule& sched, std::uint64_t cutoff,
                      std::vector<std::string>* diagnostics) {
  const std::uint64_t i = sched.i();
  if (l == 0 || l > i) throw UsageError("rule index l must satisfy 1 <= l <= i");
  require_horizon(sched, cutoff);
  std::vector<PositionInterval> runs;
  for_each_forcing_slot(sched, [&](const ScheduleEntry& e) {
    const bool forced = e.where.t == i ? e.where.q == 1 : e.where.q != l;
    if (!forced) return;
    if (auto r = clip(e.gamma, e.eta, cutoff)) runs.push_back(*r);
  });
  if (diagnostics && runs.empty()) {
    diagnostics->push_back("B^" + std::to_string(i) + "_" + std::to_string(l) + ": no forced positions up to " +
                           std::to_string(cutoff) + " (set looks full at this depth)");
  }
  if (diagnostics && !sched.mode().is_toy()) {
    diagnostics->push_back("faithful schedule: finite-depth sets are only informative below gamma_1 = " +
                           sched.gamma(1).str());
  }
  return ZeroForcedRule(IntervalSet(std::move(runs)), cutoff);
}

RuleUnion a_rule_union(const IntervalSchedule& sched, std::uint64_t cutoff, std::vector<std::string>* diagnostics) {
  RuleUnion u;
  for (std::uint64_t l = 1; l <= sched.i(); ++l) u.rules.push_back(b_rule(l, sched, cutoff, l == 1 ? diagnostics : nullptr));
  return u;
}

IntervalSet forced_from_block(const IntervalSchedule& sched, std::uint64_t j, std::uint64_t cutoff) {
  require_horizon(sched, cutoff);
  std::vector<PositionInterval> runs;
  for_each_forcing_slot(sched, [&](const ScheduleEntry& e) {
    if (e.where.t < j) return;
    if (auto r = clip(e.gamma, e.eta, cutoff)) runs.push_back(*r);
  });
  return IntervalSet(std::move(runs));
}

std::string_view to_string(ZetaConstraint::Status s) {
  switch (s) {
    case ZetaConstraint::Status::kSatisfied: return "satisfied";
    case ZetaConstraint::Status::kUnverified: return "unverified";
    case ZetaConstraint::Status::kViolated: return "violated";
  }
  return "?";
}

ZetaSchedule build_zeta(std::uint64_t i_max, const std::vector<IntervalSchedule>& scheds,
                        const std::vector<EmpiricalBounds>& empirical) {
  if (i_max == 0) throw UsageError("i_max must be positive");
  if (scheds.size() < i_max) throw UsageError("a schedule is needed for every i <= i_max");
  ZetaSchedule z;
  z.starts.push_back(0);
  BigInt prev = 1;  // zeta_0
  using Status = ZetaConstraint::Status;
  for (std::uint64_t i = 1; i <= i_max; ++i) {
    const auto& sched = scheds[i - 1];
    if (sched.i() != i) throw UsageError("schedules must be ordered by i");
    if (sched.count() < 2) throw UsageError("zeta needs gamma_2, so every schedule needs count >= 2");
    const BigInt& s_i = z.starts.back();
    const EmpiricalBounds* emp = i <= empirical.size() ? &empirical[i - 1] : nullptr;

    BigInt lower = std::max(pow2(i) * prev, sched.gamma(2));
    auto add = [&](std::string name, Status st, std::string detail) {
      z.constraints.push_back({i, std::move(name), st, std::move(detail)});
    };
    add("zeta_i > 2^i zeta_{i-1}", Status::kSatisfied, "");
    add("zeta_i > gamma^i_2", Status::kSatisfied, "gamma^i_2 = " + sched.gamma(2).str());
    if (emp && emp->p) {
      lower = std::max(lower, *emp->p);
      add("zeta_i > p_i", Status::kSatisfied, "estimated p_i = " + emp->p->str());
    } else {
      add("zeta_i > p_i", Status::kUnverified, "no estimate of p_i");
    }
    if (emp && emp->m_next) {
      lower = std::max(lower, BigInt(i + 1) * *emp->m_next);
      add("zeta_i > (i+1) m_{i+1}", Status::kSatisfied, "estimated m_{i+1} = " + emp->m_next->str());
    } else {
      add("zeta_i > (i+1) m_{i+1}", Status::kUnverified, "no estimate of m_{i+1}");
    }
    BigInt zeta = lower + 1;
    const BigInt q_target = 2 * BigInt(i) * s_i;
    if (emp && emp->q) {
      std::vector<BigInt> tries{zeta};
      for (const auto& bp : emp->q_breakpoints) {
        if (bp > zeta) tries.push_back(bp);
      }
      bool found = false;
      for (const auto& p : tries) {
        const auto qv = emp->q(p);
        if (qv && *qv > q_target) {
          zeta = p;
          found = true;
          add("q_i(zeta_i) > 2 i s_i", Status::kSatisfied,
              "estimated q_i(" + p.str() + ") = " + qv->str() + " > " + q_target.str());
          break;
        }
      }
      if (!found) {
        add("q_i(zeta_i) > 2 i s_i", Status::kUnverified,
            "no p within the generated schedule gives q_i(p) > " + q_target.str());
      }
    } else {
      add("q_i(zeta_i) > 2 i s_i", Status::kUnverified, "no estimate of q_i");
    }
    z.zeta.push_back(zeta);
    z.starts.push_back(s_i + zeta);
    prev = zeta;
  }
  return z;
}

std::vector<std::string> check_zeta(const ZetaSchedule& z, const std::vector<IntervalSchedule>& scheds) {
  std::vector<std::string> bad;
  BigInt prev = 1;
  for (std::uint64_t i = 1; i <= z.i_max(); ++i) {
    const BigInt& zi = z.zeta_at(i);
    const std::string tag = "zeta_" + std::to_string(i) + ": ";
    if (zi <= pow2(i) * prev) bad.push_back(tag + "not above 2^i zeta_{i-1}");
    if (zi <= scheds.at(i - 1).gamma(2)) bad.push_back(tag + "not above gamma^i_2");
    if (z.start(i + 1) != z.start(i) + zi) bad.push_back(tag + "cumulative start mismatch");
    prev = zi;
  }
  if (z.start(1) != 0) bad.push_back("s_1 must be 0");
  for (const auto& c : z.constraints) {
    if (c.status == ZetaConstraint::Status::kViolated) bad.push_back("zeta_" + std::to_string(c.i) + ": " + c.name);
  }
  return bad;
}

bool FinalASpec::contains(const DigitString& x) const {
  for (const auto& b : blocks) {
    if (b.start >= x.length()) break;
    const std::uint64_t len = std::min<std::uint64_t>(b.length, x.length() - b.start);
    const BigInt chunk = (x.value() >> static_cast<unsigned>(x.length() - b.start - len)) & (pow2(len) - 1);
    if (!b.rules.contains(DigitString(len, chunk))) return false;
  }
  return true;
}

ZeroForcedRule FinalASpec::combine(const std::vector<std::size_t>& choice) const {
  std::vector<PositionInterval> runs;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& b = blocks[bi];
    const IntervalSet forced = b.rules.rules.at(choice.at(bi)).forced().truncated(b.length);
    for (const auto& r : forced.intervals()) {
      runs.push_back({r.lo + b.start, r.hi + b.start});
    }
  }
  return ZeroForcedRule(IntervalSet(std::move(runs)), depth);
}

RuleUnion FinalASpec::expand(const Budget& budget) const {
  std::uint64_t total = 1;
  for (const auto& b : blocks) {
    total *= b.rules.rules.size();
    budget.require(total, "expanding the final set into member rules");
  }
  RuleUnion u;
  std::vector<std::size_t> choice(blocks.size(), 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    u.rules.push_back(combine(choice));
    for (std::size_t bi = blocks.size(); bi-- > 0;) {
      if (++choice[bi] < blocks[bi].rules.rules.size()) break;
      choice[bi] = 0;
    }
  }
  return u;
}

FinalASpec final_a_spec(const ZetaSchedule& zeta, const std::vector<IntervalSchedule>& scheds, std::uint64_t depth) {
  if (depth == 0) throw UsageError("depth must be positive");
  if (BigInt(depth) > zeta.start(zeta.i_max() + 1)) {
    throw UsageError("depth " + std::to_string(depth) + " exceeds the constructed blocks (s_{imax+1} = " +
                     zeta.start(zeta.i_max() + 1).str() + ")");
  }
  FinalASpec spec;
  spec.depth = depth;
  for (std::uint64_t i = 1; i <= zeta.i_max(); ++i) {
    const std::uint64_t start = to_u64(zeta.start(i));
    if (start >= depth) break;
    const std::uint64_t full = to_u64(zeta.zeta_at(i));
    const std::uint64_t len = std::min(full, depth - start);
    spec.blocks.push_back({i, start, len, a_rule_union(scheds.at(i - 1), len)});
  }
  return spec;
}

std::string format_schedule(const IntervalSchedule& sched) {
  std::ostringstream os;
  os << "# dyadfrac-schedule v1 mode=" << sched.mode().describe() << "\n";
  os << "# i s t q k gamma eta d\n";
  for (const auto& e : sched.entries()) {
    os << sched.i() << ' ' << e.s << ' ' << e.where.t << ' ' << e.where.q << ' ' << e.where.k << ' ' << e.gamma << ' '
       << e.eta << ' ' << e.d << '\n';
  }
  return os.str();
}

std::string format_zeta(const ZetaSchedule& zeta) {
  std::ostringstream os;
  os << "# dyadfrac-zeta v1\n# i zeta s_i\n";
  for (std::uint64_t i = 1; i <= zeta.i_max(); ++i) os << i << ' ' << zeta.zeta_at(i) << ' ' << zeta.start(i) << '\n';
  for (const auto& c : zeta.constraints) {
    os << "# constraint i=" << c.i << " " << c.name << ": " << to_string(c.status);
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << '\n';
  }
  return os.str();
}

}  // namespace dyadfrac
