#include "dyadfrac/dimension.hpp"

#include "dyadfrac/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace dyadfrac {

Rational DensityProfile::running_min(std::uint64_t n) const {
  if (n == 0 || n > counts.size()) throw UsageError("density prefix out of range");
  std::uint64_t bn = counts[0], bd = 1;
  for (std::uint64_t m = 2; m <= n; ++m) {
    if (counts[m - 1] * bd < bn * m) {
      bn = counts[m - 1];
      bd = m;
    }
  }
  return Rational(bn, bd);
}

DensityProfile lower_density(const IntervalSet& s, std::uint64_t n) {
  return lower_density([&s](std::uint64_t p) { return s.contains(p); }, n);
}

DensityProfile lower_density(const std::function<bool(std::uint64_t)>& member, std::uint64_t n) {
  DensityProfile out;
  out.counts.reserve(n);
  std::uint64_t c = 0;
  for (std::uint64_t p = 1; p <= n; ++p) {
    if (member(p)) ++c;
    out.counts.push_back(c);
  }
  return out;
}

DensityTarget density_target(const IntervalSchedule& sched, std::uint64_t j, std::uint64_t q) {
  sched.partition().element(j, q);
  DensityTarget out{sched.alphas().at(j), {}};
  for (const auto& e : sched.entries()) {
    if (e.where.k == 0 || e.where.t != j || e.where.q != q) continue;
    const BigInt den = e.eta - 2 * BigInt(j);
    if (den <= 0) continue;
    out.ratios.emplace_back(e.s, Rational(e.gamma, den));
  }
  return out;
}

Log2Bracket log2_bracket(const BigInt& n) {
  if (n < 1) throw UsageError("log2 of a count below 1");
  const std::uint64_t lo = bit_length(n) - 1;
  return {lo, is_pow2(n) ? lo : lo + 1};
}

BigInt box_count(const CellCover& c) { return BigInt(c.size()); }
BigInt box_count(const SumsetCover& s) { return BigInt(s.base_indices.size()); }

namespace {

DimensionRow count_row(std::uint64_t n, const BigInt& count, const std::string& kind) {
  DimensionRow row;
  row.depth = n;
  row.count = count;
  if (count == 0) {
    row.method = "empty";
    return row;
  }
  const auto br = log2_bracket(count);
  row.estimate = Rational(br.lo, n);
  row.method = br.exact() ? kind : kind + "-floor";
  return row;
}

DimensionRow skipped_row(std::uint64_t n) {
  DimensionRow row;
  row.depth = n;
  row.method = "skipped-budget";
  return row;
}

void require_depths(const std::vector<std::uint64_t>& depths) {
  for (auto n : depths) {
    if (n == 0) throw UsageError("depths start at 1");
  }
}

}  // namespace

DimensionReport dim_profile(const RuleUnion& spec, const std::vector<std::uint64_t>& depths, const Budget& budget) {
  require_depths(depths);
  DimensionReport rep;
  for (auto n : depths) {
    BigInt count;
    try {
      count = count_cells(spec, n);
    } catch (const Error&) {
      if (n > kMaxExplicitDepth) {
        rep.rows.push_back(skipped_row(n));
        continue;
      }
      try {
        count = materialize(spec, static_cast<std::uint32_t>(n), 1, budget).size();
      } catch (const BudgetError&) {
        rep.rows.push_back(skipped_row(n));
        continue;
      }
    }
    DimensionRow row = count_row(n, count, "box");
    if (count == 0) {
      rep.rows.push_back(std::move(row));
      continue;
    }
    if (spec.rules.size() == 1) {
      row.off = Rational(spec.rules[0].free_count_upto(n), n);
      row.method += "+off-rule";
    } else if (n <= kMaxExplicitDepth && count <= BigInt(budget.max_cells)) {
      const CoverTrie trie(materialize(spec, static_cast<std::uint32_t>(n), 1, budget));
      row.off = off_n(trie);
      row.method += "+off-trie";
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

DimensionReport sumset_dim_profile(const RuleUnion& spec, std::uint64_t j, const std::vector<std::uint64_t>& depths,
                                   const Budget& budget) {
  require_depths(depths);
  DimensionReport rep;
  if (depths.empty()) return rep;
  const std::set<std::uint64_t> wanted(depths.begin(), depths.end());
  std::map<std::uint64_t, BigInt> counts;
  try {
    sumset_count_sweep(spec, j, *wanted.rbegin(), [&](std::uint64_t m, const BigInt& c) {
      if (wanted.count(m)) counts[m] = c;
    }, budget);
  } catch (const BudgetError&) {
  }
  for (auto n : depths) {
    auto it = counts.find(n);
    rep.rows.push_back(it == counts.end() ? skipped_row(n) : count_row(n, it->second, "sumset"));
  }
  return rep;
}

Rational off_n(const CoverTrie& trie, std::uint32_t n) {
  if (trie.level(0).empty()) throw UsageError("OFF_n of an empty cover is undefined");
  if (n == 0 || n > trie.depth()) throw UsageError("OFF_n depth must lie in [1, trie depth]");
  std::vector<std::uint64_t> best(trie.level(n).size(), 0);
  for (std::uint32_t d = n; d-- > 0;) {
    std::vector<std::uint64_t> up(trie.level(d).size());
    for (std::size_t pos = 0; pos < up.size(); ++pos) {
      auto [f, l] = trie.children(d, pos);
      std::uint64_t m = best[f];
      for (auto c = f + 1; c < l; ++c) m = std::min(m, best[c]);
      up[pos] = m + (l - f == 2 ? 1 : 0);
    }
    best.swap(up);
  }
  return Rational(best[0], n);
}

BillingsleyBound billingsley_lower(const DyadicMeasure& m, std::uint32_t n) {
  if (n == 0 || n > m.depth()) throw UsageError("Billingsley depth must lie in [1, measure depth]");
  const DyadicMass* top = nullptr;
  for (const auto& x : m.level_masses(n)) {
    if (!x.is_zero() && (!top || *top < x)) top = &x;
  }
  if (!top) throw UsageError("measure has no positive mass at depth " + std::to_string(n));
  const DyadicMass t = top->normalized();
  if (t.num == 1) return {Rational(BigInt(t.log2_den), n), true};
  return {Rational(BigInt(t.log2_den) - BigInt(bit_length(t.num)), n), false};
}

CoveringCertificate covering_sum_certificate(const std::vector<CoverTerm>& terms, const Rational& beta) {
  if (beta <= 0 || beta > 1) throw UsageError("covering exponent must lie in (0, 1]");
  CoveringCertificate out{beta, 0, 0, true, true};
  if (terms.empty()) return out;
  const BigInt a = numer(beta), b = denom(beta);
  const std::uint64_t bb = to_u64(b);
  struct Split {
    const BigInt* count;
    BigInt u;
    std::uint64_t rr;
  };
  std::vector<Split> parts;
  for (const auto& t : terms) {
    // 2^(-n a / b) = 2^u 2^(rr / b)
    const BigInt e = -BigInt(t.depth) * a;
    const BigInt u = floor_div(e, b);
    parts.push_back({&t.count, u, to_u64(e - u * b)});
  }
  constexpr std::uint64_t kMaxBits = std::uint64_t{1} << 20;
  for (std::uint64_t w = 64; w <= kMaxBits; w *= 2) {
    std::map<std::uint64_t, BigInt> roots;
    BigInt lo_sum = 0, hi_sum = 0;
    for (const auto& p : parts) {
      auto it = roots.find(p.rr);
      if (it == roots.end()) it = roots.emplace(p.rr, iroot(pow2(p.rr + bb * w), bb)).first;
      const BigInt x_lo = *p.count * it->second;
      const BigInt x_hi = *p.count * (it->second + (p.rr != 0 ? 1 : 0));
      if (p.u >= 0) {
        const auto sh = to_u64(p.u);
        lo_sum += x_lo << sh;
        hi_sum += x_hi << sh;
      } else {
        const BigInt sh = -p.u;
        if (sh > BigInt(bit_length(x_hi))) {
          hi_sum += x_hi == 0 ? 0 : 1;
          continue;
        }
        const auto s = to_u64(sh);
        lo_sum += x_lo >> s;
        hi_sum += ceil_div(x_hi, pow2(s));
      }
    }
    const BigInt one = pow2(w);
    out.value_lo = Rational(lo_sum, one);
    out.value_hi = Rational(hi_sum, one);
    if (hi_sum < one) {
      out.decided = true;
      out.below_one = true;
      return out;
    }
    if (lo_sum >= one) {
      out.decided = true;
      out.below_one = false;
      return out;
    }
  }
  out.decided = false;
  out.below_one = false;
  return out;
}

CoveringCertificate covering_sum_certificate(const CellCover& cover, const Rational& beta) {
  if (cover.span() != 1) throw UsageError("covering sums are taken over covers of [0,1)");
  return covering_sum_certificate({CoverTerm{BigInt(cover.size()), cover.depth()}}, beta);
}

std::optional<std::vector<CoverTerm>> q_cover(const IntervalSchedule& sched, std::uint64_t j, const BigInt& p) {
  const std::uint64_t i = sched.i();
  if (j == 0 || j > i) throw UsageError("Q cover needs 1 <= j <= i");
  const std::uint64_t slots = sched.partition().block_size(j);
  const BigInt trim = 2 * BigInt(j);
  const BigInt a = numer(sched.alphas().at(j) + Rational(1, 2 * i));
  const BigInt b = denom(sched.alphas().at(j) + Rational(1, 2 * i));
  std::vector<CoverTerm> out;
  for (std::uint64_t q = 1; q <= slots; ++q) {
    std::vector<std::uint64_t> depths;
    for (const auto& e : sched.entries()) {
      if (e.where.k == 0 || e.where.t != j || e.where.q != q) continue;
      if (e.eta - trim < e.gamma || e.gamma > p - trim) continue;
      depths.push_back(to_u64(std::min(e.eta, p) - trim));
    }
    if (depths.empty()) return std::nullopt;
    const IntervalSet forced = slot_intervals(sched, j, q, 2 * j, depths.back()).positions;
    // Smallest term 2^(free - n beta); ties go to the deeper cover.
    std::optional<CoverTerm> best;
    BigInt best_exp;
    for (auto n : depths) {
      const std::uint64_t free = n - forced.count_upto(n);
      const BigInt exponent = b * free - a * n;
      if (!best || exponent <= best_exp) {
        best = CoverTerm{pow2(free), n};
        best_exp = exponent;
      }
    }
    out.push_back(*best);
  }
  return out;
}

namespace {

std::optional<BigInt> q_estimate(const IntervalSchedule& sched, const BigInt& p) {
  const std::uint64_t i = sched.i();
  std::optional<std::uint64_t> smallest;
  for (std::uint64_t j = 1; j <= i; ++j) {
    const auto terms = q_cover(sched, j, p);
    if (!terms) return std::nullopt;
    const Rational beta = sched.alphas().at(j) + Rational(1, 2 * i);
    if (beta > 1) return std::nullopt;
    const auto cert = covering_sum_certificate(*terms, beta);
    if (!cert.decided || !cert.below_one) return std::nullopt;
    for (const auto& t : *terms) smallest = std::min(smallest.value_or(t.depth), t.depth);
  }
  return BigInt(*smallest) - 1;
}

// Smallest m with free(n) >= delta n for every n >= m over the forced runs of `forced`.
std::uint64_t measure_threshold(const IntervalSet& forced, const Rational& delta) {
  const BigInt a = numer(delta), b = denom(delta);
  std::uint64_t m = 1;
  for (const auto& run : forced.intervals()) {
    const std::uint64_t end = run.hi;
    const std::uint64_t free = end - forced.count_upto(end);
    if (b * free >= a * end) continue;
    // Each later free position gains 1 - delta on the deficit delta*end - free.
    const BigInt t = std::max<BigInt>(1, ceil_div(a * end - b * free, b - a));
    m = std::max(m, end + to_u64(t));
  }
  return m;
}

}  // namespace

EmpiricalBounds estimate_empirical(const IntervalSchedule& sched, const IntervalSchedule* next) {
  EmpiricalBounds out;
  if (!sched.mode().is_toy()) return out;
  // Each slot's best term can only shrink as p grows, so the p with a certificate form a suffix.
  std::vector<BigInt> events;
  BigInt last_end = 0;
  for (const auto& e : sched.entries()) {
    if (e.where.k == 0) continue;
    const BigInt trim = 2 * BigInt(e.where.t);
    if (e.eta - trim < e.gamma) continue;
    events.push_back(e.gamma + trim);
    last_end = std::max(last_end, e.eta);
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  out.q_breakpoints = events;
  out.q = [sched](const BigInt& p) { return q_estimate(sched, p); };

  if (!events.empty()) {
    std::optional<BigInt> lo, hi;  // lo fails, hi passes
    for (const auto& ev : events) {
      if (q_estimate(sched, ev)) {
        hi = ev;
        break;
      }
      lo = ev;
    }
    if (!hi && q_estimate(sched, last_end)) hi = last_end;
    if (hi && lo) {
      while (*hi - *lo > 1) {
        const BigInt mid = (*lo + *hi) / 2;
        if (q_estimate(sched, mid)) hi = mid;
        else lo = mid;
      }
    }
    if (hi) out.p = *hi - 1;
  }

  if (next && next->mode().is_toy() && next->alphas().size() >= next->i() && next->count() > 0) {
    const BigInt& horizon = next->entries().back().eta;
    if (horizon <= BigInt(std::uint64_t{1} << 62)) {
      const std::uint64_t cutoff = to_u64(horizon);
      std::uint64_t m = 1;
      for (std::uint64_t j = 1; j <= next->i(); ++j) {
        const Rational delta = next->alphas().at(j) - Rational(1, next->i());
        if (delta <= 0) continue;
        m = std::max(m, measure_threshold(forced_from_block(*next, j, cutoff), delta));
      }
      out.m_next = BigInt(m);
    }
  }
  return out;
}

std::vector<std::uint64_t> aligned_depths(const IntervalSchedule& sched, std::uint64_t j) {
  const auto& z = sched.partition();
  const std::uint64_t q = z.block_size(j);
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 1;; ++k) {
    const std::uint64_t s = slot_index(z, j, q, k);
    if (s > sched.count()) break;
    out.push_back(to_u64(sched.eta(s)));
  }
  return out;
}

std::vector<SumsetDimensionRow> sumset_dimension(const IntervalSchedule& sched, std::uint64_t j,
                                                 const std::vector<std::uint64_t>& depths, const Budget& budget) {
  require_depths(depths);
  std::vector<SumsetDimensionRow> rows;
  if (depths.empty()) return rows;
  const std::uint64_t top = *std::max_element(depths.begin(), depths.end());
  const RuleUnion rules = a_rule_union(sched, top);
  std::map<std::uint64_t, std::size_t> slot;
  for (auto n : depths) {
    if (!slot.count(n)) {
      slot[n] = rows.size();
      rows.push_back({n, 0, 0, 0, 0});
    }
  }
  using Frac = std::pair<std::uint64_t, std::uint64_t>;
  auto less = [](const Frac& x, const Frac& y) { return x.first * y.second < y.first * x.second; };
  for (const auto& ms : rule_multisets(rules.rules.size(), j)) {
    std::vector<const ZeroForcedRule*> addends;
    for (auto r : ms) addends.push_back(&rules.rules[r]);
    Frac lo{1, 0}, hi{1, 0};
    member_count_sweep(addends, top, [&](std::uint64_t m, const BigInt& count) {
      const auto br = log2_bracket(count);
      const Frac l{br.lo, m}, h{br.hi, m};
      if (lo.second == 0 || less(l, lo)) lo = l;
      if (hi.second == 0 || less(h, hi)) hi = h;
      auto it = slot.find(m);
      if (it == slot.end()) return;
      auto& row = rows[it->second];
      row.member_lo = std::max(row.member_lo, Rational(lo.first, lo.second));
      row.member_hi = std::max(row.member_hi, Rational(hi.first, hi.second));
    });
  }
  sumset_count_sweep(rules, j, top, [&](std::uint64_t m, const BigInt& count) {
    auto it = slot.find(m);
    if (it == slot.end()) return;
    const auto br = log2_bracket(count);
    rows[it->second].union_lo = Rational(br.lo, m);
    rows[it->second].union_hi = Rational(br.hi, m);
  }, budget);
  std::vector<SumsetDimensionRow> ordered;
  for (auto n : depths) ordered.push_back(rows[slot[n]]);
  return ordered;
}

std::string format_dimension_csv(const DimensionReport& r) {
  std::ostringstream os;
  os << "depth,count,estimate_num,estimate_den,off_num,off_den,method\n";
  for (const auto& row : r.rows) {
    os << row.depth << ',';
    if (row.count) os << *row.count;
    os << ',';
    if (row.count) os << numer(row.estimate) << ',' << denom(row.estimate);
    else os << ',';
    os << ',';
    if (row.off) os << numer(*row.off) << ',' << denom(*row.off);
    else os << ',';
    os << ',' << row.method << '\n';
  }
  return os.str();
}

std::string format_sumset_dimension_csv(std::uint64_t j, const std::vector<SumsetDimensionRow>& rows) {
  std::ostringstream os;
  os << "j,depth,member_lo,member_hi,union_lo,union_hi\n";
  for (const auto& r : rows) {
    os << j << ',' << r.depth << ',' << to_string(r.member_lo) << ',' << to_string(r.member_hi) << ','
       << to_string(r.union_lo) << ',' << to_string(r.union_hi) << '\n';
  }
  return os.str();
}

}  // namespace dyadfrac
