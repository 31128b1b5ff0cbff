#include "dyadfrac/sumset.hpp"

#include "dyadfrac/errors.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <unordered_map>

namespace dyadfrac {

namespace {

void require_j(std::uint64_t j) {
  if (j == 0) throw UsageError("j must be at least 1");
  if (j > 62) throw UsageError("j above 62 is not supported");
}

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

CellCover SumsetCover::outer_cover() const {
  std::vector<std::uint64_t> cells;
  cells.reserve(base_indices.size() * j);
  for (auto k : base_indices) {
    for (std::uint64_t t = 0; t < j; ++t) cells.push_back(k + t);
  }
  return CellCover(depth, j, sorted_unique(std::move(cells)), Exactness::kOuter);
}

CellCover SumsetCover::point_cover() const { return CellCover(depth, j, base_indices, Exactness::kOuter); }

std::vector<std::vector<std::size_t>> rule_multisets(std::size_t count, std::uint64_t j) {
  std::vector<std::vector<std::size_t>> out;
  if (count == 0) return out;
  std::vector<std::size_t> cur(j, 0);
  while (true) {
    out.push_back(cur);
    std::size_t pos = j;
    while (pos > 0 && cur[pos - 1] == count - 1) --pos;
    if (pos == 0) break;
    const std::size_t v = cur[pos - 1] + 1;
    for (std::size_t t = pos - 1; t < j; ++t) cur[t] = v;
  }
  return out;
}

std::vector<CapacityRun> capacity_runs(const std::vector<const ZeroForcedRule*>& addends, std::uint64_t depth) {
  std::vector<std::uint64_t> cuts{1, depth + 1};
  std::vector<IntervalSet> frees;
  for (const auto* r : addends) {
    if (r->cutoff_depth() < depth) {
      throw UsageError("rule cutoff " + std::to_string(r->cutoff_depth()) + " is below depth " + std::to_string(depth));
    }
    frees.push_back(r->free_upto(depth));
    for (const auto& iv : frees.back().intervals()) {
      cuts.push_back(iv.lo);
      cuts.push_back(iv.hi + 1);
    }
  }
  cuts = sorted_unique(std::move(cuts));
  std::vector<CapacityRun> runs;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const std::uint64_t lo = cuts[c], hi = cuts[c + 1] - 1;
    if (lo > depth) break;
    std::uint32_t cap = 0;
    for (const auto& f : frees) cap += f.contains(lo) ? 1 : 0;
    if (!runs.empty() && runs.back().capacity == cap) runs.back().hi = hi;
    else runs.push_back({lo, hi, cap});
  }
  return runs;
}

SumsetCover sumset_cover_dp(const RuleUnion& spec, std::uint64_t j, std::uint32_t depth, const Budget& budget) {
  require_j(j);
  if (depth == 0 || depth > kMaxExplicitDepth - 6) throw UsageError("explicit sumset depth must be in [1, 56]");
  SumsetCover out{j, depth, {}};
  std::vector<std::uint64_t> all;
  for (const auto& ms : rule_multisets(spec.rules.size(), j)) {
    std::vector<const ZeroForcedRule*> addends;
    for (auto r : ms) addends.push_back(&spec.rules[r]);
    std::vector<std::uint32_t> cap(depth + 1, 0);
    for (const auto& run : capacity_runs(addends, depth)) {
      for (auto p = run.lo; p <= run.hi; ++p) cap[p] = run.capacity;
    }
    // State: (carry, low bits so far), packed as carry * 2^depth + low bits.
    std::vector<std::uint64_t> states{0};
    const std::uint64_t low_mask = (std::uint64_t{1} << depth) - 1;
    for (std::uint32_t p = depth; p >= 1; --p) {
      const unsigned off = depth - p;
      std::vector<std::uint64_t> next;
      next.reserve(states.size() * (cap[p] + 1));
      for (auto st : states) {
        const std::uint64_t carry = st >> depth, low = st & low_mask;
        for (std::uint64_t e = 0; e <= cap[p]; ++e) {
          const std::uint64_t t = carry + e;
          next.push_back(((t >> 1) << depth) | low | ((t & 1) << off));
        }
      }
      states = sorted_unique(std::move(next));
      budget.require(all.size() + states.size(), "sumset carry DP at depth " + std::to_string(depth));
    }
    all.insert(all.end(), states.begin(), states.end());
  }
  out.base_indices = sorted_unique(std::move(all));
  return out;
}

SumsetCover sumset_cover_dp(const CellCover& cover, std::uint64_t j, const Budget& budget) {
  require_j(j);
  if (cover.span() != 1) throw UsageError("sumsets are defined for covers of [0,1)");
  if (cover.exactness() != Exactness::kExact) throw UsageError("sumset DP needs an exact cover");
  const std::uint64_t size = j << cover.depth();
  budget.require(size, "sumset bitmap at depth " + std::to_string(cover.depth()));
  std::vector<std::uint64_t> cur = cover.indices();
  for (std::uint64_t m = 2; m <= j; ++m) {
    std::vector<char> hit(m << cover.depth(), 0);
    for (auto s : cur) {
      for (auto c : cover.indices()) hit[s + c] = 1;
    }
    cur.clear();
    for (std::uint64_t k = 0; k < hit.size(); ++k) {
      if (hit[k]) cur.push_back(k);
    }
  }
  return {j, cover.depth(), std::move(cur)};
}

SumsetCover brute_sumset(const CellCover& cover, std::uint64_t j, const Budget& budget) {
  require_j(j);
  if (cover.span() != 1) throw UsageError("sumsets are defined for covers of [0,1)");
  const auto& idx = cover.indices();
  // Number of multisets: C(|cover| + j - 1, j).
  BigInt tuples = 1;
  for (std::uint64_t t = 0; t < j; ++t) tuples = tuples * (idx.size() + t) / (t + 1);
  if (tuples > BigInt(budget.max_cells)) {
    throw BudgetError("brute-force sumset needs " + tuples.str() + " multisets, over the cell budget of " +
                      std::to_string(budget.max_cells) + "; use the DP path instead");
  }
  std::vector<std::uint64_t> sums;
  if (!idx.empty()) {
    std::vector<std::size_t> pick(j, 0);
    while (true) {
      std::uint64_t s = 0;
      for (auto p : pick) s += idx[p];
      sums.push_back(s);
      std::size_t pos = j;
      while (pos > 0 && pick[pos - 1] == idx.size() - 1) --pos;
      if (pos == 0) break;
      const std::size_t v = ++pick[pos - 1];
      for (std::size_t t = pos; t < j; ++t) pick[t] = v;
    }
  }
  return {j, cover.depth(), sorted_unique(std::move(sums))};
}

namespace {

// Successor set of a carry-remainder set: {2r + o - e : r in set, 0 <= e <= cap} ∩ [0, j-1].
std::uint64_t step_mask(std::uint64_t mask, unsigned o, std::uint32_t cap, std::uint64_t j) {
  std::uint64_t out = 0;
  const std::uint64_t full = j >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << j) - 1;
  while (mask) {
    const int r = std::countr_zero(mask);
    mask &= mask - 1;
    const std::int64_t hi = 2 * static_cast<std::int64_t>(r) + o;
    const std::int64_t lo = std::max<std::int64_t>(0, hi - cap);
    if (lo > static_cast<std::int64_t>(j) - 1) continue;
    const std::int64_t top = std::min<std::int64_t>(hi, static_cast<std::int64_t>(j) - 1);
    if (top < lo) continue;
    const std::uint64_t width = static_cast<std::uint64_t>(top - lo + 1);
    const std::uint64_t run = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
    out |= run << lo;
  }
  return out & full;
}

struct VecHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : v) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

void member_count_sweep(const std::vector<const ZeroForcedRule*>& addends, std::uint64_t max_depth,
                        const std::function<void(std::uint64_t, const BigInt&)>& visit) {
  const std::uint64_t j = addends.size();
  require_j(j);
  std::map<std::uint64_t, BigInt> states;
  for (std::uint64_t h = 0; h < j; ++h) states[std::uint64_t{1} << h] = 1;
  for (const auto& run : capacity_runs(addends, max_depth)) {
    for (std::uint64_t p = run.lo; p <= run.hi; ++p) {
      std::map<std::uint64_t, BigInt> next;
      for (const auto& [mask, cnt] : states) {
        for (unsigned o = 0; o < 2; ++o) {
          const std::uint64_t nm = step_mask(mask, o, run.capacity, j);
          if (nm) next[nm] += cnt;
        }
      }
      states.swap(next);
      BigInt total = 0;
      for (const auto& [mask, cnt] : states) {
        if (mask & 1) total += cnt;
      }
      visit(p, total);
    }
  }
}

void sumset_count_sweep(const RuleUnion& spec, std::uint64_t j, std::uint64_t max_depth,
                        const std::function<void(std::uint64_t, const BigInt&)>& visit, const Budget& budget) {
  require_j(j);
  if (spec.empty()) {
    for (std::uint64_t p = 1; p <= max_depth; ++p) visit(p, BigInt(0));
    return;
  }
  const auto members = rule_multisets(spec.rules.size(), j);
  if (members.size() == 1) {
    std::vector<const ZeroForcedRule*> addends;
    for (auto r : members[0]) addends.push_back(&spec.rules[r]);
    member_count_sweep(addends, max_depth, visit);
    return;
  }
  // State: the set of (member, remainder) pairs, as a bitset with j bits per member.
  const std::size_t m = members.size();
  const std::size_t words = (m * j + 63) / 64;
  std::vector<std::vector<CapacityRun>> caps;
  std::vector<std::uint64_t> cuts{1, max_depth + 1};
  for (const auto& ms : members) {
    std::vector<const ZeroForcedRule*> addends;
    for (auto r : ms) addends.push_back(&spec.rules[r]);
    caps.push_back(capacity_runs(addends, max_depth));
    for (const auto& run : caps.back()) cuts.push_back(run.lo);
  }
  cuts = sorted_unique(std::move(cuts));
  auto get = [&](const std::vector<std::uint64_t>& bits, std::size_t member) {
    std::uint64_t out = 0;
    for (std::uint64_t r = 0; r < j; ++r) {
      const std::size_t b = member * j + r;
      if ((bits[b / 64] >> (b % 64)) & 1) out |= std::uint64_t{1} << r;
    }
    return out;
  };
  auto put = [&](std::vector<std::uint64_t>& bits, std::size_t member, std::uint64_t mask) {
    for (std::uint64_t r = 0; r < j; ++r) {
      if ((mask >> r) & 1) {
        const std::size_t b = member * j + r;
        bits[b / 64] |= std::uint64_t{1} << (b % 64);
      }
    }
  };
  std::unordered_map<std::vector<std::uint64_t>, BigInt, VecHash> states;
  for (std::uint64_t h = 0; h < j; ++h) {
    std::vector<std::uint64_t> bits(words, 0);
    for (std::size_t k = 0; k < m; ++k) put(bits, k, std::uint64_t{1} << h);
    states[bits] = 1;
  }
  std::vector<std::size_t> run_at(m, 0);
  std::vector<std::uint32_t> cap(m, 0);
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const std::uint64_t lo = cuts[c];
    if (lo > max_depth) break;
    for (std::size_t k = 0; k < m; ++k) {
      while (caps[k][run_at[k]].hi < lo) ++run_at[k];
      cap[k] = caps[k][run_at[k]].capacity;
    }
    for (std::uint64_t p = lo; p < cuts[c + 1]; ++p) {
      std::unordered_map<std::vector<std::uint64_t>, BigInt, VecHash> next;
      for (const auto& [bits, cnt] : states) {
        for (unsigned o = 0; o < 2; ++o) {
          std::vector<std::uint64_t> nb(words, 0);
          bool any = false;
          for (std::size_t k = 0; k < m; ++k) {
            const std::uint64_t nm = step_mask(get(bits, k), o, cap[k], j);
            if (nm) {
              put(nb, k, nm);
              any = true;
            }
          }
          if (any) next[std::move(nb)] += cnt;
        }
      }
      budget.require(next.size(), "sumset counting DP states");
      states.swap(next);
      BigInt total = 0;
      for (const auto& [bits, cnt] : states) {
        for (std::size_t k = 0; k < m; ++k) {
          if (get(bits, k) & 1) {
            total += cnt;
            break;
          }
        }
      }
      visit(p, total);
    }
  }
}

BigInt sumset_count(const RuleUnion& spec, std::uint64_t j, std::uint64_t depth, const Budget& budget) {
  BigInt out = 0;
  sumset_count_sweep(spec, j, depth, [&](std::uint64_t p, const BigInt& c) { if (p == depth) out = c; }, budget);
  return out;
}

bool DigitPossibility::only_zero_on(const IntervalSet& positions) const {
  for (const auto& iv : positions.intervals()) {
    const std::uint64_t hi = std::min(iv.hi, depth);
    for (std::uint64_t p = iv.lo; p <= hi; ++p) {
      if (!only_zero(p)) return false;
    }
  }
  return true;
}

DigitPossibility digit_possibility(const std::vector<const ZeroForcedRule*>& addends, std::uint64_t depth) {
  const std::uint64_t j = addends.size();
  require_j(j);
  std::vector<std::uint32_t> cap(depth + 1, 0);
  for (const auto& run : capacity_runs(addends, depth)) {
    for (auto p = run.lo; p <= run.hi; ++p) cap[p] = run.capacity;
  }
  const std::uint64_t full = (std::uint64_t{1} << j) - 1;
  std::vector<std::uint64_t> fwd(depth + 1), bwd(depth + 1);
  fwd[0] = full;
  for (std::uint64_t p = 1; p <= depth; ++p) fwd[p] = step_mask(fwd[p - 1], 0, cap[p], j) | step_mask(fwd[p - 1], 1, cap[p], j);
  bwd[depth] = 1;
  for (std::uint64_t p = depth; p >= 1; --p) {
    std::uint64_t prev = 0;
    for (std::uint64_t r = 0; r < j; ++r) {
      const std::uint64_t one = std::uint64_t{1} << r;
      if ((step_mask(one, 0, cap[p], j) | step_mask(one, 1, cap[p], j)) & bwd[p]) prev |= one;
    }
    bwd[p - 1] = prev;
  }
  DigitPossibility out{depth, std::vector<std::uint8_t>(depth, 0)};
  for (std::uint64_t p = 1; p <= depth; ++p) {
    const std::uint64_t live = fwd[p - 1] & bwd[p - 1];
    for (unsigned o = 0; o < 2; ++o) {
      if (step_mask(live, o, cap[p], j) & bwd[p] & fwd[p]) out.mask[p - 1] |= static_cast<std::uint8_t>(1u << o);
    }
  }
  return out;
}

bool SharedElementReport::all_found() const {
  return std::all_of(cases.begin(), cases.end(), [](const auto& c) { return c.slot.has_value(); });
}

bool SharedElementReport::all_tight_found() const {
  return std::all_of(cases.begin(), cases.end(), [](const auto& c) { return c.tight_slot.has_value(); });
}

SharedElementReport shared_element_check(const IntervalSchedule& sched, std::uint64_t j, std::uint64_t depth) {
  const std::uint64_t i = sched.i();
  if (j == 0 || j > i) throw UsageError("shared-element check needs 1 <= j <= i");
  SharedElementReport rep{i, j, depth, {}};
  const RuleUnion a = a_rule_union(sched, depth);
  const std::uint64_t slots = sched.partition().block_size(j);
  std::vector<IntervalSet> loose, tight;
  for (std::uint64_t q = 1; q <= slots; ++q) {
    loose.push_back(slot_intervals(sched, j, q, 2 * j, depth).positions);
    tight.push_back(slot_intervals(sched, j, q, j - 1, depth).positions);
  }
  for (const auto& ms : rule_multisets(a.rules.size(), j)) {
    std::vector<const ZeroForcedRule*> addends;
    SharedElementCase c;
    for (auto r : ms) {
      addends.push_back(&a.rules[r]);
      c.members.push_back(r + 1);
    }
    const auto dp = digit_possibility(addends, depth);
    for (std::uint64_t q = 1; q <= slots; ++q) {
      if (!c.slot && dp.only_zero_on(loose[q - 1])) c.slot = q;
      if (!c.tight_slot && dp.only_zero_on(tight[q - 1])) c.tight_slot = q;
    }
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

RationalCover RationalCover::rescaled(const BigInt& new_denominator) const {
  if (new_denominator % denominator != 0) throw UsageError("rescaling needs a multiple of the denominator");
  const BigInt f = new_denominator / denominator;
  RationalCover out;
  out.denominator = new_denominator;
  for (const auto& p : points) out.points.push_back(p * f);
  for (const auto& [a, b] : intervals) out.intervals.emplace_back(a * f, b * f);
  return out;
}

bool RationalCover::contains_point(const Rational& x) const {
  const Rational scaled = x * Rational(denominator);
  if (denom(scaled) != 1) return false;
  return std::binary_search(points.begin(), points.end(), numer(scaled));
}

bool RationalCover::covers(const Rational& x) const {
  const Rational scaled = x * Rational(denominator);
  auto it = std::upper_bound(intervals.begin(), intervals.end(), scaled,
                             [](const Rational& v, const auto& iv) { return v < Rational(iv.first); });
  if (it == intervals.begin()) return false;
  --it;
  return scaled < Rational(it->second);
}

namespace {

std::vector<std::pair<BigInt, BigInt>> merge_intervals(std::vector<std::pair<BigInt, BigInt>> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<BigInt, BigInt>> out;
  for (auto& r : iv) {
    if (!out.empty() && r.first <= out.back().second) out.back().second = std::max(out.back().second, r.second);
    else out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

RationalCover scale_down(const SumsetCover& s) {
  RationalCover out;
  out.denominator = BigInt(s.j) * pow2(s.depth);
  std::vector<std::pair<BigInt, BigInt>> iv;
  for (auto k : s.base_indices) {
    out.points.emplace_back(k);
    iv.emplace_back(BigInt(k), BigInt(k) + s.j);
  }
  out.intervals = merge_intervals(std::move(iv));
  return out;
}

RationalCover rational_union(const RationalCover& a, const RationalCover& b) {
  const BigInt d = boost::multiprecision::lcm(a.denominator, b.denominator);
  RationalCover x = a.rescaled(d), y = b.rescaled(d);
  RationalCover out;
  out.denominator = d;
  out.points = x.points;
  out.points.insert(out.points.end(), y.points.begin(), y.points.end());
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  auto iv = x.intervals;
  iv.insert(iv.end(), y.intervals.begin(), y.intervals.end());
  out.intervals = merge_intervals(std::move(iv));
  return out;
}

RationalCover e_set(const RuleUnion& spec, std::uint64_t j_max, std::uint32_t depth, const Budget& budget) {
  if (j_max == 0) throw UsageError("j_max must be at least 1");
  const BigInt common = lcm_upto(j_max) * pow2(depth);
  RationalCover out;
  out.denominator = common;
  for (std::uint64_t j = 1; j <= j_max; ++j) {
    out = rational_union(out, scale_down(sumset_cover_dp(spec, j, depth, budget)).rescaled(common));
  }
  return out;
}

BigInt ProductCover::box_count() const { return BigInt(base.size()) * pow2(std::uint64_t{extra_dims} * base.depth()); }

std::string format_sumset(const SumsetCover& s) {
  std::ostringstream os;
  const Rational tail = s.tail_bound();
  os << "depth " << s.depth << " span " << s.j << " exact j " << s.j << " tail_num " << numer(tail) << " tail_den "
     << denom(tail) << '\n';
  for (auto k : s.base_indices) os << k << '\n';
  return os.str();
}

std::string format_rational_cover(const RationalCover& r) {
  std::ostringstream os;
  os << "D " << r.denominator << '\n';
  for (const auto& [a, b] : r.intervals) os << a << ' ' << b << '\n';
  return os.str();
}

}  // namespace dyadfrac
