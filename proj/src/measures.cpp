#include "dyadfrac/measures.hpp"

#include "dyadfrac/errors.hpp"

#include <algorithm>
#include <sstream>

namespace dyadfrac {

DyadicMass DyadicMass::normalized() const {
  if (num == 0) return {0, 0};
  DyadicMass out = *this;
  const std::uint64_t tz = mpz_scan1(out.num.backend().data(), 0);
  const std::uint64_t drop = std::min(tz, out.log2_den);
  out.num >>= drop;
  out.log2_den -= drop;
  return out;
}

DyadicMass operator+(const DyadicMass& a, const DyadicMass& b) {
  const std::uint64_t l = std::max(a.log2_den, b.log2_den);
  BigInt n = (a.num << static_cast<unsigned>(l - a.log2_den)) + (b.num << static_cast<unsigned>(l - b.log2_den));
  return DyadicMass{std::move(n), l}.normalized();
}

DyadicMass operator*(const DyadicMass& a, const DyadicMass& b) {
  return DyadicMass{a.num * b.num, a.log2_den + b.log2_den}.normalized();
}

bool operator==(const DyadicMass& a, const DyadicMass& b) {
  const DyadicMass x = a.normalized(), y = b.normalized();
  return x.num == y.num && x.log2_den == y.log2_den;
}

bool operator<(const DyadicMass& a, const DyadicMass& b) {
  return (a.num << static_cast<unsigned>(b.log2_den)) < (b.num << static_cast<unsigned>(a.log2_den));
}

DyadicMeasure::DyadicMeasure(CoverTrie trie, std::vector<std::vector<DyadicMass>> masses)
    : trie_(std::move(trie)), masses_(std::move(masses)) {
  if (masses_.size() != trie_.depth() + 1u) throw UsageError("measure needs one mass list per trie level");
  for (std::uint32_t d = 0; d <= trie_.depth(); ++d) {
    if (masses_[d].size() != trie_.level(d).size()) throw UsageError("mass list does not match its trie level");
  }
}

DyadicMass DyadicMeasure::mass(std::uint32_t d, std::uint64_t index) const {
  const auto& lv = trie_.level(d);
  auto it = std::lower_bound(lv.begin(), lv.end(), index);
  if (it == lv.end() || *it != index) return {};
  return masses_[d][static_cast<std::size_t>(it - lv.begin())];
}

std::vector<std::string> DyadicMeasure::check_additivity() const {
  std::vector<std::string> bad;
  DyadicMass total;
  for (const auto& m : masses_[0]) total = total + m;
  if (!(total == DyadicMass::one())) bad.push_back("total mass is " + to_string(total.as_rational()) + ", not 1");
  for (std::uint32_t d = 0; d < trie_.depth(); ++d) {
    for (std::size_t pos = 0; pos < masses_[d].size(); ++pos) {
      auto [f, l] = trie_.children(d, pos);
      DyadicMass sum;
      for (auto c = f; c < l; ++c) sum = sum + masses_[d + 1][c];
      if (!(sum == masses_[d][pos])) {
        bad.push_back("depth " + std::to_string(d) + " cell " + std::to_string(trie_.level(d)[pos]) +
                      ": children sum to " + to_string(sum.as_rational()) + ", parent has " +
                      to_string(masses_[d][pos].as_rational()));
      }
    }
  }
  return bad;
}

DyadicMeasure equal_split_measure(const CellCover& cover) {
  if (cover.empty()) throw UsageError("equal-split measure needs a nonempty cover");
  if (cover.span() != 1) throw UsageError("measures live on [0,1): span must be 1");
  if (cover.exactness() != Exactness::kExact) throw UsageError("equal-split measure needs an exact cover");
  CoverTrie trie(cover);
  std::vector<std::vector<DyadicMass>> masses(trie.depth() + 1);
  masses[0] = {DyadicMass::one()};
  for (std::uint32_t d = 0; d < trie.depth(); ++d) {
    masses[d + 1].resize(trie.level(d + 1).size());
    for (std::size_t pos = 0; pos < masses[d].size(); ++pos) {
      auto [f, l] = trie.children(d, pos);
      const DyadicMass share = (l - f == 2) ? masses[d][pos].half() : masses[d][pos];
      for (auto c = f; c < l; ++c) masses[d + 1][c] = share;
    }
  }
  return DyadicMeasure(std::move(trie), std::move(masses));
}

DyadicMeasure mu_i_measure(const IntervalSchedule& sched, std::uint32_t depth, const Budget& budget) {
  return equal_split_measure(materialize(b_rule(1, sched, depth), depth, budget));
}

DyadicMeasure block_product_measure(const std::vector<DyadicMeasure>& components,
                                    const std::vector<std::uint32_t>& block_lengths, std::uint32_t depth,
                                    const Budget& budget) {
  if (components.size() != block_lengths.size()) throw UsageError("one block length per component");
  if (depth == 0 || depth > kMaxExplicitDepth) throw UsageError("product depth out of range");
  // Leaves of the product: concatenations of component leaves, block by block.
  std::vector<std::pair<std::uint64_t, DyadicMass>> leaves{{0, DyadicMass::one()}};
  std::uint32_t used = 0;
  for (std::size_t b = 0; b < components.size() && used < depth; ++b) {
    const std::uint32_t len = std::min(block_lengths[b], depth - used);
    if (components[b].depth() < len) {
      throw UsageError("component " + std::to_string(b + 1) + " is built to depth " +
                       std::to_string(components[b].depth()) + ", below the needed " + std::to_string(len));
    }
    const auto& idx = components[b].trie().level(len);
    const auto& ms = components[b].level_masses(len);
    budget.require(leaves.size() * idx.size(), "block product measure");
    std::vector<std::pair<std::uint64_t, DyadicMass>> next;
    next.reserve(leaves.size() * idx.size());
    for (const auto& [k, m] : leaves) {
      for (std::size_t c = 0; c < idx.size(); ++c) next.emplace_back((k << len) | idx[c], m * ms[c]);
    }
    leaves.swap(next);
    used += len;
  }
  if (used < depth) throw UsageError("components do not reach depth " + std::to_string(depth));
  std::vector<std::uint64_t> cells;
  for (const auto& lf : leaves) cells.push_back(lf.first);
  CoverTrie trie(CellCover(depth, 1, cells));
  std::vector<std::vector<DyadicMass>> masses(depth + 1);
  for (const auto& lf : leaves) masses[depth].push_back(lf.second);
  for (std::uint32_t d = depth; d > 0; --d) {
    masses[d - 1].resize(trie.level(d - 1).size());
    for (std::size_t pos = 0; pos < masses[d - 1].size(); ++pos) {
      auto [f, l] = trie.children(d - 1, pos);
      DyadicMass sum;
      for (auto c = f; c < l; ++c) sum = sum + masses[d][c];
      masses[d - 1][pos] = sum;
    }
  }
  return DyadicMeasure(std::move(trie), std::move(masses));
}

StepFunction::StepFunction(std::vector<std::pair<std::uint64_t, Rational>> steps) : steps_(std::move(steps)) {
  std::sort(steps_.begin(), steps_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [n, c] : steps_) {
    if (c <= 0) throw UsageError("step function values must be positive");
  }
}

StepFunction StepFunction::inverse_s(const IntervalSchedule& sched) {
  std::vector<std::pair<std::uint64_t, Rational>> steps;
  for (const auto& e : sched.entries()) {
    if (e.gamma > BigInt(std::numeric_limits<std::uint64_t>::max())) break;
    steps.emplace_back(e.gamma.convert_to<std::uint64_t>(), Rational(1, e.s));
  }
  return StepFunction(std::move(steps));
}

std::optional<Rational> StepFunction::at(std::uint64_t n) const {
  auto it = std::upper_bound(steps_.begin(), steps_.end(), n, [](std::uint64_t v, const auto& s) { return v < s.first; });
  if (it == steps_.begin()) return std::nullopt;
  return std::prev(it)->second;
}

bool mass_within(const DyadicMass& mass, std::uint64_t n, const Rational& delta, const Rational& c) {
  if (mass.is_zero()) return true;
  // num^b cd^b 2^(n a - L b) <= cn^b, with delta = a/b and c = cn/cd.
  const BigInt a = numer(delta), b = denom(delta);
  const std::uint64_t bb = b.convert_to<std::uint64_t>();
  const BigInt x = ipow(mass.num, bb) * ipow(denom(c), bb);
  const BigInt y = ipow(numer(c), bb);
  const BigInt e = BigInt(n) * a - BigInt(mass.log2_den) * b;
  const BigInt bx(bit_length(x)), by(bit_length(y));
  if (e >= 0) {
    if (bx - 1 + e >= by) return false;
    return (x << e.convert_to<unsigned>()) <= y;
  }
  const BigInt shift = -e;
  if (shift >= bx) return true;
  return x <= (y << shift.convert_to<unsigned>());
}

bool MassBoundReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
}

std::optional<std::uint64_t> MassBoundReport::holds_from() const {
  std::optional<std::uint64_t> from;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (!it->pass || !it->bound) break;
    from = it->depth;
  }
  return from;
}

bool MassBoundReport::sup_ratio_nonincreasing() const {
  // ratio_n = sup_n 2^(n delta); compare ratio_{n+1} <= ratio_n exactly via b-th powers.
  const BigInt a = numer(delta), b = denom(delta);
  const std::uint64_t bb = b.convert_to<std::uint64_t>();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& p = rows[k - 1];
    const auto& q = rows[k];
    // q.num^b 2^(q.n a - q.L b) <= p.num^b 2^(p.n a - p.L b)
    const BigInt eq = BigInt(q.depth) * a - BigInt(q.sup.log2_den) * b;
    const BigInt ep = BigInt(p.depth) * a - BigInt(p.sup.log2_den) * b;
    const BigInt lo = std::min(eq, ep);
    const BigInt lhs = ipow(q.sup.num, bb) << (eq - lo).convert_to<unsigned>();
    const BigInt rhs = ipow(p.sup.num, bb) << (ep - lo).convert_to<unsigned>();
    if (lhs > rhs) return false;
  }
  return true;
}

namespace {

void check_delta(const Rational& delta) {
  if (delta <= 0 || delta > 1) throw UsageError("delta must lie in (0, 1] for measures on [0,1)");
}

void finish_row(MassBoundRow& row, const Rational& delta, const StepFunction& c) {
  row.bound = c.at(row.depth);
  row.pass = !row.bound || mass_within(row.sup, row.depth, delta, *row.bound);
}

}  // namespace

MassBoundReport verify_mass_bound(const DyadicMeasure& m, const Rational& delta, const StepFunction& c,
                                  const std::string& shape) {
  check_delta(delta);
  MassBoundReport rep{delta, shape, {}};
  for (std::uint32_t d = 1; d <= m.depth(); ++d) {
    const auto& ms = m.level_masses(d);
    std::size_t best = 0;
    for (std::size_t k = 1; k < ms.size(); ++k) {
      if (ms[best] < ms[k]) best = k;
    }
    MassBoundRow row{d, ms[best], m.trie().level(d)[best], std::nullopt, true};
    finish_row(row, delta, c);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

MassBoundReport verify_mass_bound(const RuleMeasure& m, const Rational& delta, const StepFunction& c,
                                  const std::string& shape, std::uint64_t from, std::uint64_t to) {
  check_delta(delta);
  if (from == 0 || to < from) throw UsageError("mass sweep needs 1 <= from <= to");
  if (m.rule.cutoff_depth() < to) throw UsageError("rule cutoff is below the sweep depth");
  MassBoundReport rep{delta, shape, {}};
  std::uint64_t free = m.rule.free_count_upto(from - 1);
  for (std::uint64_t n = from; n <= to; ++n) {
    if (!m.rule.is_forced(n)) ++free;
    MassBoundRow row{n, DyadicMass::pow2_inverse(free), 0, std::nullopt, true};
    finish_row(row, delta, c);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

RectangleCheck rectangle_product_bound(const DyadicMeasure& base, std::uint32_t d0, const Rational& s0,
                                       const StepFunction& c, std::uint64_t samples, std::uint64_t seed) {
  if (d0 == 0) throw UsageError("product needs at least one extra dimension");
  RectangleCheck out;
  std::mt19937_64 rng(seed);
  const Rational total = s0 + Rational(d0);
  auto check = [&](std::uint32_t n, std::uint64_t index) {
    const auto bound = c.at(n);
    if (!bound) return;
    ++out.sampled;
    // mass(I) 2^(-n d0) as a dyadic mass; the cube offset does not change its Lebesgue part.
    const DyadicMass m = base.mass(n, index) * DyadicMass::pow2_inverse(std::uint64_t{n} * d0);
    if (mass_within(m, n, total, *bound)) ++out.passed;
    else if (!out.failing_depth) out.failing_depth = n;
  };
  const std::uint64_t cells = [&] {
    std::uint64_t t = 0;
    for (std::uint32_t n = 1; n <= base.depth(); ++n) t += base.trie().level(n).size();
    return t;
  }();
  if (cells <= samples) {
    for (std::uint32_t n = 1; n <= base.depth(); ++n) {
      for (auto k : base.trie().level(n)) check(n, k);
    }
    return out;
  }
  for (std::uint64_t t = 0; t < samples; ++t) {
    const auto n = static_cast<std::uint32_t>(1 + rng() % base.depth());
    const auto& lv = base.trie().level(n);
    check(n, lv[rng() % lv.size()]);
  }
  return out;
}

std::string format_measure(const DyadicMeasure& m) {
  std::ostringstream os;
  os << "# depth index mass_num log2_den\n";
  for (std::uint32_t d = 0; d <= m.depth(); ++d) {
    const auto& lv = m.trie().level(d);
    const auto& ms = m.level_masses(d);
    for (std::size_t k = 0; k < lv.size(); ++k) os << d << ' ' << lv[k] << ' ' << ms[k].num << ' ' << ms[k].log2_den << '\n';
  }
  return os.str();
}

std::string format_mass_report(const MassBoundReport& r) {
  std::ostringstream os;
  os << "depth,sup_num,sup_den,witness_index,verdict\n";
  for (const auto& row : r.rows) {
    os << row.depth << ',' << row.sup.num << ',' << pow2(row.sup.log2_den) << ',' << row.witness << ','
       << (!row.bound ? "no-bound" : row.pass ? "pass" : "fail") << '\n';
  }
  return os.str();
}

}  // namespace dyadfrac
