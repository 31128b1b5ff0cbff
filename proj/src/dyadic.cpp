#include "dyadfrac/dyadic.hpp"

#include "dyadfrac/errors.hpp"

#include <algorithm>
#include <bit>

namespace dyadfrac {

DigitString::DigitString(std::uint64_t length, BigInt value) : length_(length), value_(std::move(value)) {
  if (value_ < 0 || bit_length(value_) > length_) {
    throw UsageError("digit value " + value_.str() + " does not fit in " + std::to_string(length_) + " digits");
  }
}

DigitString DigitString::from_bits(std::string_view bits) {
  BigInt v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw UsageError("digit strings contain only 0 and 1");
    v <<= 1;
    if (c == '1') v += 1;
  }
  return DigitString(bits.size(), v);
}

bool DigitString::digit(std::uint64_t p) const {
  if (p == 0 || p > length_) return false;
  return bit_test(value_, static_cast<unsigned>(length_ - p));
}

DigitString DigitString::resized(std::uint64_t n) const {
  if (n >= length_) return DigitString(n, value_ << static_cast<unsigned>(n - length_));
  return DigitString(n, value_ >> static_cast<unsigned>(length_ - n));
}

DyadicCell DigitString::cell() const {
  if (length_ > kMaxExplicitDepth) throw UsageError("digit string too long for an explicit cell");
  return {static_cast<std::uint32_t>(length_), value_.convert_to<std::uint64_t>()};
}

std::string DigitString::bits() const {
  std::string s(length_, '0');
  for (std::uint64_t p = 1; p <= length_; ++p) {
    if (digit(p)) s[p - 1] = '1';
  }
  return s;
}

std::uint64_t PositionInterval::count_upto(std::uint64_t n) const {
  std::uint64_t top = std::min(hi, n);
  return top < lo ? 0 : top - lo + 1;
}

IntervalSet::IntervalSet(std::vector<PositionInterval> intervals) {
  std::erase_if(intervals, [](const PositionInterval& r) { return r.lo == 0 || r.hi < r.lo; });
  std::sort(intervals.begin(), intervals.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  for (const auto& r : intervals) {
    if (!runs_.empty() && (runs_.back().hi == kUnbounded || r.lo <= runs_.back().hi + 1)) {
      runs_.back().hi = std::max(runs_.back().hi, r.hi);
    } else {
      runs_.push_back(r);
    }
  }
}

bool IntervalSet::contains(std::uint64_t p) const {
  auto it = std::upper_bound(runs_.begin(), runs_.end(), p, [](std::uint64_t v, const auto& r) { return v < r.lo; });
  if (it == runs_.begin()) return false;
  --it;
  return p <= it->hi;
}

std::uint64_t IntervalSet::count_upto(std::uint64_t n) const {
  std::uint64_t c = 0;
  for (const auto& r : runs_) {
    if (r.lo > n) break;
    c += r.count_upto(n);
  }
  return c;
}

IntervalSet IntervalSet::truncated(std::uint64_t n) const {
  IntervalSet out;
  for (const auto& r : runs_) {
    if (r.lo > n) break;
    out.runs_.push_back({r.lo, std::min(r.hi, n)});
  }
  return out;
}

IntervalSet IntervalSet::complement_upto(std::uint64_t n) const {
  IntervalSet out;
  std::uint64_t next = 1;
  for (const auto& r : runs_) {
    if (r.lo > n) break;
    if (r.lo > next) out.runs_.push_back({next, r.lo - 1});
    if (r.hi >= n) return out;
    next = r.hi + 1;
  }
  if (next <= n) out.runs_.push_back({next, n});
  return out;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<PositionInterval> all = runs_;
  all.insert(all.end(), other.runs_.begin(), other.runs_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<PositionInterval> out;
  std::size_t i = 0, j = 0;
  while (i < runs_.size() && j < other.runs_.size()) {
    const auto& a = runs_[i];
    const auto& b = other.runs_[j];
    std::uint64_t lo = std::max(a.lo, b.lo);
    std::uint64_t hi = std::min(a.hi, b.hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (a.hi < b.hi) ++i; else ++j;
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::shifted(std::uint64_t offset) const {
  IntervalSet out;
  for (const auto& r : runs_) {
    out.runs_.push_back({r.lo + offset, r.hi == kUnbounded ? kUnbounded : r.hi + offset});
  }
  return out;
}

ZeroForcedRule::ZeroForcedRule(IntervalSet forced, std::uint64_t cutoff_depth)
    : forced_(std::move(forced)), cutoff_(cutoff_depth) {
  if (cutoff_ == 0) throw UsageError("rule cutoff depth must be positive");
}

ZeroForcedRule ZeroForcedRule::from_free(const IntervalSet& free, std::uint64_t cutoff_depth) {
  if (cutoff_depth == kUnbounded) throw UsageError("a rule given by its free positions needs a finite cutoff");
  return ZeroForcedRule(free.complement_upto(cutoff_depth), cutoff_depth);
}

bool ZeroForcedRule::consistent(const DigitString& s) const {
  for (const auto& r : forced_.intervals()) {
    if (r.lo > s.length()) break;
    std::uint64_t hi = std::min(r.hi, s.length());
    for (std::uint64_t p = r.lo; p <= hi; ++p) {
      if (s.digit(p)) return false;
    }
  }
  return true;
}

ZeroForcedRule ZeroForcedRule::intersect(const ZeroForcedRule& other) const {
  return ZeroForcedRule(forced_.unite(other.forced_), std::min(cutoff_, other.cutoff_));
}

bool RuleUnion::contains(const DigitString& s) const {
  return std::any_of(rules.begin(), rules.end(), [&](const auto& r) { return r.consistent(s); });
}

std::uint64_t RuleUnion::min_cutoff() const {
  std::uint64_t c = kUnbounded;
  for (const auto& r : rules) c = std::min(c, r.cutoff_depth());
  return c;
}

std::string_view to_string(Exactness e) { return e == Exactness::kExact ? "exact" : "outer"; }

namespace {

void check_geometry(std::uint32_t depth, std::uint64_t span) {
  if (span == 0) throw UsageError("cover span must be positive");
  if (depth > kMaxExplicitDepth || (span >> (63 - depth)) != 0) {
    throw UsageError("explicit covers need span * 2^depth below 2^63 (depth " + std::to_string(depth) + ")");
  }
}

void check_same_geometry(const CellCover& a, const CellCover& b) {
  if (a.depth() != b.depth() || a.span() != b.span()) {
    throw UsageError("covers differ in depth or span");
  }
}

}  // namespace

CellCover::CellCover(std::uint32_t depth, std::uint64_t span, std::vector<std::uint64_t> indices, Exactness exactness)
    : depth_(depth), span_(span), indices_(std::move(indices)), exactness_(exactness) {
  check_geometry(depth, span);
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i > 0 && indices_[i] <= indices_[i - 1]) throw UsageError("cover indices must be strictly increasing");
  }
  if (!indices_.empty() && indices_.back() >= limit()) {
    throw UsageError("cover index " + std::to_string(indices_.back()) + " out of range");
  }
}

CellCover CellCover::from_unsorted(std::uint32_t depth, std::uint64_t span, std::vector<std::uint64_t> indices,
                                   Exactness exactness) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return CellCover(depth, span, std::move(indices), exactness);
}

bool CellCover::has(std::uint64_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

CellCover CellCover::coarsened(std::uint32_t new_depth) const {
  if (new_depth > depth_) throw UsageError("cannot coarsen to a finer depth");
  const unsigned shift = depth_ - new_depth;
  std::vector<std::uint64_t> out;
  for (std::uint64_t k : indices_) {
    std::uint64_t c = k >> shift;
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return CellCover(new_depth, span_, std::move(out), exactness_);
}

namespace {

// Bit offsets (from the least significant end of a depth-n index) of the free positions.
std::vector<unsigned> free_bit_offsets(const ZeroForcedRule& rule, std::uint32_t depth) {
  std::vector<unsigned> offs;
  const IntervalSet free = rule.free_upto(depth);
  for (const auto& r : free.intervals()) {
    for (std::uint64_t p = r.lo; p <= r.hi; ++p) offs.push_back(static_cast<unsigned>(depth - p));
  }
  std::sort(offs.begin(), offs.end());
  return offs;
}

void check_cutoff(const ZeroForcedRule& rule, std::uint32_t depth) {
  if (depth == 0) throw UsageError("materialization depth must be at least 1");
  if (rule.cutoff_depth() < depth) {
    throw UsageError("rule cutoff " + std::to_string(rule.cutoff_depth()) + " is below depth " +
                     std::to_string(depth));
  }
}

}  // namespace

CellCover materialize(const ZeroForcedRule& rule, std::uint32_t depth, const Budget& budget) {
  return materialize(RuleUnion{{rule}}, depth, 1, budget);
}

CellCover materialize(const RuleUnion& spec, std::uint32_t depth, std::uint64_t span, const Budget& budget) {
  check_geometry(depth, span);
  std::vector<std::vector<unsigned>> offsets;
  std::uint64_t total = 0;
  for (const auto& rule : spec.rules) {
    check_cutoff(rule, depth);
    offsets.push_back(free_bit_offsets(rule, depth));
    const std::size_t f = offsets.back().size();
    if (f >= 63) budget.require(kUnbounded, "materialization at depth " + std::to_string(depth));
    total += std::uint64_t{1} << f;
    budget.require(total * span, "materialization at depth " + std::to_string(depth));
  }
  std::vector<std::uint64_t> cells;
  cells.reserve(total * span);
  for (const auto& offs : offsets) {
    const std::uint64_t count = std::uint64_t{1} << offs.size();
    for (std::uint64_t base = 0; base < span; ++base) {
      const std::uint64_t high = base << depth;
      for (std::uint64_t m = 0; m < count; ++m) {
        std::uint64_t k = high;
        for (std::size_t b = 0; b < offs.size(); ++b) {
          if ((m >> b) & 1) k |= std::uint64_t{1} << offs[b];
        }
        cells.push_back(k);
      }
    }
  }
  if (spec.rules.size() > 1) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  }
  return CellCover(depth, span, std::move(cells), Exactness::kExact);
}

BigInt count_cells(const RuleUnion& spec, std::uint64_t depth) {
  const std::size_t r = spec.rules.size();
  if (r > 20) throw UsageError("inclusion-exclusion count limited to 20 rules");
  BigInt total = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << r); ++mask) {
    IntervalSet forced;
    for (std::size_t i = 0; i < r; ++i) {
      if ((mask >> i) & 1) forced = forced.unite(spec.rules[i].forced().truncated(depth));
    }
    BigInt term = pow2(depth - forced.count_upto(depth));
    if (std::popcount(mask) % 2 == 1) total += term; else total -= term;
  }
  return total;
}

CellCover halve_cover(const CellCover& c) {
  if (c.depth() + 1 > kMaxExplicitDepth) throw UsageError("halving would exceed the explicit depth limit");
  // x in [k 2^-n, (k+1) 2^-n) maps to [k 2^-(n+1), (k+1) 2^-(n+1)): same index one level down.
  return CellCover(c.depth() + 1, c.span(), c.indices(), c.exactness());
}

CellCover cover_union(const CellCover& a, const CellCover& b) {
  check_same_geometry(a, b);
  std::vector<std::uint64_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.indices().begin(), a.indices().end(), b.indices().begin(), b.indices().end(),
                 std::back_inserter(out));
  const Exactness e = (a.exactness() == Exactness::kExact && b.exactness() == Exactness::kExact) ? Exactness::kExact
                                                                                                 : Exactness::kOuter;
  return CellCover(a.depth(), a.span(), std::move(out), e);
}

bool cover_contains(const CellCover& outer, const CellCover& inner) {
  check_same_geometry(outer, inner);
  return std::includes(outer.indices().begin(), outer.indices().end(), inner.indices().begin(),
                       inner.indices().end());
}

CoverTrie::CoverTrie(const CellCover& cover) : span_(cover.span()) {
  levels_.resize(cover.depth() + 1);
  levels_[cover.depth()] = cover.indices();
  for (std::uint32_t d = cover.depth(); d > 0; --d) {
    auto& up = levels_[d - 1];
    for (std::uint64_t k : levels_[d]) {
      if (up.empty() || up.back() != (k >> 1)) up.push_back(k >> 1);
    }
  }
  child_begin_.resize(cover.depth());
  for (std::uint32_t d = 0; d < cover.depth(); ++d) {
    const auto& lo = levels_[d + 1];
    auto& cb = child_begin_[d];
    cb.reserve(levels_[d].size() + 1);
    std::size_t pos = 0;
    for (std::uint64_t k : levels_[d]) {
      cb.push_back(pos);
      while (pos < lo.size() && (lo[pos] >> 1) == k) ++pos;
    }
    cb.push_back(pos);
  }
}

}  // namespace dyadfrac
