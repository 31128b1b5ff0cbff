#include "dyadfrac/convexity.hpp"

#include "dyadfrac/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace dyadfrac {

namespace {

void set_random_bits(BigInt& value, std::uint64_t depth, std::uint64_t offset, const IntervalSet& free,
                     std::mt19937_64& rng) {
  std::uint64_t pool = 0;
  int left = 0;
  for (const auto& iv : free.intervals()) {
    for (std::uint64_t p = iv.lo; p <= iv.hi; ++p) {
      if (left == 0) {
        pool = rng();
        left = 64;
      }
      if (pool & 1) boost::multiprecision::bit_set(value, static_cast<unsigned>(depth - (offset + p)));
      pool >>= 1;
      --left;
    }
  }
}

}  // namespace

PointSet point_set(const RuleUnion& spec, std::uint64_t depth) {
  if (spec.empty()) throw UsageError("cannot sample from an empty rule union");
  PointSet out;
  out.depth = depth;
  out.contains = [spec](const DigitString& x) { return spec.contains(x); };
  out.sample = [spec, depth](std::mt19937_64& rng) {
    const auto& rule = spec.rules[rng() % spec.rules.size()];
    BigInt v = 0;
    set_random_bits(v, depth, 0, rule.free_upto(depth), rng);
    return v;
  };
  return out;
}

PointSet point_set(const FinalASpec& spec) {
  PointSet out;
  out.depth = spec.depth;
  out.contains = [spec](const DigitString& x) { return spec.contains(x); };
  out.sample = [spec](std::mt19937_64& rng) {
    BigInt v = 0;
    for (const auto& b : spec.blocks) {
      if (b.rules.empty()) throw UsageError("final set block has no rules");
      const auto& rule = b.rules.rules[rng() % b.rules.rules.size()];
      set_random_bits(v, spec.depth, b.start, rule.free_upto(b.length), rng);
    }
    return v;
  };
  return out;
}

PointSet point_set(const CellCover& cover) {
  if (cover.empty()) throw UsageError("cannot sample from an empty cover");
  if (cover.span() != 1) throw UsageError("point sets live in [0,1): span must be 1");
  PointSet out;
  out.depth = cover.depth();
  out.contains = [cover](const DigitString& x) {
    return x.length() == cover.depth() && cover.has(x.value().convert_to<std::uint64_t>());
  };
  out.sample = [cover](std::mt19937_64& rng) { return BigInt(cover.indices()[rng() % cover.size()]); };
  return out;
}

BigInt WitnessedPoint::sum() const { return std::accumulate(members.begin(), members.end(), BigInt(0)); }

Rational WitnessedPoint::value() const {
  if (members.empty()) throw UsageError("a witnessed point needs at least one member");
  return Rational(sum(), BigInt(j()) * pow2(depth));
}

WitnessedPoint midpoint_witness(const WitnessedPoint& a, const WitnessedPoint& b) {
  if (a.depth != b.depth) throw UsageError("witnessed points must share a depth");
  WitnessedPoint w{a.depth, {}};
  w.members.reserve(2 * a.j() * b.j());
  for (std::uint64_t c = 0; c < b.j(); ++c) w.members.insert(w.members.end(), a.members.begin(), a.members.end());
  for (std::uint64_t c = 0; c < a.j(); ++c) w.members.insert(w.members.end(), b.members.begin(), b.members.end());
  return w;
}

std::optional<std::string> verify_witness(const WitnessedPoint& w, const PointSet& a, const Rational& value) {
  for (std::size_t r = 0; r < w.members.size(); ++r) {
    if (!a.contains(DigitString(w.depth, w.members[r]))) {
      return "member " + std::to_string(r) + " (" + w.members[r].str() + "/2^" + std::to_string(w.depth) +
             ") is not in A";
    }
  }
  if (w.value() != value) return "witness sums to " + to_string(w.value()) + ", expected " + to_string(value);
  return std::nullopt;
}

namespace {

bool certify_pair(const WitnessedPoint& x, const WitnessedPoint& y, const PointSet& a, MidpointReport& rep) {
  ++rep.pairs;
  const WitnessedPoint w = midpoint_witness(x, y);
  const Rational mid = (x.value() + y.value()) / 2;
  std::optional<std::string> err;
  if (w.j() != 2 * x.j() * y.j()) err = "witness has " + std::to_string(w.j()) + " members";
  else err = verify_witness(w, a, mid);
  if (!err) {
    ++rep.certified;
    return true;
  }
  if (!rep.violation) {
    rep.violation = {x.value(), y.value()};
    rep.detail = *err;
  }
  return false;
}

}  // namespace

MidpointReport midpoint_certify(const PointSet& a, std::uint64_t j_max, std::uint64_t samples, std::uint64_t seed) {
  if (j_max == 0) throw UsageError("j_max must be at least 1");
  MidpointReport rep;
  rep.j_max = j_max;
  std::mt19937_64 rng(seed);
  auto draw = [&](std::uint64_t j) {
    WitnessedPoint p{a.depth, {}};
    for (std::uint64_t r = 0; r < j; ++r) p.members.push_back(a.sample(rng));
    return p;
  };
  for (std::uint64_t t = 0; t < samples; ++t) {
    const std::uint64_t j = 1 + rng() % j_max;
    const std::uint64_t k = 1 + rng() % j_max;
    const WitnessedPoint x = draw(j);
    const WitnessedPoint y = draw(k);
    certify_pair(x, y, a, rep);
  }
  return rep;
}

MidpointReport midpoint_certify_exhaustive(const CellCover& a, std::uint64_t j_max, std::uint64_t limit) {
  if (j_max == 0) throw UsageError("j_max must be at least 1");
  const PointSet ps = point_set(a);
  std::vector<WitnessedPoint> points;
  for (std::uint64_t j = 1; j <= j_max; ++j) {
    BigInt count = 1;
    for (std::uint64_t t = 0; t < j; ++t) count = count * (a.size() + t) / (t + 1);
    if (BigInt(points.size()) + count > BigInt(limit)) {
      throw BudgetError("exhaustive midpoint check needs more than " + std::to_string(limit) + " witnessed points");
    }
    for (const auto& ms : rule_multisets(a.size(), j)) {
      WitnessedPoint p{a.depth(), {}};
      for (auto r : ms) p.members.emplace_back(a.indices()[r]);
      points.push_back(std::move(p));
    }
  }
  if (BigInt(points.size()) * points.size() > BigInt(limit)) {
    throw BudgetError("exhaustive midpoint check needs " + std::to_string(points.size()) + "^2 pairs, over " +
                      std::to_string(limit));
  }
  MidpointReport rep;
  rep.j_max = j_max;
  rep.exhaustive = true;
  for (const auto& x : points) {
    for (const auto& y : points) certify_pair(x, y, ps, rep);
  }
  return rep;
}

HullGapReport hull_gap(const RationalCover& e, std::uint64_t j_max) {
  if (e.empty()) throw UsageError("hull of an empty cover is undefined");
  HullGapReport rep;
  rep.denominator = e.denominator;
  rep.hull_lo = e.intervals.front().first;
  rep.hull_hi = e.intervals.back().second;
  for (std::size_t k = 0; k + 1 < e.intervals.size(); ++k) {
    rep.gaps.emplace_back(e.intervals[k].second, e.intervals[k + 1].first);
  }
  rep.j_max = j_max;
  rep.caveat = "gaps are relative to the union over j <= " + std::to_string(j_max) +
               " at this resolution; larger j may fill them";
  return rep;
}

bool DensityCheckReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
}

DensityCheckReport halving_density_check(const CellCover& source, const std::vector<CellCover>& targets,
                                         std::uint64_t y_index, std::uint64_t radius_cells) {
  if (!source.has(0)) throw UsageError("the source set must contain 0");
  if (!source.has(y_index)) throw UsageError("the source set must contain the base point y");
  DensityCheckReport rep{source.depth(), y_index, radius_cells, {}};
  const std::uint64_t from = y_index > radius_cells ? y_index - radius_cells : 0;
  const std::uint64_t to = y_index + radius_cells;
  std::vector<std::uint64_t> ball;
  for (auto k : source.indices()) {
    if (k >= from && k <= to) ball.push_back(k);
  }
  for (std::size_t g = 1; g <= targets.size(); ++g) {
    const CellCover& t = targets[g - 1];
    if (t.depth() != source.depth() + g) throw UsageError("target " + std::to_string(g) + " has the wrong depth");
    if (g >= 63) throw UsageError("too many generations");
    const std::uint64_t copies = std::uint64_t{1} << g;
    for (std::uint64_t k = 1; k <= copies; ++k) {
      DensityCheckRow row{g, k, ball.size(), 0, std::nullopt, true};
      const std::uint64_t shift = (k - 1) * y_index;
      for (auto a : ball) {
        if (!t.has(a + shift)) {
          row.missing = a;
          row.pass = false;
          break;
        }
      }
      const std::uint64_t centre = k * y_index;
      const std::uint64_t lo = centre > radius_cells ? centre - radius_cells : 0;
      const auto& idx = t.indices();
      row.target_count = static_cast<std::uint64_t>(std::upper_bound(idx.begin(), idx.end(), centre + radius_cells) -
                                                    std::lower_bound(idx.begin(), idx.end(), lo));
      if (row.target_count < row.source_count) row.pass = false;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

namespace {

using Cell = std::array<std::uint64_t, 3>;

struct Grid {
  std::uint32_t dims;
  std::uint64_t side;
  std::uint64_t total;

  std::uint64_t key(const Cell& c) const { return c[0] + side * (c[1] + side * c[2]); }
  Cell cell(std::uint64_t k) const { return {k % side, (k / side) % side, k / (side * side)}; }
};

}  // namespace

EssentialConvexityVerdict essential_convexity_test(const GridCells& g) {
  if (g.dims == 0 || g.dims > 3) throw UsageError("explicit covers need 1 <= d <= 3");
  if (g.side == 0) throw UsageError("grid side must be positive");
  EssentialConvexityVerdict v;
  if (g.cells.empty()) {
    v.note = "empty cover";
    return v;
  }
  BigInt total = 1;
  for (std::uint32_t a = 0; a < g.dims; ++a) total *= g.side;
  Budget::from_env().require(total > BigInt(std::uint64_t{1} << 40) ? ~std::uint64_t{0} : to_u64(total),
                             "essential convexity grid");
  const Grid grid{g.dims, g.side, to_u64(total)};
  std::vector<char> covered(grid.total, 0);
  Cell lo{0, 0, 0}, hi{0, 0, 0};
  for (std::uint32_t a = 0; a < g.dims; ++a) {
    lo[a] = g.side;
    hi[a] = 0;
  }
  for (const auto& c : g.cells) {
    for (std::uint32_t a = 0; a < g.dims; ++a) {
      if (c[a] >= g.side) throw UsageError("cell outside the grid");
      lo[a] = std::min(lo[a], c[a]);
      hi[a] = std::max(hi[a], c[a]);
    }
    covered[grid.key(c)] = 1;
  }
  std::vector<std::uint32_t> live;  // axes the set actually spans
  for (std::uint32_t a = 0; a < g.dims; ++a) {
    if (lo[a] != hi[a]) live.push_back(a);
  }
  v.subspace_dim = static_cast<std::uint32_t>(live.size());

  // Half-spaces lo_n <= n.(2x) <= hi_n in doubled coordinates, normals in {-2..2}^d up to sign.
  std::vector<std::array<std::int64_t, 3>> normals;
  const int range = 2;
  for (int x = -range; x <= range; ++x) {
    for (int y = -range; y <= range; ++y) {
      for (int z = -range; z <= range; ++z) {
        const std::array<std::int64_t, 3> n{x, g.dims > 1 ? y : 0, g.dims > 2 ? z : 0};
        if ((g.dims < 2 && y != 0) || (g.dims < 3 && z != 0)) continue;
        if (n == std::array<std::int64_t, 3>{0, 0, 0}) continue;
        const auto first = std::find_if(n.begin(), n.end(), [](auto c) { return c != 0; });
        if (*first < 0) continue;
        if (std::gcd(std::gcd(std::abs(n[0]), std::abs(n[1])), std::abs(n[2])) != 1) continue;
        normals.push_back(n);
      }
    }
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> bounds(normals.size(), {INT64_MAX, INT64_MIN});
  for (const auto& c : g.cells) {
    for (std::size_t k = 0; k < normals.size(); ++k) {
      std::int64_t base = 0, down = 0, up = 0;
      for (std::uint32_t a = 0; a < g.dims; ++a) {
        base += normals[k][a] * 2 * static_cast<std::int64_t>(c[a]);
        (normals[k][a] < 0 ? down : up) += 2 * normals[k][a];
      }
      bounds[k].first = std::min(bounds[k].first, base + down);
      bounds[k].second = std::max(bounds[k].second, base + up);
    }
  }
  auto in_hull = [&](const Cell& c) {
    for (std::size_t k = 0; k < normals.size(); ++k) {
      std::int64_t s = 0;
      for (std::uint32_t a = 0; a < g.dims; ++a) s += normals[k][a] * (2 * static_cast<std::int64_t>(c[a]) + 1);
      if (s < bounds[k].first || s > bounds[k].second) return false;
    }
    return true;
  };
  std::vector<char> hull(grid.total, 0);
  for (std::uint64_t key = 0; key < grid.total; ++key) hull[key] = in_hull(grid.cell(key)) ? 1 : 0;

  // Neighbours along the spanned axes only.
  std::vector<std::array<int, 3>> steps;
  const int span = static_cast<int>(live.size());
  int combos = 1;
  for (int a = 0; a < span; ++a) combos *= 3;
  for (int m = 0; m < combos; ++m) {
    std::array<int, 3> d{0, 0, 0};
    int r = m;
    for (int a = 0; a < span; ++a) {
      d[live[a]] = r % 3 - 1;
      r /= 3;
    }
    if (d != std::array<int, 3>{0, 0, 0}) steps.push_back(d);
  }
  auto neighbour = [&](const Cell& c, const std::array<int, 3>& d) -> std::optional<Cell> {
    Cell out = c;
    for (std::uint32_t a = 0; a < g.dims; ++a) {
      const std::int64_t x = static_cast<std::int64_t>(c[a]) + d[a];
      if (x < 0 || x >= static_cast<std::int64_t>(g.side)) return std::nullopt;
      out[a] = static_cast<std::uint64_t>(x);
    }
    return out;
  };

  for (std::uint64_t key = 0; key < grid.total; ++key) {
    if (!hull[key]) continue;
    ++v.hull_cells;
    const Cell c = grid.cell(key);
    if (covered[key]) {
      if (v.interior_witness) continue;
      bool inside = true;
      for (const auto& d : steps) {
        const auto n = neighbour(c, d);
        if (n && hull[grid.key(*n)] && !covered[grid.key(*n)]) {
          inside = false;
          break;
        }
      }
      if (inside) v.interior_witness = c;
      continue;
    }
    ++v.gap_cells;
    bool touches = false;
    for (const auto& d : steps) {
      const auto n = neighbour(c, d);
      if (!n || !hull[grid.key(*n)]) {
        touches = true;
        break;
      }
    }
    if (!touches && v.interior_gaps.size() < 8) v.interior_gaps.push_back(c);
  }
  v.essentially_convex = v.interior_witness.has_value() && v.interior_gaps.empty();
  v.note = g.dims == 1 ? "exact hull" : "hull from half-spaces with normals in {-2..2}^d (outer approximation)";
  return v;
}

EssentialConvexityVerdict essential_convexity_test(const ProductForm& p) {
  GridCells base{1, p.side, {}};
  for (auto k : p.base) base.cells.push_back({k, 0, 0});
  EssentialConvexityVerdict v = essential_convexity_test(base);
  v.subspace_dim += p.extra_dims;
  v.note = "product of the base verdict with [0,1)^" + std::to_string(p.extra_dims) + "; " + v.note;
  return v;
}

std::string format_midpoint_report(const MidpointReport& r) {
  std::ostringstream os;
  os << "midpoint_verdict " << (r.all_certified() ? "certified" : "violated") << '\n';
  os << "midpoint_mode " << (r.exhaustive ? "exhaustive" : "sampled") << '\n';
  os << "midpoint_j_max " << r.j_max << '\n';
  os << "midpoint_pairs " << r.pairs << '\n';
  os << "midpoint_certified " << r.certified << '\n';
  if (r.violation) {
    os << "midpoint_witness_x " << to_string(r.violation->first) << '\n';
    os << "midpoint_witness_y " << to_string(r.violation->second) << '\n';
    os << "midpoint_detail " << r.detail << '\n';
  }
  return os.str();
}

std::string format_hull_report(const HullGapReport& r) {
  std::ostringstream os;
  os << "hull " << to_string(Rational(r.hull_lo, r.denominator)) << ' ' << to_string(Rational(r.hull_hi, r.denominator))
     << '\n';
  os << "gap_count " << r.gaps.size() << '\n';
  for (const auto& [a, b] : r.gaps) {
    os << "gap " << to_string(Rational(a, r.denominator)) << ' ' << to_string(Rational(b, r.denominator)) << '\n';
  }
  os << "caveat " << r.caveat << '\n';
  return os.str();
}

std::string format_density_report(const DensityCheckReport& r) {
  std::ostringstream os;
  os << "base_depth " << r.base_depth << '\n';
  os << "y " << to_string(Rational(BigInt(r.y_index), pow2(r.base_depth))) << '\n';
  os << "r0 " << to_string(Rational(BigInt(r.radius_cells), pow2(r.base_depth))) << '\n';
  os << "# generation k source_count target_count verdict\n";
  for (const auto& row : r.rows) {
    os << row.generation << ' ' << row.k << ' ' << row.source_count << ' ' << row.target_count << ' '
       << (row.pass ? "pass" : "fail");
    if (row.missing) os << " missing_image_of " << *row.missing;
    os << '\n';
  }
  return os.str();
}

std::string format_essential_verdict(const EssentialConvexityVerdict& v) {
  std::ostringstream os;
  os << "essential_verdict "
     << (v.essentially_convex ? "essentially-convex-at-resolution" : "not-essentially-convex-at-resolution") << '\n';
  os << "subspace_dim " << v.subspace_dim << '\n';
  os << "hull_cells " << v.hull_cells << '\n';
  os << "gap_cells " << v.gap_cells << '\n';
  if (v.interior_witness) {
    const auto& c = *v.interior_witness;
    os << "interior_witness " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  }
  for (const auto& c : v.interior_gaps) os << "interior_gap " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  os << "note " << v.note << '\n';
  return os.str();
}

}  // namespace dyadfrac
