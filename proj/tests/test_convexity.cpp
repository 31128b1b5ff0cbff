#include "dyadfrac/convexity.hpp"
#include "dyadfrac/dimension.hpp"
#include "dyadfrac/errors.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace dyadfrac;
using dyadfrac::testing::below;

namespace {

RuleUnion zero_or_half() { return RuleUnion{{ZeroForcedRule(IntervalSet({{2, kUnbounded}}), kUnbounded)}}; }

struct Toy {
  std::vector<IntervalSchedule> scheds;
  ZetaSchedule zeta;
};

Toy toy() {
  const AlphaSequence alphas(std::vector<Rational>{Rational(1, 2), Rational(2, 3)});
  Toy t;
  for (std::uint64_t i = 1; i <= 2; ++i) t.scheds.push_back(build_interval_schedule(i, alphas, 8, ScheduleMode::toy(3)));
  t.zeta = build_zeta(2, t.scheds,
                      {estimate_empirical(t.scheds[0], &t.scheds[1]), estimate_empirical(t.scheds[1], nullptr)});
  return t;
}

}  // namespace

TEST_CASE("witnessed midpoints") {
  const PointSet a = point_set(zero_or_half(), 1);
  const WitnessedPoint x{1, {BigInt(1)}}, y{1, {BigInt(0)}};
  CHECK(x.value() == Rational(1, 2));
  const WitnessedPoint mid = midpoint_witness(x, y);
  CHECK(mid.j() == 2);
  CHECK(mid.value() == Rational(1, 4));
  CHECK_FALSE(verify_witness(mid, a, Rational(1, 4)));
  CHECK(verify_witness(mid, a, Rational(1, 2)));
  const WitnessedPoint same = midpoint_witness(x, x);
  CHECK(same.value() == x.value());
  CHECK_FALSE(verify_witness(same, a, x.value()));
  CHECK(verify_witness(WitnessedPoint{2, {BigInt(1)}}, point_set(zero_or_half(), 2), Rational(1, 4)));
}

TEST_CASE("midpoint witnesses average correctly for random pairs") {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t depth = 1 + below(rng, 30);
    WitnessedPoint x{depth, {}}, y{depth, {}};
    for (std::uint64_t r = 0; r <= below(rng, 3); ++r) x.members.emplace_back(below(rng, std::uint64_t{1} << depth));
    for (std::uint64_t r = 0; r <= below(rng, 3); ++r) y.members.emplace_back(below(rng, std::uint64_t{1} << depth));
    const auto mid = midpoint_witness(x, y);
    CHECK(mid.value() == (x.value() + y.value()) / 2);
    CHECK(mid.j() == 2 * x.j() * y.j());
  }
}

TEST_CASE("sampled certification on the toy set") {
  const Toy t = toy();
  const auto a = point_set(final_a_spec(t.zeta, t.scheds, 1132));
  const auto rep = midpoint_certify(a, 3, 300, 7);
  CHECK(rep.pairs == 300);
  CHECK(rep.all_certified());
  const auto again = midpoint_certify(a, 3, 300, 7);
  CHECK(again.certified == rep.certified);
  CHECK_THROWS_AS(midpoint_certify(a, 0, 10, 7), UsageError);
}

TEST_CASE("exhaustive certification on small covers") {
  const auto rep = midpoint_certify_exhaustive(materialize(zero_or_half(), 3), 2, 10000);
  CHECK(rep.exhaustive);
  CHECK(rep.pairs > 0);
  CHECK(rep.all_certified());
  CHECK_THROWS_AS(midpoint_certify_exhaustive(materialize(RuleUnion{{ZeroForcedRule(IntervalSet{}, kUnbounded)}}, 10), 3, 100),
                  BudgetError);
}

TEST_CASE("hull gaps") {
  RationalCover full;
  full.denominator = 8;
  full.intervals = {{BigInt(0), BigInt(8)}};
  CHECK(hull_gap(full, 1).gaps.empty());

  RationalCover two;
  two.denominator = 8;
  two.points = {BigInt(0), BigInt(8)};
  two.intervals = {{BigInt(0), BigInt(1)}, {BigInt(8), BigInt(9)}};
  const auto rep = hull_gap(two, 1);
  REQUIRE(rep.gaps.size() == 1);
  CHECK(Rational(rep.gaps[0].first, rep.denominator) == Rational(1, 8));
  CHECK(Rational(rep.gaps[0].second, rep.denominator) == 1);
  CHECK(rep.caveat.find("j <= 1") != std::string::npos);

  CHECK_THROWS_AS(hull_gap(RationalCover{}, 1), UsageError);
}

TEST_CASE("the toy E has gaps at one period") {
  const Toy t = toy();
  const auto a = final_a_spec(t.zeta, t.scheds, 15);
  const auto rep = hull_gap(e_set(a.blocks.front().rules, 3, 15), 3);
  CHECK_FALSE(rep.gaps.empty());
  CHECK(rep.j_max == 3);
}

TEST_CASE("halving density check") {
  SUBCASE("full interval") {
    const CellCover source(3, 1, {0, 1, 2, 3, 4, 5, 6, 7});
    std::vector<std::uint64_t> all(16);
    std::iota(all.begin(), all.end(), 0);
    const auto rep = halving_density_check(source, {CellCover(4, 1, all)}, 7, 2);
    CHECK(rep.rows.size() == 2);
    CHECK(rep.all_pass());
  }
  SUBCASE("two points are not midpoint convex") {
    const CellCover source(1, 2, {0, 2});
    const auto rep = halving_density_check(source, {CellCover(2, 2, {0, 4})}, 2, 2);
    CHECK_FALSE(rep.all_pass());
  }
  SUBCASE("the toy A lands in A_1 and A_2 / 2 after one halving") {
    const Toy t = toy();
    const RuleUnion a = final_a_spec(t.zeta, t.scheds, 12).expand();
    const CellCover source = materialize(a, 12);
    const CellCover target(13, 1, sumset_cover_dp(a, 2, 12).base_indices);
    const auto rep = halving_density_check(source, {target}, source.indices().back(), 64);
    CHECK(rep.all_pass());
  }
  SUBCASE("missing base point") {
    CHECK_THROWS_AS(halving_density_check(CellCover(2, 1, {0, 1}), {}, 3, 1), UsageError);
  }
}

TEST_CASE("essential convexity at finite resolution") {
  GridCells cube{2, 4, {}};
  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::uint64_t y = 0; y < 4; ++y) cube.cells.push_back({x, y, 0});
  const auto full = essential_convexity_test(cube);
  CHECK(full.essentially_convex);
  CHECK(full.subspace_dim == 2);
  CHECK(full.interior_witness);

  const GridCells corners{2, 4, {{0, 0, 0}, {3, 3, 0}}};
  const auto apart = essential_convexity_test(corners);
  CHECK_FALSE(apart.essentially_convex);
  CHECK(apart.gap_cells > 0);

  const GridCells line{1, 8, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}};
  CHECK(essential_convexity_test(line).essentially_convex);

  const Toy t = toy();
  const auto e = e_set(final_a_spec(t.zeta, t.scheds, 12).blocks.front().rules, 3, 12);
  // E's cover cells at depth 12 (the common denominator is 12 * 2^12).
  std::set<std::uint64_t> cells;
  for (const auto& [lo, hi] : e.intervals) {
    for (BigInt k = lo / 12; k * 12 < hi; ++k) cells.insert(to_u64(k));
  }
  const ProductForm prod{std::uint64_t{1} << 12, {cells.begin(), cells.end()}, 1};
  const auto v = essential_convexity_test(prod);
  CHECK_FALSE(v.essentially_convex);
  CHECK(v.subspace_dim == 2);
}

TEST_CASE("report formatting") {
  MidpointReport r;
  r.j_max = 3;
  r.pairs = 2;
  r.certified = 2;
  CHECK(format_midpoint_report(r).find("midpoint_verdict certified\n") == 0);
  RationalCover two;
  two.denominator = 4;
  two.intervals = {{BigInt(0), BigInt(1)}, {BigInt(3), BigInt(4)}};
  CHECK(format_hull_report(hull_gap(two, 2)).find("gap 1/4 3/4\n") != std::string::npos);
}
