#include "dyadfrac/dimension.hpp"
#include "dyadfrac/errors.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace dyadfrac;
using dyadfrac::testing::below;

namespace {

IntervalSchedule toy_i2() {
  const AlphaSequence alphas(std::vector<Rational>{Rational(1, 2), Rational(2, 3)});
  return build_interval_schedule(2, alphas, 8, ScheduleMode::toy(3));
}

// Free positions {1, 3} up to depth 4.
ZeroForcedRule free_1_3() { return ZeroForcedRule::from_free(IntervalSet({{1, 1}, {3, 3}}), 4); }

// Branching levels on every root-to-leaf path, from the leaf set alone.
std::uint64_t min_branching(const CellCover& c) {
  const std::uint32_t n = c.depth();
  std::vector<std::set<std::uint64_t>> prefixes(n + 1);
  for (auto k : c.indices())
    for (std::uint32_t d = 0; d <= n; ++d) prefixes[d].insert(k >> (n - d));
  std::uint64_t best = n;
  for (auto k : c.indices()) {
    std::uint64_t b = 0;
    for (std::uint32_t d = 0; d < n; ++d) {
      const auto pre = k >> (n - d);
      b += prefixes[d + 1].count(2 * pre) && prefixes[d + 1].count(2 * pre + 1);
    }
    best = std::min(best, b);
  }
  return best;
}

}  // namespace

TEST_CASE("lower density") {
  const auto odd = lower_density([](std::uint64_t p) { return p % 2 == 1; }, 10);
  CHECK(odd.density(10) == Rational(1, 2));
  CHECK(lower_density(IntervalSet{}, 5).density(5) == 0);
  CHECK(lower_density(IntervalSet::range(1, 100), 5).density(5) == 1);
  const auto third = lower_density([](std::uint64_t p) { return p % 3 != 0; }, 9);
  CHECK(third.running_min(9) == Rational(2, 3));
  CHECK(third.density(1) == 1);
}

TEST_CASE("interval-set density agrees with the predicate form") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    std::vector<PositionInterval> runs;
    for (int r = 0; r < 5; ++r) {
      const auto lo = 1 + below(rng, 80);
      runs.push_back({lo, lo + below(rng, 10)});
    }
    const IntervalSet s(runs);
    const auto a = lower_density(s, 100);
    const auto b = lower_density([&](std::uint64_t p) { return s.contains(p); }, 100);
    CHECK(a.counts == b.counts);
  }
}

TEST_CASE("box counts and estimates") {
  const RuleUnion full{{ZeroForcedRule(IntervalSet{}, kUnbounded)}};
  const auto rep = dim_profile(full, {5});
  REQUIRE(rep.rows.size() == 1);
  CHECK(*rep.rows[0].count == 32);
  CHECK(rep.rows[0].estimate == 1);
  const RuleUnion sparse{{free_1_3()}};
  CHECK(box_count(materialize(sparse, 4)) == 4);
  const auto row = dim_profile(sparse, {4}).rows.at(0);
  CHECK(*row.count == 4);
  CHECK(row.estimate == Rational(2, 4));
  CHECK(*row.off == Rational(1, 2));
  CHECK(log2_bracket(BigInt(8)).exact());
  CHECK(log2_bracket(BigInt(9)).lo == 3);
  CHECK(log2_bracket(BigInt(9)).hi == 4);
}

TEST_CASE("dimension profile matches materialized counts") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::uint32_t>(2 + below(rng, 12));
    const RuleUnion u = dyadfrac::testing::random_union(rng, n);
    std::vector<std::uint64_t> depths;
    for (std::uint64_t d = 1; d <= n; ++d) depths.push_back(d);
    const auto rep = dim_profile(u, depths);
    for (std::uint64_t d = 1; d <= n; ++d) {
      const auto& row = rep.rows[d - 1];
      const BigInt count = materialize(u, static_cast<std::uint32_t>(d)).size();
      CHECK(*row.count == count);
      CHECK(row.estimate == Rational(log2_bracket(count).lo, d));
    }
  }
}

TEST_CASE("OFF_n") {
  CHECK(off_n(CoverTrie(materialize(ZeroForcedRule(IntervalSet{}, kUnbounded), 6))) == 1);
  CHECK(off_n(CoverTrie(CellCover(6, 1, {37}))) == 0);
  CHECK(off_n(CoverTrie(materialize(free_1_3(), 4))) == Rational(2, 4));
}

TEST_CASE("OFF_n equals the Billingsley bound of the equal-split measure") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 60; ++t) {
    const auto n = static_cast<std::uint32_t>(1 + below(rng, 12));
    const CellCover c = dyadfrac::testing::random_cover(rng, n);
    const Rational off = off_n(CoverTrie(c));
    CHECK(off == Rational(min_branching(c), n));
    const auto bl = billingsley_lower(equal_split_measure(c), n);
    CHECK(bl.exact);
    CHECK(bl.value == off);
  }
  CHECK(billingsley_lower(equal_split_measure(CellCover(4, 1, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15})), 4).value == 1);
  CHECK(billingsley_lower(equal_split_measure(CellCover(4, 1, {5})), 4).value == 0);
}

TEST_CASE("covering sums") {
  const CellCover full = materialize(ZeroForcedRule(IntervalSet{}, kUnbounded), 5);
  const auto at_one = covering_sum_certificate(full, Rational(1));
  CHECK(at_one.decided);
  CHECK_FALSE(at_one.below_one);
  CHECK(at_one.value_lo == 1);
  const auto single = covering_sum_certificate(CellCover(5, 1, {3}), Rational(1, 2));
  CHECK(single.decided);
  CHECK(single.below_one);
}

TEST_CASE("covering certificate agrees with floating evaluation away from 1") {
  std::mt19937_64 rng(12);
  int decided = 0;
  for (int t = 0; t < 300; ++t) {
    std::vector<CoverTerm> terms;
    long double approx = 0;
    const std::uint64_t twelfths = 1 + below(rng, 11);
    const Rational beta(twelfths, 12);
    const long double b = static_cast<long double>(twelfths) / 12;
    for (int k = 0; k < 1 + static_cast<int>(below(rng, 4)); ++k) {
      const std::uint64_t c = 1 + below(rng, 1 << 12);
      const std::uint64_t d = 1 + below(rng, 40);
      terms.push_back({BigInt(c), d});
      approx += static_cast<long double>(c) * std::pow(2.0L, -static_cast<long double>(d) * b);
    }
    const auto cert = covering_sum_certificate(terms, beta);
    CHECK(cert.value_lo <= cert.value_hi);
    if (std::fabs(static_cast<double>(approx) - 1.0) < 1e-9) continue;
    ++decided;
    CHECK(cert.decided);
    CHECK(cert.below_one == (approx < 1));
  }
  CHECK(decided > 250);
}

TEST_CASE("toy Q covers at the first aligned depth") {
  const auto sched = toy_i2();
  const auto aligned = aligned_depths(sched, 2);
  REQUIRE(!aligned.empty());
  CHECK(aligned.front() == 1274);
  for (std::uint64_t j = 1; j <= 2; ++j) {
    const auto terms = q_cover(sched, j, BigInt(aligned.front()));
    REQUIRE(terms);
    const auto cert = covering_sum_certificate(*terms, sched.alphas().at(j) + Rational(1, 4));
    CHECK(cert.decided);
    CHECK(cert.below_one);
  }
}

TEST_CASE("aligned depths and density targets") {
  const auto sched = toy_i2();
  CHECK(aligned_depths(sched, 1) == std::vector<std::uint64_t>{340, 33970});
  CHECK(aligned_depths(sched, 2) == std::vector<std::uint64_t>{1274, 127387});
  for (std::uint64_t j = 1; j <= 2; ++j) {
    const auto target = density_target(sched, j, 1);
    CHECK(target.target == sched.alphas().at(j));
    REQUIRE(target.ratios.size() >= 2);
    const auto gap = [&](const Rational& x) { return x > target.target ? x - target.target : target.target - x; };
    CHECK(gap(target.ratios.back().second) <= gap(target.ratios.front().second));
    // eta sits below (gamma - 1 - D) / alpha_j, so every ratio overshoots the target.
    for (const auto& [s, ratio] : target.ratios) CHECK(ratio > target.target);
  }
}

TEST_CASE("sumset dimension evidence on the toy set") {
  const auto sched = toy_i2();
  const auto rows1 = sumset_dimension(sched, 1, {340, 33970});
  CHECK(rows1[0].member_lo == Rational(3, 5));
  CHECK(rows1[1].member_lo == Rational(9996, 16985));
  const auto rows2 = sumset_dimension(sched, 2, {340, 1274});
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(rows2[k].member_lo <= rows2[k].member_hi);
    CHECK(rows2[k].union_lo <= rows2[k].union_hi);
  }
  CHECK(rows2[1].member_lo == Rational(510, 637));
}

TEST_CASE("dimension CSV") {
  const RuleUnion sparse{{free_1_3()}};
  const std::string csv = format_dimension_csv(dim_profile(sparse, {4}));
  CHECK(csv.find("depth,count,estimate_num,estimate_den,off_num,off_den,method") == 0);
  CHECK(csv.find("\n4,4,1,2,1,2,") != std::string::npos);
}
