#include "dyadfrac/errors.hpp"
#include "dyadfrac/schedule.hpp"
#include "dyadfrac/sumset.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace dyadfrac;
using dyadfrac::testing::below;
using dyadfrac::testing::tuple_sums;

namespace {

std::vector<std::uint64_t> as_vector(const std::set<std::uint64_t>& s) { return {s.begin(), s.end()}; }

// A = {0, 1/2}: position 1 free, everything after forced.
RuleUnion zero_or_half() { return RuleUnion{{ZeroForcedRule(IntervalSet({{2, kUnbounded}}), kUnbounded)}}; }

}  // namespace

TEST_CASE("sumset examples") {
  SUBCASE("j = 1 is the cover itself") {
    const RuleUnion u{{ZeroForcedRule(IntervalSet::range(2, 3), kUnbounded)}};
    CHECK(sumset_cover_dp(u, 1, 5).base_indices == materialize(u, 5).indices());
  }
  SUBCASE("{0, 1/2} doubled") { CHECK(sumset_cover_dp(zero_or_half(), 2, 2).base_indices == std::vector<std::uint64_t>{0, 2, 4}); }
  SUBCASE("singleton") {
    CHECK(brute_sumset(CellCover(3, 1, {0}), 5).base_indices == std::vector<std::uint64_t>{0});
    CHECK(sumset_cover_dp(CellCover(3, 1, {0}), 5).base_indices == std::vector<std::uint64_t>{0});
  }
  SUBCASE("{0, 3/4} doubled") {
    CHECK(brute_sumset(CellCover(2, 1, {0, 3}), 2).base_indices == std::vector<std::uint64_t>{0, 3, 6});
    CHECK(sumset_cover_dp(CellCover(2, 1, {0, 3}), 2).base_indices == std::vector<std::uint64_t>{0, 3, 6});
  }
}

TEST_CASE("carry DP, Minkowski iteration and brute force agree with tuple sums") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 220; ++t) {
    const auto n = static_cast<std::uint32_t>(1 + below(rng, 12));
    const std::uint64_t j = 1 + below(rng, 4);
    const RuleUnion u = dyadfrac::testing::random_union(rng, n);
    const auto members = dyadfrac::testing::brute_members(u, n);
    const auto oracle = as_vector(tuple_sums(members, j));
    const CellCover cover = materialize(u, n);
    CHECK(sumset_cover_dp(u, j, n).base_indices == oracle);
    CHECK(sumset_cover_dp(cover, j).base_indices == oracle);
    CHECK(sumset_count(u, j, n) == BigInt(oracle.size()));
    if (members.size() <= 64) CHECK(brute_sumset(cover, j).base_indices == oracle);
  }
}

TEST_CASE("count sweep matches per-depth covers") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::uint32_t>(2 + below(rng, 11));
    const std::uint64_t j = 1 + below(rng, 3);
    const RuleUnion u = dyadfrac::testing::random_union(rng, n);
    std::vector<BigInt> swept;
    sumset_count_sweep(u, j, n, [&](std::uint64_t, const BigInt& c) { swept.push_back(c); });
    REQUIRE(swept.size() == n);
    for (std::uint32_t m = 1; m <= n; ++m) {
      CHECK(swept[m - 1] == BigInt(tuple_sums(dyadfrac::testing::brute_members(u, m), j).size()));
    }
  }
}

TEST_CASE("member sweep counts sums of fixed addends") {
  std::mt19937_64 rng(78);
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::uint32_t>(2 + below(rng, 10));
    const std::size_t j = 1 + below(rng, 3);
    std::vector<ZeroForcedRule> rules;
    for (std::size_t k = 0; k < j; ++k) rules.push_back(dyadfrac::testing::random_rule(rng, n));
    std::vector<const ZeroForcedRule*> addends;
    for (const auto& r : rules) addends.push_back(&r);
    std::vector<BigInt> swept;
    member_count_sweep(addends, n, [&](std::uint64_t, const BigInt& c) { swept.push_back(c); });
    for (std::uint32_t m = 1; m <= n; ++m) {
      std::set<std::uint64_t> sums{0};
      for (const auto& r : rules) {
        std::set<std::uint64_t> next;
        const CellCover c = materialize(r, m);
        for (auto s : sums)
          for (auto p : c.indices()) next.insert(s + p);
        sums.swap(next);
      }
      CHECK(swept[m - 1] == BigInt(sums.size()));
    }
  }
}

TEST_CASE("digit possibility matches enumerated sums") {
  std::mt19937_64 rng(79);
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::uint32_t>(1 + below(rng, 9));
    const std::size_t j = 1 + below(rng, 3);
    std::vector<ZeroForcedRule> rules;
    for (std::size_t k = 0; k < j; ++k) rules.push_back(dyadfrac::testing::random_rule(rng, n));
    std::vector<const ZeroForcedRule*> addends;
    for (const auto& r : rules) addends.push_back(&r);
    std::set<std::uint64_t> sums{0};
    for (const auto& r : rules) {
      std::set<std::uint64_t> next;
      const CellCover c = materialize(r, n);
      for (auto s : sums)
        for (auto p : c.indices()) next.insert(s + p);
      sums.swap(next);
    }
    const DigitPossibility dp = digit_possibility(addends, n);
    for (std::uint64_t p = 1; p <= n; ++p) {
      std::uint8_t mask = 0;
      for (auto s : sums) mask |= static_cast<std::uint8_t>(1u << ((s >> (n - p)) & 1));
      CHECK(dp.mask[p - 1] == mask);
    }
  }
}

TEST_CASE("rule multisets") {
  CHECK(rule_multisets(2, 2).size() == 3);
  CHECK(rule_multisets(3, 3).size() == 10);
  for (const auto& m : rule_multisets(4, 3)) CHECK(std::is_sorted(m.begin(), m.end()));
}

TEST_CASE("capacity runs count free addends") {
  const ZeroForcedRule a(IntervalSet::range(2, 3), kUnbounded), b(IntervalSet::range(3, 5), kUnbounded);
  std::vector<std::uint32_t> cap(7, 0);
  for (const auto& run : capacity_runs({&a, &b}, 6)) {
    for (auto p = run.lo; p <= run.hi; ++p) cap[p] = run.capacity;
  }
  CHECK(cap == std::vector<std::uint32_t>{0, 2, 1, 0, 1, 1, 2});
}

TEST_CASE("sum of toy B rules shares a zero slot") {
  const AlphaSequence alphas(std::vector<Rational>{Rational(1, 2), Rational(2, 3)});
  const auto sched = build_interval_schedule(2, alphas, 8, ScheduleMode::toy(3));
  for (std::uint64_t j = 1; j <= 2; ++j) {
    const auto rep = shared_element_check(sched, j, 2000);
    CHECK(rep.all_found());
  }
}

TEST_CASE("rescaled sumsets and the truncated E") {
  const auto one = scale_down(sumset_cover_dp(zero_or_half(), 1, 2));
  CHECK(one.points == std::vector<BigInt>{0, 2});
  CHECK(one.denominator == 4);
  const auto two = scale_down(sumset_cover_dp(zero_or_half(), 2, 2));
  std::vector<Rational> pts;
  for (const auto& p : two.points) pts.emplace_back(p, two.denominator);
  CHECK(pts == std::vector<Rational>{Rational(0), Rational(1, 4), Rational(1, 2)});
  const auto e = e_set(zero_or_half(), 2, 2);
  for (const auto& cover : {one, two}) {
    for (const auto& p : cover.points) CHECK(e.contains_point(Rational(p, cover.denominator)));
  }
  CHECK(e.covers(Rational(1, 4)));
  CHECK_FALSE(e.covers(Rational(7, 8)));
  CHECK_THROWS_AS(e_set(zero_or_half(), 0, 2), UsageError);
}

TEST_CASE("product covers") {
  CHECK((ProductCover{CellCover(3, 1, {0, 1, 2, 3}), 1}.box_count()) == 32);
  CHECK((ProductCover{CellCover(2, 1, {1}), 2}.box_count()) == 16);
  CHECK((ProductCover{CellCover(2, 1, {1}), 2}.dimension()) == 3);
}

TEST_CASE("sumset budget") {
  const RuleUnion full{{ZeroForcedRule(IntervalSet{}, kUnbounded)}};
  CHECK_THROWS_AS(brute_sumset(materialize(full, 10), 3, Budget{1000}), BudgetError);
}
