#include "dyadfrac/errors.hpp"
#include "dyadfrac/measures.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace dyadfrac;
using dyadfrac::testing::below;

namespace {

CellCover full_cover(std::uint32_t n) { return materialize(ZeroForcedRule(IntervalSet{}, kUnbounded), n); }

Rational rpow(const Rational& x, std::uint64_t e) {
  Rational out = 1;
  for (std::uint64_t k = 0; k < e; ++k) out *= x;
  return out;
}

IntervalSchedule toy_i2() {
  const AlphaSequence alphas(std::vector<Rational>{Rational(1, 2), Rational(2, 3)});
  return build_interval_schedule(2, alphas, 8, ScheduleMode::toy(3));
}

}  // namespace

TEST_CASE("dyadic mass arithmetic matches rationals") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    const DyadicMass a = DyadicMass{BigInt(below(rng, 1000)), below(rng, 30)}.normalized();
    const DyadicMass b = DyadicMass{BigInt(below(rng, 1000)), below(rng, 30)}.normalized();
    CHECK((a + b).as_rational() == a.as_rational() + b.as_rational());
    CHECK((a * b).as_rational() == a.as_rational() * b.as_rational());
    CHECK((a < b) == (a.as_rational() < b.as_rational()));
    CHECK((a == b) == (a.as_rational() == b.as_rational()));
    CHECK(a.half().as_rational() == a.as_rational() / 2);
  }
}

TEST_CASE("equal-split masses") {
  const auto full = equal_split_measure(full_cover(5));
  for (const auto& m : full.level_masses(5)) CHECK(m == DyadicMass::pow2_inverse(5));
  const auto path = equal_split_measure(CellCover(5, 1, {9}));
  for (std::uint32_t d = 0; d <= 5; ++d) CHECK(path.level_masses(d).front() == DyadicMass::one());
  const auto sparse = equal_split_measure(materialize(ZeroForcedRule::from_free(IntervalSet({{1, 1}, {3, 3}}), 4), 4));
  for (const auto& m : sparse.level_masses(4)) CHECK(m.as_rational() == Rational(1, 4));
  CHECK(sparse.check_additivity().empty());
  CHECK(sparse.mass(4, 1).is_zero());
}

TEST_CASE("equal-split measures are additive on random tries") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 60; ++t) {
    const auto mu = equal_split_measure(dyadfrac::testing::random_cover(rng, static_cast<std::uint32_t>(1 + below(rng, 12))));
    CHECK(mu.check_additivity().empty());
  }
}

TEST_CASE("mu^i on the toy schedule") {
  const auto sched = toy_i2();
  // Period k = 0 forces nothing, so B^2_1 is full below gamma_3 = 40.
  REQUIRE(sched.gamma(3) == 40);
  const auto mu = mu_i_measure(sched, 16);
  CHECK(mu.check_additivity().empty());
  for (std::uint32_t n = 1; n <= 16; ++n) {
    for (const auto& m : mu.level_masses(n)) CHECK(m == DyadicMass::pow2_inverse(n));
  }
  // B^2_2 forces slot (1, 1) of period 1, which is [40, 68].
  const RuleMeasure implicit{b_rule(2, sched, 400)};
  CHECK(implicit.cell_mass(39) == DyadicMass::pow2_inverse(39));
  CHECK(implicit.cell_mass(68) == DyadicMass::pow2_inverse(39));
  CHECK(implicit.cell_mass(70) == DyadicMass::pow2_inverse(41));
}

TEST_CASE("masses do not split inside a forcing interval") {
  const ZeroForcedRule rule(IntervalSet::range(4, 7), kUnbounded);
  const auto mu = equal_split_measure(materialize(rule, 10));
  for (std::uint32_t n = 4; n <= 7; ++n) {
    CHECK(mu.level_masses(n).size() == mu.level_masses(3).size());
    CHECK(mu.level_masses(n).front() == DyadicMass::pow2_inverse(3));
  }
  const RuleMeasure implicit{rule};
  for (std::uint32_t n = 1; n <= 10; ++n) CHECK(implicit.cell_mass(n) == mu.level_masses(n).front());
}

TEST_CASE("block products") {
  const auto one = equal_split_measure(CellCover(3, 1, {0, 1, 5}));
  const auto same = block_product_measure({one}, {3}, 3);
  for (std::uint32_t d = 0; d <= 3; ++d) {
    CHECK(same.trie().level(d) == one.trie().level(d));
    CHECK(same.level_masses(d) == one.level_masses(d));
  }
  const auto u = equal_split_measure(full_cover(2));
  const auto prod = block_product_measure({u, u}, {2, 2}, 4);
  for (const auto& m : prod.level_masses(4)) CHECK(m.as_rational() == Rational(1, 16));
  CHECK(prod.check_additivity().empty());

  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto a = equal_split_measure(dyadfrac::testing::random_cover(rng, 3));
    const auto b = equal_split_measure(dyadfrac::testing::random_cover(rng, 4));
    const auto p = block_product_measure({a, b}, {3, 4}, 7);
    CHECK(p.check_additivity().empty());
    for (std::size_t k = 0; k < p.trie().level(7).size(); ++k) {
      const auto idx = p.trie().level(7)[k];
      CHECK(p.level_masses(7)[k] == a.mass(3, idx >> 4) * b.mass(4, idx & 15));
    }
  }
}

TEST_CASE("mass_within is the exact comparison") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 1000; ++t) {
    const DyadicMass m = DyadicMass{BigInt(1 + below(rng, 64)), below(rng, 24)}.normalized();
    const std::uint64_t n = below(rng, 20);
    const std::uint64_t b = 1 + below(rng, 5);
    const Rational delta(below(rng, b) + 1, b);
    const Rational c(1 + below(rng, 9), 1 + below(rng, 9));
    const std::uint64_t a = to_u64(numer(delta)), bb = to_u64(denom(delta));
    // m <= c 2^(-n delta)  <=>  m^b 2^(n a) <= c^b
    const bool oracle = rpow(m.as_rational(), bb) * Rational(pow2(n * a)) <= rpow(c, bb);
    CHECK(mass_within(m, n, delta, c) == oracle);
  }
}

TEST_CASE("step functions") {
  const StepFunction f({{3, Rational(1)}, {10, Rational(1, 2)}});
  CHECK_FALSE(f.at(2));
  CHECK(*f.at(3) == 1);
  CHECK(*f.at(9) == 1);
  CHECK(*f.at(50) == Rational(1, 2));
  const auto inv = StepFunction::inverse_s(toy_i2());
  CHECK(*inv.at(3) == 1);
  CHECK(*inv.at(13) == Rational(1, 2));
  CHECK(*inv.at(40) == Rational(1, 3));
}

TEST_CASE("mass bound sweeps") {
  SUBCASE("uniform with delta 1") {
    const auto rep = verify_mass_bound(equal_split_measure(full_cover(8)), Rational(1), StepFunction::constant(1), "const");
    CHECK(rep.all_pass());
    CHECK(rep.sup_ratio_nonincreasing());
  }
  SUBCASE("a point mass fails every bound") {
    const auto rep = verify_mass_bound(equal_split_measure(CellCover(8, 1, {3})), Rational(1, 2), StepFunction::constant(1), "const");
    for (const auto& row : rep.rows) CHECK(row.pass == (row.depth == 0));
    CHECK_FALSE(rep.holds_from());
  }
  SUBCASE("toy B^2_1 with delta alpha_1 and the 1/s shape") {
    const auto sched = toy_i2();
    const RuleMeasure mu{b_rule(1, sched, 1274)};
    const auto rep = verify_mass_bound(mu, Rational(1, 2), StepFunction::inverse_s(sched), "1/s", 3, 1274);
    CHECK(rep.all_pass());
    CHECK(*rep.holds_from() == 3);
  }
  SUBCASE("delta outside (0, 1]") {
    CHECK_THROWS_AS(verify_mass_bound(equal_split_measure(full_cover(2)), Rational(3, 2), StepFunction::constant(1), "c"),
                    UsageError);
  }
}

TEST_CASE("rectangle bounds") {
  const auto uniform = equal_split_measure(full_cover(6));
  CHECK(rectangle_product_bound(uniform, 1, Rational(1), StepFunction::constant(1), 5000, 1).all_pass());
  const auto point = equal_split_measure(CellCover(6, 1, {7}));
  CHECK_FALSE(rectangle_product_bound(point, 1, Rational(1, 2), StepFunction::constant(1), 5000, 1).all_pass());
  const auto mu = mu_i_measure(toy_i2(), 16);
  const auto rc = rectangle_product_bound(mu, 1, Rational(1, 2), StepFunction::inverse_s(toy_i2()), 2000, 9);
  CHECK(rc.sampled > 0);
  CHECK(rc.all_pass());
}

TEST_CASE("measure serialization") {
  const std::string text = format_measure(equal_split_measure(CellCover(1, 1, {0, 1})));
  CHECK(text == "# depth index mass_num log2_den\n0 0 1 0\n1 0 1 1\n1 1 1 1\n");
  const auto rep = verify_mass_bound(equal_split_measure(full_cover(2)), Rational(1), StepFunction::constant(1), "const");
  const std::string csv = format_mass_report(rep);
  CHECK(csv.find("depth,sup_num,sup_den,witness_index,verdict\n") == 0);
  CHECK(csv.find("\n2,1,4,0,pass\n") != std::string::npos);
}
