#include "dyadfrac/bigint.hpp"
#include "dyadfrac/cover_io.hpp"
#include "dyadfrac/dyadic.hpp"
#include "dyadfrac/errors.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>

using namespace dyadfrac;
using dyadfrac::testing::below;

TEST_CASE("bigint helpers") {
  CHECK(pow2(70) == BigInt(1) << 70);
  CHECK(bit_length(BigInt(0)) == 0);
  CHECK(bit_length(BigInt(8)) == 4);
  CHECK(is_pow2(BigInt(64)));
  CHECK_FALSE(is_pow2(BigInt(96)));
  CHECK(iroot(BigInt(1000), 3) == 10);
  CHECK(iroot(BigInt(999), 3) == 9);
  CHECK(floor_div(BigInt(-7), BigInt(2)) == -4);
  CHECK(ceil_div(BigInt(7), BigInt(2)) == 4);
  CHECK(lcm_upto(6) == 60);
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(parse_rational_list("1/2,2/3").size() == 2);
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK_THROWS_AS(parse_rational("x"), UsageError);
}

TEST_CASE("iroot is the exact floor root") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const BigInt x = BigInt(rng()) * BigInt(rng() >> below(rng, 60));
    const std::uint64_t k = 1 + below(rng, 6);
    const BigInt r = iroot(x, k);
    CHECK(ipow(r, k) <= x);
    CHECK(ipow(r + 1, k) > x);
  }
}

TEST_CASE("digit strings") {
  const auto s = DigitString::from_bits("101");
  CHECK(s.length() == 3);
  CHECK(s.value() == 5);
  CHECK(s.digit(1));
  CHECK_FALSE(s.digit(2));
  CHECK_FALSE(s.digit(9));
  CHECK(s.as_rational() == Rational(5, 8));
  CHECK(s.resized(5).bits() == "10100");
  CHECK(s.resized(2).bits() == "10");
}

TEST_CASE("interval sets normalize and agree with a plain set") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<PositionInterval> raw;
    std::set<std::uint64_t> oracle;
    const int runs = static_cast<int>(below(rng, 6));
    for (int r = 0; r < runs; ++r) {
      const std::uint64_t lo = 1 + below(rng, 40), hi = lo + below(rng, 6);
      raw.push_back({lo, hi});
      for (auto p = lo; p <= hi; ++p) oracle.insert(p);
    }
    const IntervalSet s(raw);
    for (std::uint64_t p = 1; p <= 50; ++p) CHECK(s.contains(p) == (oracle.count(p) == 1));
    for (std::size_t k = 1; k < s.intervals().size(); ++k) {
      CHECK(s.intervals()[k].lo > s.intervals()[k - 1].hi + 1);
    }
    const std::uint64_t n = below(rng, 50);
    CHECK(s.count_upto(n) == static_cast<std::uint64_t>(std::count_if(oracle.begin(), oracle.end(),
                                                                       [&](auto p) { return p <= n; })));
    CHECK(s.complement_upto(n).count_upto(n) == n - s.count_upto(n));
  }
}

TEST_CASE("materialize: small rules") {
  const ZeroForcedRule only2(IntervalSet::range(2, 2), kUnbounded);
  CHECK(materialize(only2, 2).indices() == std::vector<std::uint64_t>{0, 2});
  CHECK(materialize(RuleUnion{}, 3).empty());
  const ZeroForcedRule none(IntervalSet{}, kUnbounded);
  CHECK(materialize(none, 4).size() == 16);
}

TEST_CASE("materialize and count_cells match brute enumeration") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 150; ++t) {
    const auto n = static_cast<std::uint32_t>(1 + below(rng, 12));
    const RuleUnion u = dyadfrac::testing::random_union(rng, n, 4);
    const auto brute = dyadfrac::testing::brute_members(u, n);
    CHECK(materialize(u, n).indices() == brute);
    CHECK(count_cells(u, n) == BigInt(brute.size()));
  }
}

TEST_CASE("halving, union and containment of covers") {
  const CellCover c(2, 1, {0, 2});
  CHECK(halve_cover(c).indices() == std::vector<std::uint64_t>{0, 2});
  CHECK(halve_cover(c).depth() == 3);
  const CellCover full = materialize(ZeroForcedRule(IntervalSet{}, kUnbounded), 3);
  const CellCover half = halve_cover(full);
  CHECK(half.depth() == 4);
  CHECK(half.indices() == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(halve_cover(CellCover(3, 1, {})).empty());
  const CellCover u = cover_union(CellCover(2, 1, {0, 2}), CellCover(2, 1, {1}));
  CHECK(u.indices() == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(cover_contains(u, CellCover(2, 1, {0, 2})));
  CHECK_FALSE(cover_contains(CellCover(2, 1, {0}), CellCover(2, 1, {1})));
}

TEST_CASE("coarsening a cover keeps every ancestor once") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto n = static_cast<std::uint32_t>(2 + below(rng, 10));
    const CellCover c = dyadfrac::testing::random_cover(rng, n);
    const auto d = static_cast<std::uint32_t>(below(rng, n));
    std::set<std::uint64_t> oracle;
    for (auto k : c.indices()) oracle.insert(k >> (n - d));
    CHECK(c.coarsened(d).indices() == std::vector<std::uint64_t>(oracle.begin(), oracle.end()));
  }
}

TEST_CASE("cover trie levels and children") {
  const CoverTrie trie(CellCover(3, 1, {0, 1, 5}));
  CHECK(trie.depth() == 3);
  CHECK(trie.level(0) == std::vector<std::uint64_t>{0});
  CHECK(trie.level(1) == std::vector<std::uint64_t>{0, 1});
  CHECK(trie.level(2) == std::vector<std::uint64_t>{0, 2});
  const auto [b, e] = trie.children(2, 0);
  CHECK(e - b == 2);
}

TEST_CASE("cover serialization round trips") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const CellCover c = dyadfrac::testing::random_cover(rng, static_cast<std::uint32_t>(1 + below(rng, 10)));
    CHECK(read_cover_text(write_cover_text(c)) == c);
    CHECK(read_cover_binary(write_cover_binary(c)) == c);
  }
  CHECK(read_cover_text("# note\ndepth 2 span 1\n0\n3\n").indices() == std::vector<std::uint64_t>{0, 3});
  CHECK_THROWS_AS(read_cover_binary("short"), UsageError);
}

TEST_CASE("rule files") {
  const RuleUnion u = parse_rule_union("cutoff 8\nforced 2 3\nor\ncutoff 8\nfree 1 1\n");
  REQUIRE(u.rules.size() == 2);
  CHECK(u.rules[0].is_forced(2));
  CHECK(u.rules[0].is_forced(3));
  CHECK_FALSE(u.rules[0].is_forced(4));
  CHECK(u.rules[1].free_upto(8) == IntervalSet::range(1, 1));
  CHECK(parse_rule_union(format_rule_union(u)).rules.size() == 2);
  CHECK_THROWS_AS(parse_rule_union("forced 0 3\n"), UsageError);
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = std::filesystem::temp_directory_path() / "dyadfrac_io_test";
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "a.txt", "first");
  write_file_atomic(dir / "a.txt", "second");
  CHECK(read_file(dir / "a.txt") == "second");
  std::filesystem::remove_all(dir);
}
