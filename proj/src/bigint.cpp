#include "dyadfrac/bigint.hpp"

#include "dyadfrac/budget.hpp"
#include "dyadfrac/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <limits>

namespace dyadfrac {

BigInt pow2(std::uint64_t e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

std::uint64_t bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.backend().data(), 2);
}

bool is_pow2(const BigInt& x) {
  if (x <= 0) return false;
  return mpz_popcount(x.backend().data()) == 1;
}

BigInt ipow(const BigInt& base, std::uint64_t e) {
  BigInt r;
  mpz_pow_ui(r.backend().data(), base.backend().data(), e);
  return r;
}

BigInt iroot(const BigInt& x, std::uint64_t k) {
  BigInt r;
  mpz_root(r.backend().data(), x.backend().data(), k);
  return r;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_q(r.backend().data(), a.backend().data(), b.backend().data());
  return r;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_cdiv_q(r.backend().data(), a.backend().data(), b.backend().data());
  return r;
}

BigInt lcm_upto(std::uint64_t n) {
  BigInt r = 1;
  for (std::uint64_t k = 2; k <= n; ++k) r = boost::multiprecision::lcm(r, BigInt(k));
  return r;
}

namespace {

BigInt parse_int(std::string_view s, std::string_view whole) {
  if (s.empty()) throw UsageError("malformed rational '" + std::string(whole) + "'");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw UsageError("malformed rational '" + std::string(whole) + "'");
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') throw UsageError("malformed rational '" + std::string(whole) + "'");
  }
  return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text, text));
  BigInt num = parse_int(trim(text.substr(0, slash)), text);
  BigInt den = parse_int(trim(text.substr(slash + 1)), text);
  if (den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    out.push_back(parse_rational(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string to_string(const BigInt& x) { return x.str(); }

std::string to_string(const Rational& q) { return numer(q).str() + "/" + denom(q).str(); }

std::uint64_t to_u64(const BigInt& x) {
  if (x < 0 || x > std::numeric_limits<std::uint64_t>::max()) {
    throw UsageError("integer " + x.str() + " does not fit in 64 bits");
  }
  return x.convert_to<std::uint64_t>();
}

Budget Budget::from_env() {
  Budget b;
  if (const char* env = std::getenv(kBudgetEnvVar)) {
    std::uint64_t v = 0;
    std::string_view sv(env);
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc() || ptr != sv.data() + sv.size() || v == 0) {
      throw UsageError(std::string(kBudgetEnvVar) + " must be a positive integer");
    }
    b.max_cells = v;
  }
  return b;
}

void Budget::require(std::uint64_t requested, const std::string& what) const {
  if (requested > max_cells) {
    throw BudgetError(what + " needs " + std::to_string(requested) + " cells, over the cell budget of " +
                      std::to_string(max_cells) + " (--budget-cells / " + kBudgetEnvVar + ")");
  }
}

}  // namespace dyadfrac
