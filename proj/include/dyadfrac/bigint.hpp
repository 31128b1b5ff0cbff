#pragma once

// Exact integer and rational arithmetic shared by every module.

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dyadfrac {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

BigInt pow2(std::uint64_t e);

/// Number of significant bits; bit_length(0) == 0.
std::uint64_t bit_length(const BigInt& x);

bool is_pow2(const BigInt& x);

BigInt ipow(const BigInt& base, std::uint64_t e);

/// floor(x^(1/k)) for x >= 0.
BigInt iroot(const BigInt& x, std::uint64_t k);

BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt ceil_div(const BigInt& a, const BigInt& b);

BigInt lcm_upto(std::uint64_t n);

/// Parses "a/b", "a" or "0.75"-free integer forms. Throws UsageError on junk.
Rational parse_rational(std::string_view text);
std::vector<Rational> parse_rational_list(std::string_view text);

std::string to_string(const BigInt& x);
/// Rationals always render as "num/den" (den 1 included) so the output stays exact.
std::string to_string(const Rational& q);

inline BigInt numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denom(const Rational& q) { return boost::multiprecision::denominator(q); }

std::uint64_t to_u64(const BigInt& x);

}  // namespace dyadfrac
