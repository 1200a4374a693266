#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "iwasawa/error.hpp"

namespace iwasawa {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt ipow(BigInt base, std::uint64_t exp) {
  BigInt result = 1;
  while (exp != 0) {
    if (exp & 1U) result *= base;
    exp >>= 1U;
    if (exp != 0) base *= base;
  }
  return result;
}

/// Canonical residue of `x` in [0, modulus).
inline BigInt mod_floor(const BigInt& x, const BigInt& modulus) {
  BigInt r = x % modulus;
  if (r < 0) r += modulus;
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// p-adic valuation of a nonzero integer.
inline int p_valuation(BigInt x, std::uint32_t p) {
  require(x != 0, ErrorCode::InvalidArgument, "valuation of zero");
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

/// p-adic valuation of a nonzero rational.
inline int p_valuation(const Rational& x, std::uint32_t p) {
  require(x != 0, ErrorCode::InvalidArgument, "valuation of zero");
  return p_valuation(BigInt(numerator(x)), p) - p_valuation(BigInt(denominator(x)), p);
}

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::string to_string(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

}  // namespace iwasawa
