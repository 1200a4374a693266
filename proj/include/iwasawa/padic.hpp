#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "iwasawa/bigint.hpp"
#include "iwasawa/error.hpp"

namespace iwasawa {

/// Valuation of an element known modulo p^M: either an exact exponent e < M,
/// or the symbolic bound "≥ M" for residues indistinguishable from zero.
class Valuation {
 public:
  static constexpr Valuation exact(int e) { return Valuation(e, false); }
  static constexpr Valuation at_least(int bound) { return Valuation(bound, true); }

  constexpr bool is_exact() const { return !at_least_; }
  constexpr bool is_at_least() const { return at_least_; }
  /// The exponent, or the precision bound when `is_at_least()`.
  constexpr int value() const { return value_; }

  constexpr bool operator==(const Valuation&) const = default;

 private:
  constexpr Valuation(int v, bool at_least) : value_(v), at_least_(at_least) {}
  int value_;
  bool at_least_;
};

inline std::ostream& operator<<(std::ostream& os, const Valuation& v) {
  return v.is_exact() ? os << v.value() : os << ">=" << v.value();
}

/// An integer known modulo p^M. Mixed-precision arithmetic keeps min(M1, M2).
class PadicInt {
 public:
  PadicInt(std::uint32_t p, int precision, const BigInt& value) : p_(p), precision_(precision) {
    require(is_prime(p), ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    require(precision >= 1, ErrorCode::InvalidArgument, "precision must be >= 1");
    modulus_ = ipow(BigInt(p), static_cast<std::uint64_t>(precision));
    residue_ = mod_floor(value, modulus_);
  }

  static PadicInt zero(std::uint32_t p, int precision) { return PadicInt(p, precision, 0); }
  static PadicInt one(std::uint32_t p, int precision) { return PadicInt(p, precision, 1); }

  std::uint32_t prime() const { return p_; }
  int precision() const { return precision_; }
  const BigInt& residue() const { return residue_; }
  const BigInt& modulus() const { return modulus_; }

  bool is_zero() const { return residue_ == 0; }
  bool is_unit() const { return residue_ % p_ != 0; }

  Valuation valuation() const {
    if (residue_ == 0) return Valuation::at_least(precision_);
    return Valuation::exact(p_valuation(residue_, p_));
  }

  /// Another element of the same ring (same p and M) with the given value.
  PadicInt like(const BigInt& value) const { return PadicInt(p_, precision_, modulus_, mod_floor(value, modulus_)); }

  /// Reduction to a coarser precision.
  PadicInt reduce_to(int precision) const {
    require(precision >= 1 && precision <= precision_, ErrorCode::InvalidArgument,
            "reduce_to needs 1 <= precision <= current precision");
    if (precision == precision_) return *this;
    BigInt mod = ipow(BigInt(p_), static_cast<std::uint64_t>(precision));
    return PadicInt(p_, precision, mod, residue_ % mod);
  }

  PadicInt operator-() const { return like(modulus_ - residue_); }

  friend PadicInt operator+(const PadicInt& x, const PadicInt& y) {
    return combine(x, y, [](const BigInt& a, const BigInt& b) { return BigInt(a + b); });
  }
  friend PadicInt operator-(const PadicInt& x, const PadicInt& y) {
    return combine(x, y, [](const BigInt& a, const BigInt& b) { return BigInt(a - b); });
  }
  friend PadicInt operator*(const PadicInt& x, const PadicInt& y) {
    return combine(x, y, [](const BigInt& a, const BigInt& b) { return BigInt(a * b); });
  }
  PadicInt& operator+=(const PadicInt& y) { return *this = *this + y; }
  PadicInt& operator-=(const PadicInt& y) { return *this = *this - y; }
  PadicInt& operator*=(const PadicInt& y) { return *this = *this * y; }

  /// Equality of residues at the common (minimum) precision.
  friend bool operator==(const PadicInt& x, const PadicInt& y) {
    check_prime(x, y);
    if (x.precision_ == y.precision_) return x.residue_ == y.residue_;
    const PadicInt& fine = x.precision_ > y.precision_ ? x : y;
    const PadicInt& coarse = x.precision_ > y.precision_ ? y : x;
    return fine.residue_ % coarse.modulus_ == coarse.residue_;
  }

  /// Multiplicative inverse; the residue must be a unit.
  PadicInt inverse() const {
    require(is_unit(), ErrorCode::NotAUnit,
            residue_.str() + " is not a unit modulo " + std::to_string(p_));
    // Fermat's little theorem gives the inverse mod p; Newton steps x <- x(2 - a x)
    // double the number of correct p-adic digits.
    BigInt p = p_;
    BigInt a_mod_p = residue_ % p;
    BigInt x = powm(a_mod_p, p - 2, p);
    if (p_ == 2) x = 1;
    for (int correct = 1; correct < precision_; correct *= 2) {
      x = mod_floor(x * (2 - residue_ * x), modulus_);
    }
    return like(x);
  }

  /// x^e for any integer e; negative exponents invert first.
  PadicInt pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    return like(powm(residue_, BigInt(e), modulus_));
  }

  std::string str() const { return residue_.str(); }

 private:
  PadicInt(std::uint32_t p, int precision, BigInt modulus, BigInt residue)
      : p_(p), precision_(precision), modulus_(std::move(modulus)), residue_(std::move(residue)) {}

  static void check_prime(const PadicInt& x, const PadicInt& y) {
    require(x.p_ == y.p_, ErrorCode::PrimeMismatch,
            "p=" + std::to_string(x.p_) + " vs p=" + std::to_string(y.p_));
  }

  template <typename Op>
  static PadicInt combine(const PadicInt& x, const PadicInt& y, Op op) {
    check_prime(x, y);
    const PadicInt& target = x.precision_ <= y.precision_ ? x : y;
    return PadicInt(x.p_, target.precision_, target.modulus_, mod_floor(op(x.residue_, y.residue_), target.modulus_));
  }

  std::uint32_t p_;
  int precision_;
  BigInt modulus_;
  BigInt residue_;
};

inline std::ostream& operator<<(std::ostream& os, const PadicInt& x) {
  return os << x.residue() << " (mod " << x.prime() << "^" << x.precision() << ")";
}

/// The "q" of a principal-unit character: p for odd p, 4 for p = 2.
inline int principal_unit_depth(std::uint32_t p) { return p == 2 ? 2 : 1; }

/// A character of Γ into 1 + qZ_p, recorded by its value on the fixed generator γ.
///
/// The value is stored as a residue in [0, p^M). Exact-mode twisting reads
/// that residue as the integer κ(γ) itself.
class Character {
 public:
  Character(std::uint32_t p, int precision, const BigInt& kappa_gamma) : value_(p, precision, kappa_gamma) {
    const int depth = principal_unit_depth(p);
    require(precision >= depth, ErrorCode::InvalidCharacter,
            "precision too small to certify a principal unit");
    Valuation v = (value_ - value_.like(1)).valuation();
    require(v.value() >= depth, ErrorCode::InvalidCharacter,
            "kappa(gamma)=" + value_.str() + " is not congruent to 1 mod " + (p == 2 ? std::string("4") : std::to_string(p)));
  }

  std::uint32_t prime() const { return value_.prime(); }
  int precision() const { return value_.precision(); }
  const PadicInt& value() const { return value_; }
  /// κ(γ) as an exact integer (the canonical residue).
  const BigInt& exact_value() const { return value_.residue(); }
  bool is_trivial() const { return value_.residue() == 1; }

 private:
  PadicInt value_;
};

/// κ(γ)^i modulo p^M.
inline PadicInt char_power(const Character& kappa, std::int64_t i) { return kappa.value().pow(i); }

}  // namespace iwasawa
