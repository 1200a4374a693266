#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "iwasawa/bigint.hpp"
#include "iwasawa/error.hpp"
#include "iwasawa/padic.hpp"

namespace iwasawa {

// Coefficient rings are plain value types (BigInt, Rational, PadicInt). A
// "prototype" element carries whatever context the ring needs (p and M for
// PadicInt) so constants can be built in the same ring.
template <typename R>
struct RingTraits;

template <>
struct RingTraits<BigInt> {
  static BigInt from(const BigInt&, const BigInt& v) { return v; }
  static bool is_zero(const BigInt& x) { return x == 0; }
};

template <>
struct RingTraits<Rational> {
  static Rational from(const Rational&, const BigInt& v) { return Rational(v); }
  static bool is_zero(const Rational& x) { return x == 0; }
};

template <>
struct RingTraits<PadicInt> {
  static PadicInt from(const PadicInt& proto, const BigInt& v) { return proto.like(v); }
  static bool is_zero(const PadicInt& x) { return x.is_zero(); }
};

template <typename R>
R ring_like(const R& proto, const BigInt& v) {
  return RingTraits<R>::from(proto, v);
}

template <typename R>
bool ring_is_zero(const R& x) {
  return RingTraits<R>::is_zero(x);
}

/// Dense univariate polynomial, little-endian, with trailing zeros trimmed.
template <typename R>
class Poly {
 public:
  explicit Poly(R zero) : zero_(ring_like(zero, 0)) {}
  Poly(std::vector<R> coeffs, const R& zero) : zero_(ring_like(zero, 0)), c_(std::move(coeffs)) { trim(); }

  /// Polynomial with integer coefficients lifted into the ring of `zero`.
  static Poly from_integers(const std::vector<BigInt>& coeffs, const R& zero) {
    std::vector<R> c;
    c.reserve(coeffs.size());
    for (const auto& v : coeffs) c.push_back(ring_like(zero, v));
    return Poly(std::move(c), zero);
  }

  static Poly monomial(const R& a, std::size_t k) {
    std::vector<R> c(k + 1, ring_like(a, 0));
    c[k] = a;
    return Poly(std::move(c), a);
  }

  const R& zero() const { return zero_; }
  R constant(const BigInt& v) const { return ring_like(zero_, v); }

  /// Degree, or -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<R>& coeffs() const { return c_; }
  R coeff(std::size_t i) const { return i < c_.size() ? c_[i] : zero_; }
  const R& leading() const {
    require(!c_.empty(), ErrorCode::InvalidArgument, "leading coefficient of zero polynomial");
    return c_.back();
  }
  bool is_monic() const { return !c_.empty() && ring_is_zero(R(c_.back() - constant(1))); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<R> c(std::max(a.c_.size(), b.c_.size()), a.zero_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return Poly(std::move(c), a.zero_);
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<R> c(std::max(a.c_.size(), b.c_.size()), a.zero_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return Poly(std::move(c), a.zero_);
  }
  Poly operator-() const { return Poly(zero_) - *this; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.zero_);
    std::vector<R> c(a.c_.size() + b.c_.size() - 1, a.zero_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (ring_is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(c), a.zero_);
  }
  friend Poly operator*(const R& s, const Poly& a) {
    std::vector<R> c = a.c_;
    for (auto& x : c) x = s * x;
    return Poly(std::move(c), a.zero_);
  }

  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (!(a.c_[i] == b.c_[i])) return false;
    }
    return true;
  }

  R operator()(const R& x) const {
    R acc = zero_;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  /// this(q(t)), by Horner's scheme over polynomials.
  Poly compose(const Poly& q) const {
    Poly acc(zero_);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * q + Poly({c_[i]}, zero_);
    return acc;
  }

  Poly truncated(std::size_t n) const {
    std::vector<R> c(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(std::min(n, c_.size())));
    return Poly(std::move(c), zero_);
  }

  /// Long division by a monic divisor: returns (quotient, remainder).
  std::pair<Poly, Poly> divmod_monic(const Poly& d) const {
    require(d.is_monic(), ErrorCode::InvalidArgument, "divisor must be monic");
    const std::size_t dd = static_cast<std::size_t>(d.degree());
    std::vector<R> rem = c_;
    if (rem.size() <= dd) return {Poly(zero_), *this};
    std::vector<R> quo(rem.size() - dd, zero_);
    for (std::size_t k = rem.size(); k-- > dd;) {
      const R coef = rem[k];
      quo[k - dd] = coef;
      if (ring_is_zero(coef)) continue;
      for (std::size_t j = 0; j <= dd; ++j) rem[k - dd + j] -= coef * d.c_[j];
    }
    rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(dd), rem.end());
    return {Poly(std::move(quo), zero_), Poly(std::move(rem), zero_)};
  }

 private:
  void trim() {
    while (!c_.empty() && ring_is_zero(c_.back())) c_.pop_back();
  }

  R zero_;
  std::vector<R> c_;
};

}  // namespace iwasawa
