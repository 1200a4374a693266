#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwasawa/bigint.hpp"
#include "iwasawa/error.hpp"
#include "iwasawa/matrix.hpp"
#include "iwasawa/padic.hpp"
#include "iwasawa/polynomial.hpp"

namespace iwasawa {

/// An element of Z_p[[T]] known modulo (p^M, T^N).
///
/// Coefficients are stored as canonical residues in [0, p^M). Binary
/// operations combine to (min M, min N) and never extend the truncation.
class LambdaElem {
 public:
  LambdaElem(std::uint32_t p, int precision, int truncation, const std::vector<BigInt>& coeffs)
      : p_(p), m_(precision), n_(truncation) {
    require(is_prime(p), ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    require(precision >= 1, ErrorCode::InvalidArgument, "precision M must be >= 1");
    require(truncation >= 1, ErrorCode::InvalidArgument, "truncation N must be >= 1");
    modulus_ = ipow(BigInt(p), static_cast<std::uint64_t>(precision));
    c_.assign(static_cast<std::size_t>(truncation), BigInt(0));
    for (std::size_t i = 0; i < coeffs.size() && i < c_.size(); ++i) c_[i] = mod_floor(coeffs[i], modulus_);
  }

  static LambdaElem zero(std::uint32_t p, int precision, int truncation) { return {p, precision, truncation, {}}; }
  static LambdaElem constant(std::uint32_t p, int precision, int truncation, const BigInt& v) {
    return {p, precision, truncation, {v}};
  }
  /// The series T (zero when N = 1).
  static LambdaElem variable(std::uint32_t p, int precision, int truncation) {
    return {p, precision, truncation, {0, 1}};
  }

  static LambdaElem from_poly(const Poly<PadicInt>& f, int truncation) {
    std::vector<BigInt> c;
    for (const auto& a : f.coeffs()) c.push_back(a.residue());
    return {f.zero().prime(), f.zero().precision(), truncation, c};
  }

  std::uint32_t prime() const { return p_; }
  int precision() const { return m_; }
  int truncation() const { return n_; }
  const BigInt& modulus() const { return modulus_; }
  const std::vector<BigInt>& residues() const { return c_; }
  PadicInt coefficient(std::size_t i) const { return PadicInt(p_, m_, c_.at(i)); }

  bool is_zero() const {
    for (const auto& x : c_) {
      if (x != 0) return false;
    }
    return true;
  }

  /// The known coefficients as a polynomial over Z/p^M.
  Poly<PadicInt> to_poly() const {
    const PadicInt proto = PadicInt::zero(p_, m_);
    std::vector<PadicInt> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(proto.like(x));
    return Poly<PadicInt>(std::move(c), proto);
  }

  LambdaElem like(const BigInt& v) const { return LambdaElem(p_, m_, n_, modulus_, {v}); }

  LambdaElem operator-() const {
    std::vector<BigInt> c(c_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = c_[i] == 0 ? BigInt(0) : BigInt(modulus_ - c_[i]);
    return LambdaElem(p_, m_, n_, modulus_, std::move(c));
  }

  friend LambdaElem operator+(const LambdaElem& f, const LambdaElem& g) {
    auto [m, n, mod] = common(f, g);
    std::vector<BigInt> c(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = mod_floor(f.c_[i] + g.c_[i], mod);
    return LambdaElem(f.p_, m, n, mod, std::move(c));
  }
  friend LambdaElem operator-(const LambdaElem& f, const LambdaElem& g) {
    auto [m, n, mod] = common(f, g);
    std::vector<BigInt> c(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = mod_floor(f.c_[i] - g.c_[i], mod);
    return LambdaElem(f.p_, m, n, mod, std::move(c));
  }
  friend LambdaElem operator*(const LambdaElem& f, const LambdaElem& g) {
    auto [m, n, mod] = common(f, g);
    const std::size_t len = static_cast<std::size_t>(n);
    std::vector<BigInt> c(len, BigInt(0));
    for (std::size_t i = 0; i < len; ++i) {
      if (f.c_[i] == 0) continue;
      for (std::size_t j = 0; i + j < len; ++j) c[i + j] += f.c_[i] * g.c_[j];
    }
    for (auto& x : c) x = mod_floor(x, mod);
    return LambdaElem(f.p_, m, n, mod, std::move(c));
  }
  LambdaElem& operator+=(const LambdaElem& g) { return *this = *this + g; }
  LambdaElem& operator-=(const LambdaElem& g) { return *this = *this - g; }
  LambdaElem& operator*=(const LambdaElem& g) { return *this = *this * g; }

  /// Equality modulo the common (p^min M, T^min N).
  friend bool operator==(const LambdaElem& f, const LambdaElem& g) {
    auto [m, n, mod] = common(f, g);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      if (f.c_[i] % mod != g.c_[i] % mod) return false;
    }
    return true;
  }

 private:
  LambdaElem(std::uint32_t p, int m, int n, BigInt modulus, std::vector<BigInt> c)
      : p_(p), m_(m), n_(n), modulus_(std::move(modulus)), c_(std::move(c)) {
    c_.resize(static_cast<std::size_t>(n_), BigInt(0));
  }

  static std::tuple<int, int, BigInt> common(const LambdaElem& f, const LambdaElem& g) {
    require(f.p_ == g.p_, ErrorCode::PrimeMismatch,
            "p=" + std::to_string(f.p_) + " vs p=" + std::to_string(g.p_));
    const LambdaElem& coarse = f.m_ <= g.m_ ? f : g;
    return {coarse.m_, std::min(f.n_, g.n_), coarse.modulus_};
  }

  std::uint32_t p_;
  int m_;
  int n_;
  BigInt modulus_;
  std::vector<BigInt> c_;
};

template <>
struct RingTraits<LambdaElem> {
  static LambdaElem from(const LambdaElem& proto, const BigInt& v) { return proto.like(v); }
  static bool is_zero(const LambdaElem& x) { return x.is_zero(); }
};

inline LambdaElem series_add(const LambdaElem& f, const LambdaElem& g) { return f + g; }
inline LambdaElem series_mul(const LambdaElem& f, const LambdaElem& g) { return f * g; }

/// ω_n = (1+T)^{p^n} - 1, generator of the kernel of Λ → Z_p[G_n].
///
/// With `require_full_degree` the truncation must hold the leading term T^{p^n}.
inline LambdaElem omega(int n, std::uint32_t p, int precision, int truncation, bool require_full_degree = true) {
  require(n >= 0, ErrorCode::InvalidArgument, "level n must be >= 0");
  const BigInt deg = ipow(BigInt(p), static_cast<std::uint64_t>(n));
  if (require_full_degree) {
    require(deg < truncation, ErrorCode::TruncationTooShort,
            "omega_" + std::to_string(n) + " has degree " + deg.str() + " but N=" + std::to_string(truncation));
  }
  // Binomial coefficients C(p^n, k) for k < N, computed exactly.
  std::vector<BigInt> c(static_cast<std::size_t>(truncation), BigInt(0));
  BigInt binom = 1;
  for (int k = 1; k < truncation && BigInt(k) <= deg; ++k) {
    binom = binom * (deg - (k - 1)) / k;
    c[static_cast<std::size_t>(k)] = binom;
  }
  return LambdaElem(p, precision, truncation, c);
}

/// Monic polynomial whose non-leading coefficients are divisible by p.
///
/// Exact mode (no precision) keeps integer coefficients; otherwise they are
/// residues modulo p^M.
class DistinguishedPoly {
 public:
  DistinguishedPoly(std::uint32_t p, std::vector<BigInt> lower, std::optional<int> precision = std::nullopt)
      : p_(p), precision_(precision), lower_(std::move(lower)) {
    require(is_prime(p), ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    if (precision_) {
      require(*precision_ >= 1, ErrorCode::InvalidArgument, "precision must be >= 1");
      const BigInt mod = ipow(BigInt(p), static_cast<std::uint64_t>(*precision_));
      for (auto& a : lower_) a = mod_floor(a, mod);
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      require(lower_[i] % p == 0, ErrorCode::InvalidArgument,
              "coefficient " + std::to_string(i) + " = " + lower_[i].str() + " is not divisible by p");
    }
  }

  /// Builds from a full coefficient list (leading coefficient must be 1).
  static DistinguishedPoly from_coeffs(std::uint32_t p, const std::vector<BigInt>& coeffs,
                                       std::optional<int> precision = std::nullopt) {
    require(!coeffs.empty() && coeffs.back() == 1, ErrorCode::InvalidArgument, "distinguished polynomial must be monic");
    return DistinguishedPoly(p, std::vector<BigInt>(coeffs.begin(), coeffs.end() - 1), precision);
  }

  std::uint32_t prime() const { return p_; }
  int degree() const { return static_cast<int>(lower_.size()); }
  bool is_exact() const { return !precision_.has_value(); }
  std::optional<int> precision() const { return precision_; }
  const std::vector<BigInt>& lower_coeffs() const { return lower_; }

  /// All coefficients including the leading 1.
  std::vector<BigInt> coeffs() const {
    std::vector<BigInt> c = lower_;
    c.push_back(1);
    return c;
  }

  Poly<BigInt> to_integer_poly() const { return Poly<BigInt>(coeffs(), BigInt(0)); }
  Poly<Rational> to_rational_poly() const { return Poly<Rational>::from_integers(coeffs(), Rational(0)); }
  Poly<PadicInt> to_padic_poly(int precision) const {
    return Poly<PadicInt>::from_integers(coeffs(), PadicInt::zero(p_, precision));
  }

  friend bool operator==(const DistinguishedPoly&, const DistinguishedPoly&) = default;

 private:
  std::uint32_t p_;
  std::optional<int> precision_;
  std::vector<BigInt> lower_;
};

/// f = p^μ · u · P with P distinguished of degree λ and u a unit.
///
/// P and u are determined modulo p^{M-μ}; `reconstruct` multiplies back to
/// precision M.
struct WeierstrassForm {
  int mu;
  DistinguishedPoly distinguished;
  LambdaElem unit;
  int precision;   // M of the prepared series
  int truncation;  // N of the prepared series

  int lambda() const { return distinguished.degree(); }

  LambdaElem reconstruct() const {
    const std::uint32_t p = distinguished.prime();
    const int reduced = precision - mu;
    LambdaElem prod = unit * LambdaElem::from_poly(distinguished.to_padic_poly(reduced), truncation);
    const BigInt scale = ipow(BigInt(p), static_cast<std::uint64_t>(mu));
    std::vector<BigInt> c;
    for (const auto& r : prod.residues()) c.push_back(r * scale);
    return LambdaElem(p, precision, truncation, c);
  }
};

namespace detail {

/// Inverse of `a` in (Z/p^M)[T]/(P), for `a` a unit of that local ring.
inline Poly<PadicInt> inverse_mod(const Poly<PadicInt>& a, const Poly<PadicInt>& modulus) {
  const Poly<PadicInt> one({a.constant(1)}, a.zero());
  const Poly<PadicInt> two({a.constant(2)}, a.zero());
  const Poly<PadicInt> a_red = a.divmod_monic(modulus).second;
  Poly<PadicInt> v({a_red.coeff(0).inverse()}, a.zero());
  for (int iter = 0; iter < 128; ++iter) {
    Poly<PadicInt> err = (one - a_red * v).divmod_monic(modulus).second;
    if (err.is_zero()) return v;
    v = (v * (two - a_red * v)).divmod_monic(modulus).second;
  }
  fail(ErrorCode::InsufficientPrecision, "unit inversion modulo distinguished polynomial did not converge");
}

}  // namespace detail

/// Weierstrass preparation of a truncated series.
///
/// The known coefficients are read as a polynomial g of degree < N. After
/// removing p^μ, the distinguished factor P ≡ T^λ (mod p) is lifted by Newton
/// steps P ← P + (g mod P)·(g div P)^{-1} mod P, each of which doubles the
/// p-adic accuracy of the factorization. The cofactor u = g div P is then an
/// exact polynomial quotient, so p^μ·u·P reproduces f modulo (p^M, T^N).
inline WeierstrassForm weierstrass_prep(const LambdaElem& f) {
  const std::uint32_t p = f.prime();
  const int M = f.precision();
  const int N = f.truncation();

  int mu = M;
  for (const auto& r : f.residues()) {
    if (r != 0) mu = std::min(mu, p_valuation(r, p));
  }
  require(mu < M, ErrorCode::InsufficientPrecision,
          "all coefficients vanish modulo " + std::to_string(p) + "^" + std::to_string(M));

  const int reduced = M - mu;
  const BigInt scale = ipow(BigInt(p), static_cast<std::uint64_t>(mu));
  std::vector<BigInt> g_coeffs;
  for (const auto& r : f.residues()) g_coeffs.push_back(BigInt(r / scale));

  int lambda = -1;
  for (std::size_t i = 0; i < g_coeffs.size(); ++i) {
    if (g_coeffs[i] % p != 0) {
      lambda = static_cast<int>(i);
      break;
    }
  }
  require(lambda >= 0, ErrorCode::TruncationTooShort, "no unit coefficient below degree N");

  const PadicInt proto = PadicInt::zero(p, reduced);
  const Poly<PadicInt> g = Poly<PadicInt>::from_integers(g_coeffs, proto);
  Poly<PadicInt> dist = Poly<PadicInt>::monomial(proto.like(1), static_cast<std::size_t>(lambda));

  Poly<PadicInt> quotient(proto);
  bool converged = false;
  for (int iter = 0; iter < 64; ++iter) {
    auto [q, rem] = g.divmod_monic(dist);
    quotient = std::move(q);
    if (rem.is_zero()) {
      converged = true;
      break;
    }
    dist += (rem * detail::inverse_mod(quotient, dist)).divmod_monic(dist).second;
  }
  require(converged, ErrorCode::InsufficientPrecision, "Hensel lifting did not converge");

  std::vector<BigInt> lower;
  for (int i = 0; i < lambda; ++i) lower.push_back(dist.coeff(static_cast<std::size_t>(i)).residue());
  return WeierstrassForm{mu, DistinguishedPoly(p, std::move(lower), reduced), LambdaElem::from_poly(quotient, N), M, N};
}

/// (μ, λ) of a series, read off its Weierstrass form.
inline std::pair<int, int> mu_lambda(const LambdaElem& f) {
  WeierstrassForm w = weierstrass_prep(f);
  return {w.mu, w.lambda()};
}

/// Determinant of a square matrix over Λ modulo (p^M, T^N). Cofactor expansion
/// up to 4x4, the division-free Berkowitz recursion beyond.
inline LambdaElem det_lambda(const Matrix<LambdaElem>& a) {
  require(a.is_square() && a.rows() >= 1, ErrorCode::DimensionMismatch, "det_lambda needs a nonempty square matrix");
  const LambdaElem& first = a(0, 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const LambdaElem& e = a(i, j);
      require(e.prime() == first.prime(), ErrorCode::PrimeMismatch, "matrix entries over different primes");
      require(e.precision() == first.precision() && e.truncation() == first.truncation(),
              ErrorCode::DimensionMismatch, "matrix entries must share (M, N)");
    }
  }
  return a.rows() <= 4 ? cofactor_det(a) : berkowitz_det(a);
}

}  // namespace iwasawa
