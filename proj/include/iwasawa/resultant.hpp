#pragma once

#include <cstddef>
#include <vector>

#include "iwasawa/bigint.hpp"
#include "iwasawa/matrix.hpp"
#include "iwasawa/padic.hpp"
#include "iwasawa/polynomial.hpp"

namespace iwasawa {

/// Sylvester matrix of f (degree m) and g (degree n): n shifted rows of f
/// followed by m shifted rows of g, coefficients highest degree first.
template <typename R>
Matrix<R> sylvester_matrix(const Poly<R>& f, const Poly<R>& g) {
  const std::size_t m = static_cast<std::size_t>(f.degree());
  const std::size_t n = static_cast<std::size_t>(g.degree());
  Matrix<R> s(m + n, m + n, f.zero());
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t k = 0; k <= m; ++k) s(row, row + k) = f.coeff(m - k);
  }
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t k = 0; k <= n; ++k) s(n + row, row + k) = g.coeff(n - k);
  }
  return s;
}

/// Res(f, g) = lc(f)^deg g * prod over roots a of f of g(a), as the Sylvester
/// determinant. Exact for BigInt and Rational coefficients.
template <typename R>
R resultant(const Poly<R>& f, const Poly<R>& g) {
  if (f.is_zero() || g.is_zero()) return f.zero();
  return bareiss_det(sylvester_matrix(f, g));
}

/// Over Z/p^M the resultant is computed from integer lifts: it is a polynomial
/// in the coefficients, so reduction commutes with it. A zero result only
/// means "zero at precision".
inline PadicInt resultant(const Poly<PadicInt>& f, const Poly<PadicInt>& g) {
  const PadicInt& proto = f.zero().precision() <= g.zero().precision() ? f.zero() : g.zero();
  auto lift = [](const Poly<PadicInt>& x) {
    std::vector<BigInt> c;
    for (const auto& a : x.coeffs()) c.push_back(a.residue());
    return Poly<BigInt>(std::vector<BigInt>(c), BigInt(0));
  };
  Poly<BigInt> fl = lift(f);
  Poly<BigInt> gl = lift(g);
  return proto.like(resultant(fl, gl));
}

/// Matrix of multiplication by g on R[t]/(f) in the basis 1, t, ..., t^{d-1}
/// (column j holds t^j·g mod f). f must be monic.
template <typename R>
Matrix<R> multiplication_matrix(const Poly<R>& f, const Poly<R>& g) {
  require(f.is_monic(), ErrorCode::InvalidArgument, "modulus must be monic");
  const std::size_t d = static_cast<std::size_t>(f.degree());
  Matrix<R> m(d, d, f.zero());
  Poly<R> col = g.divmod_monic(f).second;
  const Poly<R> t = Poly<R>::monomial(ring_like(f.zero(), 1), 1);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) m(i, j) = col.coeff(i);
    col = (col * t).divmod_monic(f).second;
  }
  return m;
}

/// Res(f, g) for monic f as the norm det(g(C_f)) = prod over roots a of f of
/// g(a). Agrees with the Sylvester determinant but needs only a deg f square
/// determinant.
template <typename R>
R resultant_monic(const Poly<R>& f, const Poly<R>& g) {
  if (f.degree() == 0) return ring_like(f.zero(), 1);
  return bareiss_det(multiplication_matrix(f, g));
}

inline PadicInt resultant_monic(const Poly<PadicInt>& f, const Poly<PadicInt>& g) {
  if (f.degree() == 0) return f.zero().like(1);
  const Matrix<PadicInt> m = multiplication_matrix(f, g);
  Matrix<BigInt> lifted(m.rows(), m.cols(), BigInt(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) lifted(i, j) = m(i, j).residue();
  }
  return f.zero().like(bareiss_det(lifted));
}

}  // namespace iwasawa
