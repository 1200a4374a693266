#pragma once

#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "iwasawa/bigint.hpp"
#include "iwasawa/error.hpp"
#include "iwasawa/lambda_series.hpp"
#include "iwasawa/matrix.hpp"
#include "iwasawa/padic.hpp"
#include "iwasawa/polynomial.hpp"
#include "iwasawa/resultant.hpp"

namespace iwasawa {

/// p^μ times a monic polynomial of degree λ in t.
///
/// Coefficients are Rational in exact mode (integers, or p-integral rationals
/// after a negative twist) and PadicInt in precision mode.
template <typename R>
struct CharPoly {
  std::uint32_t p;
  int mu;
  Poly<R> monic;

  int lambda() const { return monic.degree(); }
  friend bool operator==(const CharPoly&, const CharPoly&) = default;
};

using ExactCharPoly = CharPoly<Rational>;
using PadicCharPoly = CharPoly<PadicInt>;

inline ExactCharPoly make_exact_char_poly(std::uint32_t p, int mu, const std::vector<Rational>& coeffs) {
  require(is_prime(p), ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  require(mu >= 0, ErrorCode::InvalidArgument, "mu must be >= 0");
  Poly<Rational> f(std::vector<Rational>(coeffs), Rational(0));
  require(f.is_monic(), ErrorCode::InvalidArgument, "characteristic polynomial must be monic");
  return {p, mu, std::move(f)};
}

inline PadicCharPoly make_padic_char_poly(std::uint32_t p, int precision, int mu, const std::vector<BigInt>& coeffs) {
  require(mu >= 0, ErrorCode::InvalidArgument, "mu must be >= 0");
  auto f = Poly<PadicInt>::from_integers(coeffs, PadicInt::zero(p, precision));
  require(f.is_monic(), ErrorCode::InvalidArgument, "characteristic polynomial must be monic");
  return {p, mu, std::move(f)};
}

struct ModuleInvariants {
  int rank;
  int mu;
  int lambda;
  friend bool operator==(const ModuleInvariants&, const ModuleInvariants&) = default;
};

/// Λ^r ⊕ ⊕_i Λ/(p^{m_i}) ⊕ ⊕_j Λ/(P_j^{e_j}).
struct ElementaryModule {
  std::uint32_t p;
  int rank = 0;
  std::vector<int> mu_exponents;
  std::vector<std::pair<DistinguishedPoly, int>> factors;

  void validate() const {
    require(rank >= 0, ErrorCode::InvalidArgument, "rank must be >= 0");
    for (int m : mu_exponents) require(m >= 1, ErrorCode::InvalidArgument, "p-power exponents must be >= 1");
    for (const auto& [poly, e] : factors) {
      require(poly.prime() == p, ErrorCode::PrimeMismatch, "factor over a different prime");
      require(e >= 1, ErrorCode::InvalidArgument, "factor exponents must be >= 1");
    }
  }
};

inline ModuleInvariants invariants(const ElementaryModule& e) {
  e.validate();
  int lambda = 0;
  for (const auto& [poly, mult] : e.factors) lambda += mult * poly.degree();
  return {e.rank, std::accumulate(e.mu_exponents.begin(), e.mu_exponents.end(), 0), lambda};
}

namespace detail {
template <typename R>
CharPoly<R> char_poly_impl(const ElementaryModule& e, const R& proto,
                           Poly<R> (*convert)(const DistinguishedPoly&, const R&)) {
  ModuleInvariants inv = invariants(e);
  require(inv.rank == 0, ErrorCode::NotTorsion, "module has free rank " + std::to_string(inv.rank));
  Poly<R> f({ring_like(proto, 1)}, proto);
  for (const auto& [poly, mult] : e.factors) {
    const Poly<R> base = convert(poly, proto);
    for (int k = 0; k < mult; ++k) f *= base;
  }
  return {e.p, inv.mu, std::move(f)};
}
}  // namespace detail

/// Exact characteristic polynomial: p^{Σm_i}·Π P_j^{e_j}. Factors must be exact.
inline ExactCharPoly char_poly(const ElementaryModule& e) {
  return detail::char_poly_impl<Rational>(e, Rational(0), [](const DistinguishedPoly& d, const Rational&) {
    require(d.is_exact(), ErrorCode::InvalidArgument, "exact char_poly needs exact factors");
    return d.to_rational_poly();
  });
}

/// Characteristic polynomial with coefficients modulo p^M.
inline PadicCharPoly char_poly(const ElementaryModule& e, int precision) {
  return detail::char_poly_impl<PadicInt>(e, PadicInt::zero(e.p, precision),
                                          [](const DistinguishedPoly& d, const PadicInt& proto) {
                                            return d.to_padic_poly(proto.precision());
                                          });
}

struct MatrixInvariants {
  int mu;
  int lambda;
  WeierstrassForm form;
  PadicCharPoly char_poly;
};

/// Invariants of the cokernel of a square presentation matrix over Λ: the
/// determinant is prepared and its unit factor discarded.
inline MatrixInvariants invariants_from_matrix(const Matrix<LambdaElem>& a) {
  WeierstrassForm w = weierstrass_prep(det_lambda(a));
  const int reduced = w.precision - w.mu;
  PadicCharPoly f{w.distinguished.prime(), w.mu, w.distinguished.to_padic_poly(reduced)};
  return {w.mu, w.lambda(), w, std::move(f)};
}

/// κ(γ)^i as an element of the coefficient ring of `proto`.
inline PadicInt kappa_power(const Character& kappa, std::int64_t i, const PadicInt& proto) {
  require(kappa.prime() == proto.prime(), ErrorCode::PrimeMismatch, "character over a different prime");
  PadicInt k = char_power(kappa, i);
  return k.precision() > proto.precision() ? k.reduce_to(proto.precision()) : k;
}

inline Rational kappa_power(const Character& kappa, std::int64_t i, const Rational&) {
  const Rational base(kappa.exact_value());
  Rational r = 1;
  for (std::int64_t k = 0; k < (i < 0 ? -i : i); ++k) r *= base;
  return i < 0 ? Rational(1 / r) : r;
}

/// Characteristic polynomial of the twist X(κ^i):
/// κ(γ)^{iλ}·F(κ(γ)^{-i}(1+t) - 1). Only defined for μ = 0.
template <typename R>
CharPoly<R> twist_char_poly(const CharPoly<R>& f, const Character& kappa, std::int64_t i) {
  require(f.mu == 0, ErrorCode::MuNonzero, "twisting needs mu = 0, got mu = " + std::to_string(f.mu));
  require(kappa.prime() == f.p, ErrorCode::PrimeMismatch, "character over a different prime");
  const R& proto = f.monic.zero();
  const R c = kappa_power(kappa, -i, proto);
  const Poly<R> substitution({R(c - ring_like(proto, 1)), c}, proto);
  const R scale = kappa_power(kappa, i * f.lambda(), proto);
  return {f.p, 0, scale * f.monic.compose(substitution)};
}

/// ω_n(t) = (1+t)^{p^n} - 1 as a polynomial over the ring of `proto`.
template <typename R>
Poly<R> omega_poly(int n, std::uint32_t p, const R& proto) {
  require(n >= 0, ErrorCode::InvalidArgument, "level n must be >= 0");
  const Poly<R> one({ring_like(proto, 1)}, proto);
  Poly<R> acc({ring_like(proto, 1), ring_like(proto, 1)}, proto);
  for (int k = 0; k < n; ++k) {
    Poly<R> power = one;
    for (std::uint32_t j = 0; j < p; ++j) power *= acc;
    acc = std::move(power);
  }
  return acc - one;
}

/// ω_n mod F for monic F, by n successive p-th powers reduced mod F.
template <typename R>
Poly<R> omega_mod(const Poly<R>& f, int n, std::uint32_t p) {
  require(n >= 0, ErrorCode::InvalidArgument, "level n must be >= 0");
  const R& proto = f.zero();
  const Poly<R> one({ring_like(proto, 1)}, proto);
  Poly<R> acc = Poly<R>({ring_like(proto, 1), ring_like(proto, 1)}, proto).divmod_monic(f).second;
  for (int k = 0; k < n; ++k) {
    Poly<R> power = one;
    for (std::uint32_t j = 0; j < p; ++j) power = (power * acc).divmod_monic(f).second;
    acc = std::move(power);
  }
  return (acc - one).divmod_monic(f).second;
}

/// Res(F, ω_n) for the monic part F.
template <typename R>
R omega_resultant(const Poly<R>& f, int n, std::uint32_t p) {
  return resultant_monic(f, omega_mod(f, n, p));
}

enum class Finiteness { Finite, Infinite, Inconclusive };

inline std::string to_string(Finiteness f) {
  switch (f) {
    case Finiteness::Finite: return "finite";
    case Finiteness::Infinite: return "infinite";
    case Finiteness::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

/// Finiteness of X_{Γ_n}: the monic part has no root ζ-1 with ζ^{p^n} = 1,
/// i.e. Res(F, ω_n) ≠ 0. The p-power part does not affect finiteness.
inline Finiteness coinvariants_finite(const ExactCharPoly& f, int n) {
  return omega_resultant(f.monic, n, f.p) == 0 ? Finiteness::Infinite : Finiteness::Finite;
}

/// Precision-mode verdict: a nonzero residue certifies finiteness, zero at
/// precision is inconclusive.
inline Finiteness coinvariants_finite(const PadicCharPoly& f, int n) {
  PadicInt res = omega_resultant(f.monic, n, f.p);
  return res.is_zero() ? Finiteness::Inconclusive : Finiteness::Finite;
}

struct ExceptionalTwists {
  std::set<std::int64_t> exceptional;
  std::int64_t range_lo;
  std::int64_t range_hi;
  int n_max;
};

/// Twists i in [lo, hi] for which some X(κ^i)_{Γ_n}, n ≤ n_max, is infinite.
/// κ must be non-trivial; the search is bounded by the given range.
inline ExceptionalTwists exceptional_twists(const ExactCharPoly& f, const Character& kappa, std::int64_t lo,
                                            std::int64_t hi, int n_max) {
  require(!kappa.is_trivial(), ErrorCode::TrivialCharacter, "kappa(gamma) = 1");
  require(lo <= hi, ErrorCode::InvalidArgument, "empty twist range");
  require(n_max >= 0, ErrorCode::InvalidArgument, "n_max must be >= 0");
  ExceptionalTwists out{{}, lo, hi, n_max};
  for (std::int64_t i = lo; i <= hi; ++i) {
    ExactCharPoly twisted = twist_char_poly(f, kappa, i);
    for (int n = 0; n <= n_max; ++n) {
      if (coinvariants_finite(twisted, n) == Finiteness::Infinite) {
        out.exceptional.insert(i);
        break;
      }
    }
  }
  return out;
}

/// Length of the finite module X_{Γ_n}: v_p(Res(F, ω_n)) plus μ·p^n.
inline BigInt coinvariant_length(const ExactCharPoly& f, int n) {
  const Rational res = omega_resultant(f.monic, n, f.p);
  require(res != 0, ErrorCode::NotFinite, "coinvariants at level " + std::to_string(n) + " are infinite");
  return BigInt(p_valuation(res, f.p)) + BigInt(f.mu) * ipow(BigInt(f.p), static_cast<std::uint64_t>(n));
}

inline BigInt coinvariant_length(const PadicCharPoly& f, int n) {
  const PadicInt res = omega_resultant(f.monic, n, f.p);
  require(!res.is_zero(), ErrorCode::InsufficientPrecision,
          "resultant vanishes at precision " + std::to_string(res.precision()));
  return BigInt(res.valuation().value()) + BigInt(f.mu) * ipow(BigInt(f.p), static_cast<std::uint64_t>(n));
}

}  // namespace iwasawa
