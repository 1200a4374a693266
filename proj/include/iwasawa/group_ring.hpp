#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "iwasawa/bigint.hpp"
#include "iwasawa/error.hpp"
#include "iwasawa/lambda_series.hpp"

namespace iwasawa {

// G_n is modelled as Z/p^n with generator γ̄ = 1; basis index j stands for
// γ̄^j. The preimages of j under G_{n+1} → G_n are j + c·p^n, 0 ≤ c < p.

/// Shape (p, n, m) of Λ_{n,m} = (Z/p^m)[G_n].
struct GroupRingShape {
  std::uint32_t p;
  int n;
  int m;

  std::size_t order() const { return static_cast<std::size_t>(ipow(BigInt(p), static_cast<std::uint64_t>(n))); }
  BigInt modulus() const { return ipow(BigInt(p), static_cast<std::uint64_t>(m)); }

  void validate() const {
    require(is_prime(p), ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    require(n >= 0, ErrorCode::InvalidArgument, "level n must be >= 0");
    require(m >= 1, ErrorCode::InvalidArgument, "exponent m must be >= 1");
  }

  friend bool operator==(const GroupRingShape&, const GroupRingShape&) = default;
};

inline std::string describe(const GroupRingShape& s) {
  return "(p=" + std::to_string(s.p) + ", n=" + std::to_string(s.n) + ", m=" + std::to_string(s.m) + ")";
}

namespace detail {

/// Coefficient vector indexed by G_n with entries in Z/p^m.
class CyclicCoeffs {
 public:
  CyclicCoeffs(GroupRingShape shape, std::vector<BigInt> coeffs) : shape_(shape) {
    shape_.validate();
    modulus_ = shape_.modulus();
    require(coeffs.size() == shape_.order(), ErrorCode::DimensionMismatch,
            "expected " + std::to_string(shape_.order()) + " coefficients, got " + std::to_string(coeffs.size()));
    c_ = std::move(coeffs);
    for (auto& x : c_) x = mod_floor(x, modulus_);
  }

  const GroupRingShape& shape() const { return shape_; }
  std::uint32_t prime() const { return shape_.p; }
  int level() const { return shape_.n; }
  int exponent() const { return shape_.m; }
  std::size_t order() const { return c_.size(); }
  const BigInt& modulus() const { return modulus_; }
  const std::vector<BigInt>& coeffs() const { return c_; }
  const BigInt& operator[](std::size_t j) const { return c_[j]; }

 protected:
  void require_same_shape(const CyclicCoeffs& other) const {
    require(shape_ == other.shape_, ErrorCode::LevelMismatch, describe(shape_) + " vs " + describe(other.shape_));
  }

  GroupRingShape shape_;
  BigInt modulus_;
  std::vector<BigInt> c_;
};

}  // namespace detail

/// An element Σ_j a_j γ̄^j of Λ_{n,m}.
class GroupRingElem : public detail::CyclicCoeffs {
 public:
  GroupRingElem(GroupRingShape shape, std::vector<BigInt> coeffs) : CyclicCoeffs(shape, std::move(coeffs)) {}

  static GroupRingElem zero(GroupRingShape shape) { return {shape, std::vector<BigInt>(shape.order(), BigInt(0))}; }
  /// The basis element γ̄^j.
  static GroupRingElem delta(GroupRingShape shape, std::size_t j) {
    GroupRingElem x = zero(shape);
    x.c_.at(j) = 1;
    return x;
  }
  static GroupRingElem identity(GroupRingShape shape) { return delta(shape, 0); }

  friend GroupRingElem operator+(const GroupRingElem& x, const GroupRingElem& y) {
    x.require_same_shape(y);
    std::vector<BigInt> c(x.order());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = x.c_[j] + y.c_[j];
    return {x.shape_, std::move(c)};
  }
  friend GroupRingElem operator-(const GroupRingElem& x, const GroupRingElem& y) {
    x.require_same_shape(y);
    std::vector<BigInt> c(x.order());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = x.c_[j] - y.c_[j];
    return {x.shape_, std::move(c)};
  }
  /// Convolution over the cyclic group.
  friend GroupRingElem operator*(const GroupRingElem& x, const GroupRingElem& y) {
    x.require_same_shape(y);
    const std::size_t q = x.order();
    std::vector<BigInt> c(q, BigInt(0));
    for (std::size_t i = 0; i < q; ++i) {
      if (x.c_[i] == 0) continue;
      for (std::size_t j = 0; j < q; ++j) c[(i + j) % q] += x.c_[i] * y.c_[j];
    }
    return {x.shape_, std::move(c)};
  }
  friend GroupRingElem operator*(const BigInt& s, const GroupRingElem& x) {
    std::vector<BigInt> c = x.c_;
    for (auto& v : c) v *= s;
    return {x.shape_, std::move(c)};
  }
  friend bool operator==(const GroupRingElem& x, const GroupRingElem& y) {
    return x.shape_ == y.shape_ && x.c_ == y.c_;
  }
};

inline GroupRingElem gr_add(const GroupRingElem& x, const GroupRingElem& y) { return x + y; }
inline GroupRingElem gr_mul(const GroupRingElem& x, const GroupRingElem& y) { return x * y; }

/// An element of p^{-exponent}Z/Z, stored as its numerator modulo p^exponent.
struct TorsionValue {
  std::uint32_t p;
  int exponent;
  BigInt numerator;

  /// The same value expressed with denominator p^m, as a residue mod p^m.
  BigInt rescaled_to(int m) const {
    const BigInt mod = ipow(BigInt(p), static_cast<std::uint64_t>(m));
    if (exponent <= m) return mod_floor(numerator * ipow(BigInt(p), static_cast<std::uint64_t>(m - exponent)), mod);
    const BigInt drop = ipow(BigInt(p), static_cast<std::uint64_t>(exponent - m));
    require(numerator % drop == 0, ErrorCode::InvalidArgument,
            "value " + numerator.str() + "/p^" + std::to_string(exponent) + " is not killed by p^" + std::to_string(m));
    return mod_floor(numerator / drop, mod);
  }
};

/// A character χ: Λ_{n,m} → p^{-m}Z/Z, stored through [p^m] as the values
/// χ(γ̄^j) ∈ Z/p^m.
class DualGroupRingElem : public detail::CyclicCoeffs {
 public:
  DualGroupRingElem(GroupRingShape shape, std::vector<BigInt> values) : CyclicCoeffs(shape, std::move(values)) {}

  static DualGroupRingElem zero(GroupRingShape shape) { return {shape, std::vector<BigInt>(shape.order(), BigInt(0))}; }
  /// The functional taking γ̄^j to p^{-m} and other basis elements to 0.
  static DualGroupRingElem delta(GroupRingShape shape, std::size_t j) {
    DualGroupRingElem x = zero(shape);
    x.c_.at(j) = 1;
    return x;
  }

  /// χ(x) = Σ_g x_g χ(g) in p^{-m}Z/Z.
  TorsionValue operator()(const GroupRingElem& x) const {
    require(x.shape() == shape_, ErrorCode::LevelMismatch, describe(x.shape()) + " vs " + describe(shape_));
    BigInt acc = 0;
    for (std::size_t j = 0; j < order(); ++j) acc += x[j] * c_[j];
    return {shape_.p, shape_.m, mod_floor(acc, modulus_)};
  }

  /// Γ-action (hχ)(x) = χ(h^{-1}x), extended linearly to h ∈ Λ_{n,m}.
  DualGroupRingElem acted_on_by(const GroupRingElem& h) const {
    require(h.shape() == shape_, ErrorCode::LevelMismatch, describe(h.shape()) + " vs " + describe(shape_));
    const std::size_t q = order();
    std::vector<BigInt> out(q, BigInt(0));
    for (std::size_t k = 0; k < q; ++k) {
      if (h[k] == 0) continue;
      for (std::size_t j = 0; j < q; ++j) out[j] += h[k] * c_[(j + q - k) % q];
    }
    return {shape_, std::move(out)};
  }

  friend DualGroupRingElem operator+(const DualGroupRingElem& x, const DualGroupRingElem& y) {
    x.require_same_shape(y);
    std::vector<BigInt> c(x.order());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = x.c_[j] + y.c_[j];
    return {x.shape_, std::move(c)};
  }
  friend bool operator==(const DualGroupRingElem& x, const DualGroupRingElem& y) {
    return x.shape_ == y.shape_ && x.c_ == y.c_;
  }
};

/// Res_{n,m}: Λ_{n+1,m} → Λ_{n,m}, γ̄' ↦ its image in G_n.
inline GroupRingElem res(const GroupRingElem& x) {
  require(x.level() >= 1, ErrorCode::LevelZero, "restriction needs level >= 1");
  GroupRingShape target{x.prime(), x.level() - 1, x.exponent()};
  const std::size_t q = target.order();
  std::vector<BigInt> c(q, BigInt(0));
  for (std::size_t j = 0; j < x.order(); ++j) c[j % q] += x[j];
  return {target, std::move(c)};
}

/// Cor_{n,m}: Λ_{n,m} → Λ_{n+1,m}, g ↦ Σ of its p preimages.
inline GroupRingElem cor(const GroupRingElem& x) {
  GroupRingShape target{x.prime(), x.level() + 1, x.exponent()};
  const std::size_t q = x.order();
  std::vector<BigInt> c(target.order(), BigInt(0));
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = x[j % q];
  return {target, std::move(c)};
}

/// [π]_{n,m}: Λ_{n,m} → Λ_{n,m+1}, multiplication by p into the larger modulus.
inline GroupRingElem pi_embed(const GroupRingElem& x) {
  GroupRingShape target{x.prime(), x.level(), x.exponent() + 1};
  std::vector<BigInt> c = x.coeffs();
  for (auto& v : c) v *= x.prime();
  return {target, std::move(c)};
}

/// θ_{n,m}: Λ_{n,m+1} → Λ_{n,m}, coefficientwise reduction.
inline GroupRingElem theta(const GroupRingElem& x) {
  require(x.exponent() >= 2, ErrorCode::InvalidArgument, "theta needs exponent m+1 >= 2");
  return {GroupRingShape{x.prime(), x.level(), x.exponent() - 1}, x.coeffs()};
}

/// φ_{n,m}: χ ↦ Σ_g [p^m](χ(g)) g. With duals stored through [p^m] this keeps
/// coordinates.
inline GroupRingElem phi(const DualGroupRingElem& chi) { return {chi.shape(), chi.coeffs()}; }

inline DualGroupRingElem phi_inverse(const GroupRingElem& x) { return {x.shape(), x.coeffs()}; }

/// χ ∘ f for a map f from Λ(source) into the domain of χ, evaluated on the
/// basis of the source.
inline DualGroupRingElem precompose(const DualGroupRingElem& chi, const GroupRingShape& source,
                                    const std::function<GroupRingElem(const GroupRingElem&)>& f) {
  std::vector<BigInt> values(source.order());
  for (std::size_t j = 0; j < values.size(); ++j) {
    values[j] = chi(f(GroupRingElem::delta(source, j))).rescaled_to(source.m);
  }
  return {source, std::move(values)};
}

enum class NamedMap { Identity, Res, Cor, Pi, Theta };

/// The Pontryagin dual of a named transition map, applied to χ.
///
/// Res: dual Λ_{n,m} → dual Λ_{n+1,m}; Cor: dual Λ_{n+1,m} → dual Λ_{n,m};
/// Pi: dual Λ_{n,m+1} → dual Λ_{n,m}; Theta: dual Λ_{n,m} → dual Λ_{n,m+1}.
inline DualGroupRingElem dual_map(NamedMap f, const DualGroupRingElem& chi) {
  const GroupRingShape s = chi.shape();
  switch (f) {
    case NamedMap::Identity:
      return precompose(chi, s, [](const GroupRingElem& x) { return x; });
    case NamedMap::Res:
      return precompose(chi, {s.p, s.n + 1, s.m}, [](const GroupRingElem& x) { return res(x); });
    case NamedMap::Cor:
      require(s.n >= 1, ErrorCode::LevelZero, "dual of corestriction needs a level >= 1 functional");
      return precompose(chi, {s.p, s.n - 1, s.m}, [](const GroupRingElem& x) { return cor(x); });
    case NamedMap::Pi:
      require(s.m >= 2, ErrorCode::LevelMismatch, "dual of [p] needs a functional on exponent >= 2");
      return precompose(chi, {s.p, s.n, s.m - 1}, [](const GroupRingElem& x) { return pi_embed(x); });
    case NamedMap::Theta:
      return precompose(chi, {s.p, s.n, s.m + 1}, [](const GroupRingElem& x) { return theta(x); });
  }
  fail(ErrorCode::InvalidArgument, "unknown map");
}

enum class Diagram { ResCor, CorRes, PiTheta };

inline std::string to_string(Diagram d) {
  switch (d) {
    case Diagram::ResCor: return "A1-res-cor";
    case Diagram::CorRes: return "A1-cor-res";
    case Diagram::PiTheta: return "A3-pi-theta";
  }
  return "unknown";
}

struct DiagramReport {
  Diagram diagram;
  GroupRingShape shape;
  std::size_t checked = 0;
  std::size_t failures = 0;
  bool pass() const { return failures == 0; }
};

using PhiMap = std::function<GroupRingElem(const DualGroupRingElem&)>;

/// Evaluates both composites of a duality square on every dual basis vector
/// plus `samples` random functionals, for the square anchored at (p, n, m):
///
///   ResCor:  Cor ∘ φ_{n,m}   = φ_{n+1,m} ∘ dual(Res)   on dual Λ_{n,m}
///   CorRes:  Res ∘ φ_{n+1,m} = φ_{n,m} ∘ dual(Cor)     on dual Λ_{n+1,m}
///   PiTheta: θ ∘ φ_{n,m+1}   = φ_{n,m} ∘ dual([p])     on dual Λ_{n,m+1}
///
/// `phi_map` replaces φ for fault-injection tests.
inline DiagramReport check_diagram(Diagram d, std::uint32_t p, int n, int m, std::size_t samples,
                                   std::uint64_t seed = 0x5eed, const PhiMap& phi_map = phi) {
  GroupRingShape domain{p, n, m};
  if (d == Diagram::CorRes) domain.n = n + 1;
  if (d == Diagram::PiTheta) domain.m = m + 1;
  domain.validate();

  auto lhs = [&](const DualGroupRingElem& chi) {
    switch (d) {
      case Diagram::ResCor: return cor(phi_map(chi));
      case Diagram::CorRes: return res(phi_map(chi));
      case Diagram::PiTheta: return theta(phi_map(chi));
    }
    fail(ErrorCode::InvalidArgument, "unknown diagram");
  };
  auto rhs = [&](const DualGroupRingElem& chi) {
    switch (d) {
      case Diagram::ResCor: return phi_map(dual_map(NamedMap::Res, chi));
      case Diagram::CorRes: return phi_map(dual_map(NamedMap::Cor, chi));
      case Diagram::PiTheta: return phi_map(dual_map(NamedMap::Pi, chi));
    }
    fail(ErrorCode::InvalidArgument, "unknown diagram");
  };

  DiagramReport report{d, {p, n, m}};
  auto check = [&](const DualGroupRingElem& chi) {
    ++report.checked;
    if (!(lhs(chi) == rhs(chi))) ++report.failures;
  };
  for (std::size_t j = 0; j < domain.order(); ++j) check(DualGroupRingElem::delta(domain, j));

  std::mt19937_64 rng(seed);
  const BigInt mod = domain.modulus();
  std::uniform_int_distribution<std::uint64_t> dist(0, static_cast<std::uint64_t>(mod - 1));
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<BigInt> v(domain.order());
    for (auto& x : v) x = dist(rng);
    check(DualGroupRingElem(domain, std::move(v)));
  }
  return report;
}

/// Image of a series under Λ → Λ/(p^m, ω_n) ≅ Λ_{n,m}, T ↦ γ̄ - 1.
///
/// The image of a class mod (p^M, T^N) is well defined once m ≤ M and
/// T^N ∈ (p^m, ω_n), i.e. N ≥ m·p^n; the truncation must also hold ω_n itself.
inline GroupRingElem groupring_from_series(const LambdaElem& f, int n, int m) {
  GroupRingShape shape{f.prime(), n, m};
  shape.validate();
  require(m <= f.precision(), ErrorCode::InsufficientPrecision,
          "series known mod p^" + std::to_string(f.precision()) + " cannot map to exponent " + std::to_string(m));
  const std::size_t q = shape.order();
  const std::size_t needed = std::max(q + 1, static_cast<std::size_t>(m) * q);
  require(static_cast<std::size_t>(f.truncation()) >= needed, ErrorCode::TruncationTooShort,
          "N=" + std::to_string(f.truncation()) + " but level " + std::to_string(n) + ", exponent " +
              std::to_string(m) + " needs N >= " + std::to_string(needed));
  // Horner in γ̄ - 1: acc ← acc·(γ̄ - 1) + c_k.
  const BigInt mod = shape.modulus();
  std::vector<BigInt> acc(q, BigInt(0));
  const auto& c = f.residues();
  for (std::size_t k = c.size(); k-- > 0;) {
    std::vector<BigInt> next(q);
    for (std::size_t j = 0; j < q; ++j) next[j] = acc[(j + q - 1) % q] - acc[j];
    next[0] += c[k];
    for (auto& v : next) v = mod_floor(v, mod);
    acc = std::move(next);
  }
  return {shape, std::move(acc)};
}

/// A cofinitely generated Z_p-module (Q_p/Z_p)^r ⊕ ⊕ Z/p^{m_i}.
struct CofiniteModuleSpec {
  int corank = 0;
  std::vector<int> torsion;

  void validate() const {
    require(corank >= 0, ErrorCode::InvalidArgument, "corank must be >= 0");
    for (int m : torsion) require(m >= 1, ErrorCode::InvalidArgument, "torsion exponents must be >= 1");
  }
};

struct LimitInvariants {
  int corank;
  int mu;
  int lambda;
  friend bool operator==(const LimitInvariants&, const LimitInvariants&) = default;
};

/// Invariants of lim_n M ⊗ Z_p[G_n]: (corank of M, Σ m_i, 0).
inline LimitInvariants tensor_limit_invariants(const CofiniteModuleSpec& spec) {
  spec.validate();
  return {spec.corank, std::accumulate(spec.torsion.begin(), spec.torsion.end(), 0), 0};
}

struct GrowthRow {
  int n;
  std::size_t group_order;   // |G_n|
  BigInt torsion_log_size;   // log_p |⊕ Λ_{n,m_i}|
  BigInt cofree_rank;        // Z_p-rank of Z_p[G_n]^r
  bool cross_checked;        // matches the explicitly constructed group rings
};

/// Level-by-level sizes of M ⊗ Z_p[G_n]. Limited to p^{n_max} ≤ 10^4.
inline std::vector<GrowthRow> limit_growth_table(const CofiniteModuleSpec& spec, std::uint32_t p, int n_max) {
  spec.validate();
  require(is_prime(p), ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  require(n_max >= 0, ErrorCode::InvalidArgument, "n_max must be >= 0");
  require(ipow(BigInt(p), static_cast<std::uint64_t>(n_max)) <= 10000, ErrorCode::SizeLimit,
          "p^n_max exceeds 10^4");
  std::vector<GrowthRow> rows;
  for (int n = 0; n <= n_max; ++n) {
    const BigInt order = ipow(BigInt(p), static_cast<std::uint64_t>(n));
    GrowthRow row{n, static_cast<std::size_t>(order), 0, order * spec.corank, true};
    BigInt constructed = 0;
    for (int m : spec.torsion) {
      row.torsion_log_size += BigInt(m) * order;
      // log_p of the constructed ring: one Z/p^m slot per group element.
      GroupRingElem zero = GroupRingElem::zero({p, n, m});
      for (std::size_t j = 0; j < zero.order(); ++j) constructed += p_valuation(zero.modulus(), p);
    }
    BigInt constructed_rank = 0;
    for (int k = 0; k < spec.corank; ++k) constructed_rank += GroupRingElem::zero({p, n, 1}).order();
    row.cross_checked = constructed == row.torsion_log_size && constructed_rank == row.cofree_rank;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace iwasawa
