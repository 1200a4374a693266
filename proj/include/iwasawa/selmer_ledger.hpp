#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "iwasawa/error.hpp"

namespace iwasawa::ledger {

// Bookkeeping of Λ-invariants attached to declared local and global data.
// Nothing here computes Galois cohomology: coranks, μ and λ are inputs, and
// the operations are the integer identities those inputs must satisfy.

/// A number field recorded by its real and complex places.
struct FieldDatum {
  int r1 = 0;
  int r2 = 0;

  int degree() const { return r1 + 2 * r2; }

  /// Validates r1, r2 ≥ 0, a positive degree, and (when given) d = r1 + 2 r2.
  static FieldDatum make(int r1, int r2, std::optional<int> declared_degree = std::nullopt) {
    require(r1 >= 0 && r2 >= 0, ErrorCode::InvalidArgument, "r1 and r2 must be >= 0");
    require(r1 + 2 * r2 >= 1, ErrorCode::InvalidArgument, "field degree must be >= 1");
    if (declared_degree) {
      require(*declared_degree == r1 + 2 * r2, ErrorCode::DegreeMismatch,
              "declared degree " + std::to_string(*declared_degree) + " != r1 + 2 r2 = " + std::to_string(r1 + 2 * r2));
    }
    return {r1, r2};
  }
};

/// A prime above p; such primes never split completely.
struct AboveP {
  int local_degree = 1;
};

/// A prime whose decomposition group in Γ is non-trivial.
struct FinitelyDecomposed {
  int lambda_v = 0;
};

/// A prime splitting completely; H_v ≅ dual of Λ^r ⊕ ⊕ Λ/(p^{m_i}).
struct Split {
  int h0_rank = 0;
  std::vector<int> torsion;

  bool vanishes() const { return h0_rank == 0 && torsion.empty(); }
};

using PrimeKind = std::variant<AboveP, FinitelyDecomposed, Split>;

struct PrimeDatum {
  std::string id;
  PrimeKind kind;
  bool divides_tame_level = false;

  void validate() const {
    require(!id.empty(), ErrorCode::InvalidArgument, "prime id must be nonempty");
    if (const auto* a = std::get_if<AboveP>(&kind)) {
      require(a->local_degree >= 1, ErrorCode::InvalidArgument, id + ": local degree must be >= 1");
    } else if (const auto* f = std::get_if<FinitelyDecomposed>(&kind)) {
      require(f->lambda_v >= 0, ErrorCode::InvalidArgument, id + ": lambda_v must be >= 0");
    } else {
      const auto& s = std::get<Split>(kind);
      require(s.h0_rank >= 0, ErrorCode::InvalidArgument, id + ": h0_rank must be >= 0");
      for (int m : s.torsion) require(m >= 1, ErrorCode::InvalidArgument, id + ": torsion exponents must be >= 1");
    }
  }
};

/// Λ-corank, μ and λ of a local module. λ is left unset where no value is known.
struct LocalInvariants {
  int corank;
  int mu;
  std::optional<int> lambda;
  friend bool operator==(const LocalInvariants&, const LocalInvariants&) = default;
};

inline LocalInvariants local_invariants(const PrimeDatum& v) {
  v.validate();
  if (const auto* a = std::get_if<AboveP>(&v.kind)) return {a->local_degree, 0, std::nullopt};
  if (const auto* f = std::get_if<FinitelyDecomposed>(&v.kind)) return {0, 0, f->lambda_v};
  const auto& s = std::get<Split>(v.kind);
  return {s.h0_rank, std::accumulate(s.torsion.begin(), s.torsion.end(), 0), 0};
}

struct CorankReport {
  int corank;
  int degree;
  bool equals_degree;
  std::vector<std::string> violating_primes;
};

/// Λ-corank of the target of the global-to-local map: Σ_{p-adic} [F_v:Q_p]
/// plus Σ_{split} rank H^0(F_v, A*). The p-adic degrees must sum to [F:Q].
inline CorankReport target_corank(const FieldDatum& field, const std::vector<PrimeDatum>& primes) {
  int above_p = 0;
  int split = 0;
  std::vector<std::string> violating;
  for (const auto& v : primes) {
    v.validate();
    if (const auto* a = std::get_if<AboveP>(&v.kind)) {
      above_p += a->local_degree;
    } else if (const auto* s = std::get_if<Split>(&v.kind)) {
      split += s->h0_rank;
      if (s->h0_rank > 0) violating.push_back(v.id);
    }
  }
  require(above_p == field.degree(), ErrorCode::DegreeMismatch,
          "local degrees above p sum to " + std::to_string(above_p) + " but [F:Q] = " + std::to_string(field.degree()));
  return {above_p + split, field.degree(), violating.empty(), std::move(violating)};
}

/// Lower bound r1 + 2 r2 for the Λ-corank of H^1(F_Σ/F_∞, A).
inline int h1_corank_floor(const FieldDatum& field) { return field.r1 + 2 * field.r2; }

/// Declared invariants of one newform over F_∞.
struct FormDatum {
  std::string label;
  int lambda = 0;
  int mu = 0;
  std::map<std::string, int> local_lambda;  // finitely decomposed primes
  std::map<std::string, Split> split_local; // split primes

  void validate() const {
    require(lambda >= 0 && mu >= 0, ErrorCode::InvalidArgument, label + ": invariants must be >= 0");
    for (const auto& [id, l] : local_lambda) {
      require(l >= 0, ErrorCode::InvalidArgument, label + ": lambda at " + id + " must be >= 0");
    }
    for (const auto& [id, s] : split_local) {
      PrimeDatum{id, s}.validate();
    }
  }
};

/// λ(Σ₀, f) = λ(f) + Σ_{v ∈ Σ₀ finitely decomposed} λ_v(f).
///
/// Requires μ(f) = 0 and H_v(f) = 0 at every split prime of Σ₀.
inline int nonprimitive_lambda(const FormDatum& f, const std::vector<std::string>& sigma0) {
  f.validate();
  require(f.mu == 0, ErrorCode::HypothesisViolated, f.label + ": mu = " + std::to_string(f.mu) + " > 0");
  int total = f.lambda;
  for (const auto& id : sigma0) {
    if (auto it = f.local_lambda.find(id); it != f.local_lambda.end()) {
      total += it->second;
    } else if (auto sp = f.split_local.find(id); sp != f.split_local.end()) {
      require(sp->second.vanishes(), ErrorCode::HypothesisViolated,
              f.label + ": H_v is nonzero at split prime " + id);
    } else {
      fail(ErrorCode::UnknownPrime, f.label + ": no local data for prime " + id);
    }
  }
  return total;
}

struct DifferenceReport {
  int difference;      // Σ (λ_{v,2} - λ_{v,1}) over Σ₀
  int lambda_gap;      // λ(f1) - λ(f2)
  int sigma0_lambda_1; // λ(Σ₀, f1)
  int sigma0_lambda_2; // λ(Σ₀, f2)
  bool consistent;     // λ(Σ₀, ·) agree and the gap equals the local difference
};

inline DifferenceReport lambda_difference(const FormDatum& f1, const FormDatum& f2,
                                          const std::vector<std::string>& sigma0) {
  const int l1 = nonprimitive_lambda(f1, sigma0);
  const int l2 = nonprimitive_lambda(f2, sigma0);
  int difference = 0;
  for (const auto& id : sigma0) {
    auto a = f1.local_lambda.find(id);
    auto b = f2.local_lambda.find(id);
    require((a == f1.local_lambda.end()) == (b == f2.local_lambda.end()), ErrorCode::InvalidArgument,
            "prime " + id + " is finitely decomposed for one form only");
    if (a != f1.local_lambda.end()) difference += b->second - a->second;
  }
  const int gap = f1.lambda - f2.lambda;
  return {difference, gap, l1, l2, l1 == l2 && difference == gap};
}

/// A full ledger document: field, primes, forms and the auxiliary set Σ₀.
struct LedgerConfig {
  FieldDatum field;
  std::vector<PrimeDatum> primes;
  std::vector<FormDatum> forms;
  std::vector<std::string> sigma0;

  /// Cross-reference checks: unique ids, Σ₀ away from p, form data matching prime kinds.
  void validate() const {
    std::map<std::string, const PrimeDatum*> by_id;
    for (const auto& v : primes) {
      v.validate();
      require(by_id.emplace(v.id, &v).second, ErrorCode::InvalidArgument, "duplicate prime id " + v.id);
    }
    for (const auto& id : sigma0) {
      auto it = by_id.find(id);
      require(it != by_id.end(), ErrorCode::UnknownPrime, "sigma0 names unknown prime " + id);
      require(!std::holds_alternative<AboveP>(it->second->kind), ErrorCode::InvalidArgument,
              "sigma0 may not contain the prime above p " + id);
    }
    std::set<std::string> labels;
    for (const auto& f : forms) {
      f.validate();
      require(labels.insert(f.label).second, ErrorCode::InvalidArgument, "duplicate form label " + f.label);
      for (const auto& [id, l] : f.local_lambda) {
        auto it = by_id.find(id);
        require(it != by_id.end(), ErrorCode::UnknownPrime, f.label + ": unknown prime " + id);
        require(std::holds_alternative<FinitelyDecomposed>(it->second->kind), ErrorCode::InvalidArgument,
                f.label + ": local lambda given for non-finitely-decomposed prime " + id);
      }
      for (const auto& [id, s] : f.split_local) {
        auto it = by_id.find(id);
        require(it != by_id.end(), ErrorCode::UnknownPrime, f.label + ": unknown prime " + id);
        require(std::holds_alternative<Split>(it->second->kind), ErrorCode::InvalidArgument,
                f.label + ": split data given for non-split prime " + id);
      }
    }
  }
};

struct LedgerReport {
  int h1_floor;
  CorankReport corank;
  std::vector<std::pair<std::string, LocalInvariants>> local;
  std::vector<std::pair<std::string, int>> sigma0_lambda;
  std::vector<std::pair<std::pair<std::string, std::string>, DifferenceReport>> comparisons;
};

/// Evaluates every identity of the ledger; hypothesis violations throw.
inline LedgerReport evaluate(const LedgerConfig& config) {
  config.validate();
  LedgerReport report{h1_corank_floor(config.field), target_corank(config.field, config.primes), {}, {}, {}};
  for (const auto& v : config.primes) report.local.emplace_back(v.id, local_invariants(v));
  for (const auto& f : config.forms) report.sigma0_lambda.emplace_back(f.label, nonprimitive_lambda(f, config.sigma0));
  for (std::size_t i = 0; i < config.forms.size(); ++i) {
    for (std::size_t j = i + 1; j < config.forms.size(); ++j) {
      report.comparisons.push_back({{config.forms[i].label, config.forms[j].label},
                                    lambda_difference(config.forms[i], config.forms[j], config.sigma0)});
    }
  }
  return report;
}

}  // namespace iwasawa::ledger
