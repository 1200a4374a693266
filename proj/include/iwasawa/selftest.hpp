#pragma once

// Self-contained invariant checks for each library module, run by the
// `selftest` command. Every check draws from a fixed-seed generator, so a
// run is reproducible. A named module can be given a deliberate fault to
// confirm that its checks are live.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "iwasawa/group_ring.hpp"
#include "iwasawa/lambda_series.hpp"
#include "iwasawa/padic.hpp"
#include "iwasawa/selmer_ledger.hpp"
#include "iwasawa/structure.hpp"

namespace iwasawa::selftest {

struct CheckResult {
  std::string module;
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  bool pass() const { return failures == 0; }
};

inline const std::vector<std::string>& module_names() {
  static const std::vector<std::string> names{"padic-core",          "lambda-series", "structure-invariants",
                                              "group-ring-duality", "selmer-ledger", "cli"};
  return names;
}

namespace detail {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  BigInt residue(const BigInt& modulus) {
    // All moduli used here are below 2^62.
    return BigInt(uniform(0, static_cast<std::int64_t>(modulus - 1)));
  }

 private:
  std::mt19937_64 rng_;
};

class Tally {
 public:
  Tally(std::string module, std::string name) : r_{std::move(module), std::move(name)} {}
  void expect(bool ok) {
    ++r_.cases;
    if (!ok) ++r_.failures;
  }
  CheckResult done() const { return r_; }

 private:
  CheckResult r_;
};

inline std::vector<CheckResult> padic_checks(bool fault) {
  Sampler s(101);
  Tally inverse("padic-core", "unit inverse");
  Tally valuation("padic-core", "valuation of p^k times a unit");
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int m = 1; m <= 8; ++m) {
      const BigInt mod = ipow(BigInt(p), static_cast<std::uint64_t>(m));
      for (int k = 0; k < 10; ++k) {
        BigInt v = s.residue(mod);
        if (v % p == 0) v += 1;
        const PadicInt x(p, m, v);
        PadicInt inv = x.inverse();
        if (fault) inv = inv + inv.like(ipow(BigInt(p), static_cast<std::uint64_t>(m - 1)));
        inverse.expect(x * inv == x.like(1));
        const int e = static_cast<int>(s.uniform(0, m - 1));
        valuation.expect((x * x.like(ipow(BigInt(p), static_cast<std::uint64_t>(e)))).valuation() ==
                         Valuation::exact(e));
      }
    }
  }
  return {inverse.done(), valuation.done()};
}

inline std::vector<CheckResult> lambda_checks(bool fault) {
  Sampler s(202);
  Tally recon("lambda-series", "Weierstrass reconstruction");
  Tally dist("lambda-series", "distinguished factor");
  Tally additive("lambda-series", "mu/lambda additivity");
  auto random_series = [&](std::uint32_t p, int m, int n) {
    std::vector<BigInt> c(static_cast<std::size_t>(n));
    const int mu = static_cast<int>(s.uniform(0, 1));
    const int lam = static_cast<int>(s.uniform(0, 3));
    const BigInt mod = ipow(BigInt(p), static_cast<std::uint64_t>(m - mu));
    for (int i = 0; i < n; ++i) {
      BigInt r = s.residue(mod);
      if (i < lam) r = mod_floor(r * p, mod);
      if (i == lam && r % p == 0) r += 1;
      c[static_cast<std::size_t>(i)] = r * ipow(BigInt(p), static_cast<std::uint64_t>(mu));
    }
    return LambdaElem(p, m, n, c);
  };
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int k = 0; k < 30; ++k) {
      const LambdaElem f = random_series(p, 8, 12);
      WeierstrassForm w = weierstrass_prep(f);
      if (fault) {
        std::vector<BigInt> u = w.unit.residues();
        u[0] += 1;
        w.unit = LambdaElem(p, w.unit.precision(), w.unit.truncation(), u);
      }
      recon.expect(w.reconstruct() == f);
      bool distinguished = true;
      for (const BigInt& c : w.distinguished.lower_coeffs()) distinguished &= c % p == 0;
      dist.expect(distinguished && w.unit.coefficient(0).is_unit());

      const LambdaElem g = random_series(p, 8, 12);
      const auto [mf, lf] = mu_lambda(f);
      const auto [mg, lg] = mu_lambda(g);
      if (mf + mg < 8 && lf + lg < 12) {
        const auto [mfg, lfg] = mu_lambda(f * g);
        additive.expect(mfg == mf + mg && lfg == lf + lg);
      }
    }
  }
  return {recon.done(), dist.done(), additive.done()};
}

inline std::vector<CheckResult> structure_checks(bool fault) {
  Sampler s(303);
  Tally law("structure-invariants", "twist group law");
  Tally exceptional("structure-invariants", "exceptional twist sets");
  Tally length("structure-invariants", "coinvariant length");
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const BigInt q = p == 2 ? 4 : p;
    const Character kappa(p, 8, 1 + q);
    const BigInt mod = ipow(BigInt(p), 8);
    for (int k = 0; k < 20; ++k) {
      std::vector<BigInt> c;
      for (int d = 0, deg = static_cast<int>(s.uniform(0, 5)); d < deg; ++d) c.push_back(s.residue(mod));
      c.push_back(1);
      const PadicCharPoly f = make_padic_char_poly(p, 8, 0, c);
      const std::int64_t i = s.uniform(-4, 4), j = s.uniform(-4, 4);
      const std::int64_t shift = fault && f.lambda() > 0 ? 1 : 0;
      law.expect(twist_char_poly(twist_char_poly(f, kappa, i), kappa, j) == twist_char_poly(f, kappa, i + j + shift));
    }
  }
  const Character kappa(3, 8, 4);
  const ExactCharPoly linear = make_exact_char_poly(3, 0, {-3, 1});
  const ExactCharPoly product = make_exact_char_poly(3, 0, {0, -3, 1});
  const std::set<std::int64_t> want_linear{fault ? -2 : -1};
  exceptional.expect(exceptional_twists(linear, kappa, -5, 5, 3).exceptional == want_linear);
  exceptional.expect(exceptional_twists(product, kappa, -5, 5, 3).exceptional == std::set<std::int64_t>{0, -1});
  length.expect(coinvariant_length(linear, 1) == 2);
  length.expect(coinvariant_length(linear, 0) == 1);
  length.expect(coinvariants_finite(make_exact_char_poly(3, 0, {0, 1}), 0) == Finiteness::Infinite);
  return {law.done(), exceptional.done(), length.done()};
}

inline std::vector<CheckResult> group_ring_checks(bool fault) {
  Tally diagrams("group-ring-duality", "duality diagrams");
  Tally rescor("group-ring-duality", "res after cor is p");
  const PhiMap faulty = [](const DualGroupRingElem& chi) {
    GroupRingElem x = phi(chi);
    if ((x.level() + x.exponent()) % 2 == 0) return x;
    std::vector<BigInt> c = x.coeffs();
    c[0] = -c[0];
    return GroupRingElem(x.shape(), c);
  };
  for (Diagram d : {Diagram::ResCor, Diagram::CorRes, Diagram::PiTheta}) {
    for (std::uint32_t p : {2u, 3u, 5u}) {
      for (int n = 0; n <= 2; ++n) {
        for (int m = 1; m <= 3; ++m) {
          diagrams.expect(check_diagram(d, p, n, m, 20, 0x5eed, fault ? faulty : PhiMap(phi)).pass());
        }
      }
    }
  }
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int n = 0; n <= 2; ++n) {
      const GroupRingShape shape{p, n, 3};
      for (std::size_t j = 0; j < shape.order(); ++j) {
        const GroupRingElem x = GroupRingElem::delta(shape, j);
        rescor.expect(res(cor(x)) == BigInt(p) * x);
      }
    }
  }
  return {diagrams.done(), rescor.done()};
}

inline std::vector<CheckResult> ledger_checks(bool fault) {
  using namespace ledger;
  Sampler s(505);
  Tally examples("selmer-ledger", "worked identities");
  Tally random("selmer-ledger", "random ledger additivity");
  const FormDatum f1{"f1", 7, 0, {{"v", 2}}, {}};
  const FormDatum f2{"f2", 4, 0, {{"v", 5}}, {}};
  const DifferenceReport r = lambda_difference(f1, f2, {"v"});
  examples.expect(r.difference == 3 && r.consistent);
  examples.expect(nonprimitive_lambda(f1, {"v"}) == (fault ? 10 : 9));
  examples.expect(target_corank(FieldDatum::make(1, 2), {{"a", AboveP{2}}, {"b", AboveP{3}}}).corank == 5);
  for (int k = 0; k < 100; ++k) {
    FormDatum f{"f", static_cast<int>(s.uniform(0, 20)), 0, {}, {}};
    std::vector<std::string> sigma0;
    int local = 0;
    for (int v = 0, c = static_cast<int>(s.uniform(0, 4)); v < c; ++v) {
      const std::string id = "v" + std::to_string(v);
      f.local_lambda[id] = static_cast<int>(s.uniform(0, 6));
      local += f.local_lambda[id];
      sigma0.push_back(id);
    }
    random.expect(nonprimitive_lambda(f, sigma0) - f.lambda == local);
  }
  return {examples.done(), random.done()};
}

}  // namespace detail

/// Runs the library module checks; `fault_module` names a module whose
/// checks are fed a deliberately wrong value.
inline std::vector<CheckResult> run_library_checks(const std::string& fault_module = "") {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& module, const std::function<std::vector<CheckResult>(bool)>& fn) {
    for (auto& r : fn(fault_module == module)) out.push_back(std::move(r));
  };
  add("padic-core", detail::padic_checks);
  add("lambda-series", detail::lambda_checks);
  add("structure-invariants", detail::structure_checks);
  add("group-ring-duality", detail::group_ring_checks);
  add("selmer-ledger", detail::ledger_checks);
  return out;
}

}  // namespace iwasawa::selftest
