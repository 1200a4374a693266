#include "iwasawa/structure.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace iwasawa {
namespace {

using testing::uniform;

ExactCharPoly exact(std::uint32_t p, std::vector<Rational> c, int mu = 0) { return make_exact_char_poly(p, mu, c); }

LambdaElem series(std::uint32_t p, int m, int n, std::vector<BigInt> c) { return {p, m, n, c}; }

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvalidArgument;
}

TEST(Invariants, DefinitionUnfolding) {
  EXPECT_EQ(invariants(ElementaryModule{3, 0, {2}, {}}), (ModuleInvariants{0, 2, 0}));
  EXPECT_EQ(invariants(ElementaryModule{3, 1, {}, {}}), (ModuleInvariants{1, 0, 0}));
  ElementaryModule e{3, 0, {1, 1}, {{DistinguishedPoly(3, {3}), 2}}};
  EXPECT_EQ(invariants(e), (ModuleInvariants{0, 2, 2}));
}

TEST(CharPoly, FromElementaryModule) {
  ExactCharPoly f = char_poly(ElementaryModule{3, 0, {2}, {}});
  EXPECT_EQ(f.mu, 2);
  EXPECT_EQ(f.lambda(), 0);
  EXPECT_EQ(char_poly(ElementaryModule{3, 0, {}, {{DistinguishedPoly(3, {3}), 1}}}).monic,
            exact(3, {3, 1}).monic);
  EXPECT_EQ(code_of([] { char_poly(ElementaryModule{3, 1, {}, {}}); }), ErrorCode::NotTorsion);
}

TEST(CharPoly, DegreeAndMuMatchInvariants) {
  for (int trial = 0; trial < 50; ++trial) {
    ElementaryModule e{5, 0, {}, {}};
    for (int k = 0, t = static_cast<int>(uniform(0, 3)); k < t; ++k) e.mu_exponents.push_back(static_cast<int>(uniform(1, 4)));
    for (int k = 0, s = static_cast<int>(uniform(0, 3)); k < s; ++k) {
      std::vector<BigInt> lower;
      for (int d = 0, deg = static_cast<int>(uniform(1, 3)); d < deg; ++d) lower.push_back(5 * uniform(-4, 4));
      e.factors.emplace_back(DistinguishedPoly(5, lower), static_cast<int>(uniform(1, 3)));
    }
    ModuleInvariants inv = invariants(e);
    ExactCharPoly f = char_poly(e);
    EXPECT_EQ(f.lambda(), inv.lambda);
    EXPECT_EQ(f.mu, inv.mu);
    PadicCharPoly g = char_poly(e, 6);
    EXPECT_EQ(g.lambda(), inv.lambda);
  }
}

TEST(InvariantsFromMatrix, Examples) {
  const LambdaElem zero = LambdaElem::zero(3, 6, 8);
  auto one = invariants_from_matrix(Matrix<LambdaElem>({{series(3, 6, 8, {3, 1})}}, zero));
  EXPECT_EQ(one.mu, 0);
  EXPECT_EQ(one.lambda, 1);
  auto diag = invariants_from_matrix(
      Matrix<LambdaElem>({{series(3, 6, 8, {3}), zero}, {zero, series(3, 6, 8, {0, 1})}}, zero));
  EXPECT_EQ(diag.mu, 1);
  EXPECT_EQ(diag.lambda, 1);
  EXPECT_EQ(diag.char_poly.monic, Poly<PadicInt>::from_integers({0, 1}, PadicInt::zero(3, 5)));
}

LambdaElem small_series(std::uint32_t p, int m, int n) {
  std::vector<BigInt> c(static_cast<std::size_t>(n));
  const BigInt mod = ipow(BigInt(p), m);
  const int mu = static_cast<int>(uniform(0, 1));
  const int lam = static_cast<int>(uniform(0, 2));
  for (int i = 0; i < n; ++i) {
    BigInt r = testing::random_residue(mod);
    if (i < lam) r *= p;
    if (i == lam && r % p == 0) r += 1;
    c[static_cast<std::size_t>(i)] = r * ipow(BigInt(p), mu);
  }
  return {p, m, n, c};
}

TEST(InvariantsFromMatrix, TriangularAndBlockDiagonalAreAdditive) {
  const std::uint32_t p = 3;
  const int m = 8, n = 12;
  for (int trial = 0; trial < 40; ++trial) {
    Matrix<LambdaElem> a(3, 3, LambdaElem::zero(p, m, n));
    int mu = 0, lambda = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      a(i, i) = small_series(p, m, n);
      auto [dm, dl] = mu_lambda(a(i, i));  // per-entry oracle
      mu += dm;
      lambda += dl;
      for (std::size_t j = i + 1; j < 3; ++j) a(i, j) = small_series(p, m, n);
    }
    auto inv = invariants_from_matrix(a);
    EXPECT_EQ(inv.mu, mu);
    EXPECT_EQ(inv.lambda, lambda);

    // Block diagonal: one 2x2 block and one 1x1 block.
    Matrix<LambdaElem> block(2, 2, LambdaElem::zero(p, m, n));
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) block(i, j) = small_series(p, m, n);
    }
    LambdaElem tail = small_series(p, m, n);
    const LambdaElem det_block = det_lambda(block);
    if (det_block.is_zero() || mu_lambda(det_block).second + mu_lambda(tail).second >= n ||
        mu_lambda(det_block).first + mu_lambda(tail).first >= m) {
      continue;
    }
    Matrix<LambdaElem> full(3, 3, LambdaElem::zero(p, m, n));
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) full(i, j) = block(i, j);
    }
    full(2, 2) = tail;
    auto b1 = invariants_from_matrix(block);
    auto b2 = invariants_from_matrix(Matrix<LambdaElem>({{tail}}, tail));
    auto whole = invariants_from_matrix(full);
    EXPECT_EQ(whole.mu, b1.mu + b2.mu);
    EXPECT_EQ(whole.lambda, b1.lambda + b2.lambda);
  }
}

TEST(Twist, Examples) {
  const Character kappa(3, 8, 4);
  EXPECT_EQ(twist_char_poly(exact(3, {0, 1}), kappa, 1).monic, exact(3, {-3, 1}).monic);
  EXPECT_EQ(twist_char_poly(exact(3, {-3, 1}), kappa, -1).monic, exact(3, {0, 1}).monic);
  const ExactCharPoly f = exact(3, {6, -9, 0, 1});
  EXPECT_EQ(twist_char_poly(f, kappa, 0), f);

  PadicCharPoly t = make_padic_char_poly(3, 8, 0, {0, 1});
  EXPECT_EQ(twist_char_poly(t, kappa, 1).monic, Poly<PadicInt>::from_integers({-3, 1}, PadicInt::zero(3, 8)));
}

TEST(Twist, RejectsPositiveMu) {
  EXPECT_EQ(code_of([] { twist_char_poly(exact(3, {0, 1}, 1), Character(3, 8, 4), 1); }), ErrorCode::MuNonzero);
}

PadicCharPoly random_monic(std::uint32_t p, int m, int degree) {
  std::vector<BigInt> c;
  const BigInt mod = ipow(BigInt(p), m);
  for (int i = 0; i < degree; ++i) c.push_back(testing::random_residue(mod));
  c.push_back(1);
  return make_padic_char_poly(p, m, 0, c);
}

TEST(Twist, GroupLawDegreeAndSubstitution) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const BigInt q = p == 2 ? 4 : p;
    for (const BigInt& kg : {BigInt(1 + q), BigInt(1 + q + q * q)}) {
      const Character kappa(p, 8, kg);
      for (int trial = 0; trial < 15; ++trial) {
        PadicCharPoly f = random_monic(p, 8, static_cast<int>(uniform(0, 5)));
        const std::int64_t i = uniform(-4, 4), j = uniform(-4, 4);
        PadicCharPoly fi = twist_char_poly(f, kappa, i);
        EXPECT_EQ(twist_char_poly(fi, kappa, j).monic, twist_char_poly(f, kappa, i + j).monic);
        EXPECT_EQ(fi.lambda(), f.lambda());
        EXPECT_TRUE(fi.monic.is_monic());
        // F_i(κ^i(1+x) - 1) = κ^{iλ} F(x).
        const PadicInt ki = char_power(kappa, i);
        for (int s = 0; s < 5; ++s) {
          const PadicInt x = PadicInt(p, 8, uniform(0, 1000));
          EXPECT_EQ(fi.monic(ki * (x + x.like(1)) - x.like(1)), char_power(kappa, i * f.lambda()) * f.monic(x));
        }
      }
    }
  }
}

TEST(Coinvariants, FinitenessVerdicts) {
  EXPECT_EQ(coinvariants_finite(exact(3, {0, 1}), 0), Finiteness::Infinite);
  EXPECT_EQ(coinvariants_finite(exact(3, {-3, 1}), 1), Finiteness::Finite);
  EXPECT_EQ(coinvariants_finite(make_padic_char_poly(3, 6, 0, {0, 1}), 0), Finiteness::Inconclusive);
  EXPECT_EQ(coinvariants_finite(make_padic_char_poly(3, 6, 0, {-3, 1}), 1), Finiteness::Finite);
  // μ only scales by a p-power; it does not change the verdict.
  EXPECT_EQ(coinvariants_finite(exact(3, {-3, 1}, 2), 1), Finiteness::Finite);
  // p = 2: ζ = -1 is a root of unity of order 2, so t + 2 is exceptional at n = 1 only.
  EXPECT_EQ(coinvariants_finite(exact(2, {2, 1}), 0), Finiteness::Finite);
  EXPECT_EQ(coinvariants_finite(exact(2, {2, 1}), 1), Finiteness::Infinite);
}

TEST(Coinvariants, Length) {
  EXPECT_EQ(coinvariant_length(exact(3, {-3, 1}), 1), 2);
  EXPECT_EQ(coinvariant_length(exact(3, {-3, 1}), 0), 1);
  EXPECT_EQ(coinvariant_length(exact(3, {1}), 2), 0);
  EXPECT_EQ(coinvariant_length(exact(3, {1}, 2), 1), 6);  // μ·p^n
  EXPECT_EQ(coinvariant_length(make_padic_char_poly(3, 6, 0, {-3, 1}), 1), 2);
  EXPECT_EQ(code_of([] { coinvariant_length(exact(3, {0, 1}), 0); }), ErrorCode::NotFinite);
}

TEST(Coinvariants, LengthMatchesBruteForce) {
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    const std::uint32_t p = trial % 2 == 0 ? 3 : 2;
    const int degree = static_cast<int>(uniform(1, 4));
    const int n = static_cast<int>(uniform(0, 2));
    std::vector<BigInt> c;
    for (int i = 0; i < degree; ++i) c.push_back(uniform(-12, 12) * (uniform(0, 2) == 0 ? 1 : p));
    c.push_back(1);
    std::vector<Rational> cq(c.begin(), c.end());
    const ExactCharPoly f = exact(p, cq);
    if (coinvariants_finite(f, n) != Finiteness::Finite) continue;
    const BigInt length = coinvariant_length(f, n);
    if (length >= 6) continue;  // keep B = 6 above the length
    ++checked;
    for (int bound : {6, 8, 10}) {
      EXPECT_EQ(testing::brute_force_coinvariant_log_size(c, p, n, bound), length) << "B=" << bound;
    }
  }
  EXPECT_GE(checked, 20);
}

TEST(Exceptional, Examples) {
  const Character kappa(3, 8, 4);
  EXPECT_EQ(exceptional_twists(exact(3, {-3, 1}), kappa, -5, 5, 3).exceptional, (std::set<std::int64_t>{-1}));
  EXPECT_TRUE(exceptional_twists(exact(3, {1}), kappa, -5, 5, 3).exceptional.empty());
  // t(t - 3) = t^2 - 3t
  EXPECT_EQ(exceptional_twists(exact(3, {0, -3, 1}), kappa, -5, 5, 3).exceptional,
            (std::set<std::int64_t>{0, -1}));
  EXPECT_EQ(code_of([] { exceptional_twists(exact(3, {0, 1}), Character(3, 8, 1), -1, 1, 1); }),
            ErrorCode::TrivialCharacter);
}

TEST(Exceptional, MatchesRootEnumeration) {
  // For F = Π (t - r_k), the twist F_i has roots κ^i(1 + r_k) - 1. A rational
  // root of the form ζ - 1 needs ζ = 1, or ζ = -1 when p = 2 and n ≥ 1.
  for (int trial = 0; trial < 30; ++trial) {
    const std::uint32_t p = trial % 3 == 0 ? 2 : (trial % 3 == 1 ? 3 : 5);
    const BigInt q = p == 2 ? 4 : p;
    const Character kappa(p, 10, 1 + q);
    Poly<Rational> f({Rational(1)}, Rational(0));
    for (int k = 0, deg = static_cast<int>(uniform(1, 3)); k < deg; ++k) {
      // Roots of the shape ±(1+q)^e - 1 land in the exceptional set for some i in range.
      const int e = static_cast<int>(uniform(-3, 3));
      Rational root = e >= 0 ? Rational(ipow(BigInt(1 + q), e)) : Rational(1) / Rational(ipow(BigInt(1 + q), -e));
      if (uniform(0, 2) == 0) root = -root;
      root -= 1;
      if (uniform(0, 3) == 0) root = Rational(uniform(-10, 10));
      f *= Poly<Rational>({Rational(-root), Rational(1)}, Rational(0));
    }
    std::set<std::int64_t> expected;
    const int n_max = 2;
    for (std::int64_t i = -5; i <= 5; ++i) {
      // F_i vanishes at ζ - 1 iff F vanishes at κ^{-i}ζ - 1.
      const Rational k = i >= 0 ? Rational(ipow(BigInt(1 + q), static_cast<std::uint64_t>(i)))
                                : Rational(1) / Rational(ipow(BigInt(1 + q), static_cast<std::uint64_t>(-i)));
      if (f(Rational(1) / k - 1) == 0) expected.insert(i);
      if (p == 2 && n_max >= 1 && f(Rational(-1) / k - 1) == 0) expected.insert(i);
    }
    ExactCharPoly cp{p, 0, f};
    EXPECT_EQ(exceptional_twists(cp, kappa, -5, 5, n_max).exceptional, expected) << "trial " << trial;
  }
}

}  // namespace
}  // namespace iwasawa
