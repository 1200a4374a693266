#include "iwasawa/polynomial.hpp"

#include <gtest/gtest.h>

#include "iwasawa/matrix.hpp"
#include "iwasawa/resultant.hpp"
#include "iwasawa/structure.hpp"
#include "test_support.hpp"

namespace iwasawa {
namespace {

using testing::uniform;

Poly<BigInt> zpoly(std::vector<BigInt> c) { return Poly<BigInt>(std::move(c), BigInt(0)); }

Poly<BigInt> random_zpoly(int degree, bool monic) {
  std::vector<BigInt> c;
  for (int i = 0; i < degree; ++i) c.push_back(uniform(-20, 20));
  c.push_back(monic ? BigInt(1) : BigInt(uniform(1, 5)));
  return zpoly(c);
}

TEST(Poly, TrimsAndMultiplies) {
  auto f = zpoly({1, 1, 0, 0});
  EXPECT_EQ(f.degree(), 1);
  auto g = zpoly({1, -1});
  EXPECT_EQ(f * g, zpoly({1, 0, -1}));
  EXPECT_TRUE((f * zpoly({})).is_zero());
}

TEST(Poly, MonicDivision) {
  auto f = zpoly({3, 6, 4, 1});
  auto [q, r] = f.divmod_monic(zpoly({3, 3, 1}));
  EXPECT_EQ(q, zpoly({1, 1}));
  EXPECT_TRUE(r.is_zero());
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_zpoly(static_cast<int>(uniform(0, 7)), false);
    auto d = random_zpoly(static_cast<int>(uniform(0, 4)), true);
    auto [q2, r2] = a.divmod_monic(d);
    EXPECT_EQ(q2 * d + r2, a);
    EXPECT_LT(r2.degree(), d.degree());
  }
}

TEST(Poly, ComposeAndEvaluate) {
  auto f = zpoly({-3, 0, 1});   // t^2 - 3
  auto shift = zpoly({1, 1});   // t + 1
  auto g = f.compose(shift);    // t^2 + 2t - 2
  EXPECT_EQ(g, zpoly({-2, 2, 1}));
  for (int x = -5; x <= 5; ++x) EXPECT_EQ(g(BigInt(x)), f(BigInt(x + 1)));
}

TEST(Determinant, AllRoutesAgreeWithLeibniz) {
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform(1, 6));
    Matrix<BigInt> a(n, n, BigInt(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = uniform(-9, 9);
    }
    if (trial % 7 == 0 && n > 1) {
      for (std::size_t j = 0; j < n; ++j) a(1, j) = a(0, j) * 2;  // singular
    }
    const BigInt oracle = testing::leibniz_det(a);
    EXPECT_EQ(bareiss_det(a), oracle);
    EXPECT_EQ(berkowitz_det(a), oracle);
    if (n <= 5) {
      EXPECT_EQ(cofactor_det(a), oracle);
    }
  }
}

TEST(Determinant, BareissPivotsPastZero) {
  Matrix<BigInt> a({{0, 1}, {1, 0}}, BigInt(0));
  EXPECT_EQ(bareiss_det(a), -1);
  EXPECT_THROW(bareiss_det(Matrix<BigInt>(2, 3, BigInt(0))), Error);
}

TEST(Resultant, Examples) {
  const BigInt p = 3;
  EXPECT_EQ(resultant(zpoly({0, 1}), zpoly({p, 1})), p);
  auto omega1 = omega_poly<BigInt>(1, 3, BigInt(0));
  EXPECT_EQ(omega1, zpoly({0, 3, 3, 1}));
  EXPECT_EQ(resultant(zpoly({0, 1}), omega1), 0);
  EXPECT_EQ(resultant(zpoly({-3, 1}), omega1), 63);
  for (int n = 0; n <= 2; ++n) EXPECT_EQ(resultant(zpoly({0, 1}), omega_poly<BigInt>(n, 5, BigInt(0))), 0);
}

TEST(Resultant, MonicEqualsProductOfValues) {
  // Res(Π (t - a_i), G) = Π G(a_i) for monic F with integer roots.
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<BigInt> roots;
    auto f = zpoly({1});
    for (int k = 0, deg = static_cast<int>(uniform(1, 4)); k < deg; ++k) {
      roots.push_back(uniform(-6, 6));
      f *= zpoly({-roots.back(), 1});
    }
    auto g = random_zpoly(static_cast<int>(uniform(1, 4)), false);
    BigInt expected = 1;
    for (const auto& a : roots) expected *= g(a);
    EXPECT_EQ(resultant(f, g), expected);
  }
}

TEST(Resultant, Multiplicative) {
  for (int trial = 0; trial < 40; ++trial) {
    auto f = random_zpoly(static_cast<int>(uniform(1, 3)), true);
    auto g = random_zpoly(static_cast<int>(uniform(1, 3)), true);
    auto h = random_zpoly(static_cast<int>(uniform(1, 4)), false);
    EXPECT_EQ(resultant(f * g, h), resultant(f, h) * resultant(g, h));
    // Same identity at working precision mod 5^4.
    const PadicInt proto = PadicInt::zero(5, 4);
    auto lift = [&](const Poly<BigInt>& x) { return Poly<PadicInt>::from_integers(x.coeffs(), proto); };
    EXPECT_EQ(resultant(lift(f * g), lift(h)), resultant(lift(f), lift(h)) * resultant(lift(g), lift(h)));
  }
}

TEST(Resultant, RationalMatchesInteger) {
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_zpoly(static_cast<int>(uniform(1, 3)), true);
    auto g = random_zpoly(static_cast<int>(uniform(1, 3)), false);
    auto fq = Poly<Rational>::from_integers(f.coeffs(), Rational(0));
    auto gq = Poly<Rational>::from_integers(g.coeffs(), Rational(0));
    EXPECT_EQ(resultant(fq, gq), Rational(resultant(f, g)));
  }
}

TEST(Resultant, NormFormMatchesSylvester) {
  const PadicInt proto = PadicInt::zero(3, 6);
  auto lift = [&](const Poly<BigInt>& x) { return Poly<PadicInt>::from_integers(x.coeffs(), proto); };
  for (int trial = 0; trial < 40; ++trial) {
    auto f = random_zpoly(static_cast<int>(uniform(0, 4)), true);
    auto g = random_zpoly(static_cast<int>(uniform(0, 5)), false);
    const BigInt sylvester = f.degree() == 0 ? BigInt(1) : resultant(f, g);
    EXPECT_EQ(resultant_monic(f, g), sylvester);
    auto fq = Poly<Rational>::from_integers(f.coeffs(), Rational(0));
    auto gq = Poly<Rational>::from_integers(g.coeffs(), Rational(0));
    EXPECT_EQ(resultant_monic(fq, gq), Rational(sylvester));
    EXPECT_EQ(resultant_monic(lift(f), lift(g)), proto.like(sylvester));
  }
}

TEST(Resultant, OmegaReductionMatchesFullPolynomial) {
  for (std::uint32_t p : {2u, 3u}) {
    for (int n = 0; n <= 2; ++n) {
      for (int trial = 0; trial < 10; ++trial) {
        auto f = random_zpoly(static_cast<int>(uniform(1, 4)), true);
        const auto omega = omega_poly<BigInt>(n, p, BigInt(0));
        EXPECT_EQ(omega_mod(f, n, p), omega.divmod_monic(f).second);
        EXPECT_EQ(omega_resultant(f, n, p), resultant(f, omega));
      }
    }
  }
}

}  // namespace
}  // namespace iwasawa
