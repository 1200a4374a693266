#include "iwasawa/group_ring.hpp"

#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"

namespace iwasawa {
namespace {

using testing::uniform;

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

GroupRingElem make(GroupRingShape s, std::vector<BigInt> c) { return {s, std::move(c)}; }

GroupRingElem random_elem(GroupRingShape s) {
  std::vector<BigInt> c(s.order());
  for (auto& v : c) v = testing::random_residue(s.modulus());
  return {s, c};
}

DualGroupRingElem random_dual(GroupRingShape s) {
  std::vector<BigInt> c(s.order());
  for (auto& v : c) v = testing::random_residue(s.modulus());
  return {s, c};
}

// Σ_{k ∈ ker(G_{n+1} → G_n)} δ_k at level n+1.
GroupRingElem kernel_norm(GroupRingShape upper) {
  GroupRingElem out = GroupRingElem::zero(upper);
  const std::size_t step = upper.order() / upper.p;
  for (std::size_t c = 0; c < upper.p; ++c) out = out + GroupRingElem::delta(upper, c * step);
  return out;
}

struct Shapes {
  template <typename Fn>
  static void each(Fn&& fn) {
    for (std::uint32_t p : {2u, 3u, 5u}) {
      for (int n = 0; n <= 2; ++n) {
        for (int m = 1; m <= 3; ++m) fn(GroupRingShape{p, n, m});
      }
    }
  }
};

TEST(GroupRing, Convolution) {
  const GroupRingShape s{2, 1, 2};
  const GroupRingElem g = GroupRingElem::delta(s, 1);
  const GroupRingElem e = GroupRingElem::identity(s);
  EXPECT_EQ((e + g) * (e + g), make(s, {2, 2}));
  const GroupRingShape t{3, 2, 2};
  EXPECT_EQ(GroupRingElem::delta(t, 1) * GroupRingElem::delta(t, 1), GroupRingElem::delta(t, 2));
  EXPECT_EQ(GroupRingElem::delta(t, 5) * GroupRingElem::delta(t, 7), GroupRingElem::delta(t, 3));
  for (int k = 0; k < 20; ++k) {
    const GroupRingElem x = random_elem(t);
    EXPECT_EQ(x * GroupRingElem::identity(t), x);
  }
}

TEST(GroupRing, ShapeErrors) {
  EXPECT_EQ(code_of([] { make({3, 1, 2}, {1, 2}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { GroupRingElem::zero({3, 1, 2}) + GroupRingElem::zero({3, 1, 3}); }),
            ErrorCode::LevelMismatch);
  EXPECT_EQ(code_of([] { res(GroupRingElem::zero({3, 0, 2})); }), ErrorCode::LevelZero);
}

TEST(GroupRing, EntriesAreReduced) {
  const GroupRingElem x = make({3, 1, 2}, {10, -1, 9});
  EXPECT_EQ(x.coeffs(), (std::vector<BigInt>{1, 8, 0}));
}

TEST(ResCor, Examples) {
  const GroupRingShape upper{3, 2, 2}, lower{3, 1, 2};
  EXPECT_EQ(res(GroupRingElem::delta(upper, 7)), GroupRingElem::delta(lower, 1));
  EXPECT_EQ(res(GroupRingElem::identity(upper)), GroupRingElem::identity(lower));
  GroupRingElem all_upper = GroupRingElem::zero(upper), all_lower = GroupRingElem::zero(lower);
  for (std::size_t j = 0; j < upper.order(); ++j) all_upper = all_upper + GroupRingElem::delta(upper, j);
  for (std::size_t j = 0; j < lower.order(); ++j) all_lower = all_lower + GroupRingElem::delta(lower, j);
  EXPECT_EQ(res(all_upper), BigInt(3) * all_lower);
  EXPECT_EQ(cor(GroupRingElem::identity(lower)), kernel_norm(upper));
}

TEST(ResCor, CompositesOnFullBasis) {
  Shapes::each([](GroupRingShape s) {
    const GroupRingShape upper{s.p, s.n + 1, s.m};
    for (std::size_t j = 0; j < s.order(); ++j) {
      const GroupRingElem x = GroupRingElem::delta(s, j);
      EXPECT_EQ(res(cor(x)), BigInt(s.p) * x) << describe(s);
    }
    for (std::size_t j = 0; j < upper.order(); ++j) {
      const GroupRingElem x = GroupRingElem::delta(upper, j);
      EXPECT_EQ(cor(res(x)), kernel_norm(upper) * x) << describe(upper);
    }
  });
}

TEST(ResCor, RestrictionIsARingMap) {
  Shapes::each([](GroupRingShape s) {
    const GroupRingShape upper{s.p, s.n + 1, s.m};
    for (int k = 0; k < 5; ++k) {
      const GroupRingElem x = random_elem(upper), y = random_elem(upper);
      EXPECT_EQ(res(x * y), res(x) * res(y));
      EXPECT_EQ(res(x + y), res(x) + res(y));
    }
  });
}

TEST(ResCor, CorestrictionIsAdditiveEquivariantNotMultiplicative) {
  const GroupRingShape s{2, 0, 2};
  const GroupRingElem one = GroupRingElem::identity(s);
  // cor(1·1) = N but cor(1)·cor(1) = N² = 2N ≠ N mod 4.
  EXPECT_NE(cor(one * one), cor(one) * cor(one));
  Shapes::each([](GroupRingShape t) {
    const GroupRingShape upper{t.p, t.n + 1, t.m};
    const GroupRingElem x = random_elem(t), y = random_elem(t);
    EXPECT_EQ(cor(x + y), cor(x) + cor(y));
    // γ' acts on cor(x) as γ = res(γ') acts on x.
    const GroupRingElem gamma_upper = GroupRingElem::delta(upper, 1);
    EXPECT_EQ(gamma_upper * cor(x), cor(res(gamma_upper) * x));
  });
}

TEST(Phi, BasisAndLinearity) {
  const GroupRingShape s{3, 1, 2};
  EXPECT_EQ(phi(DualGroupRingElem::delta(s, 0)), GroupRingElem::identity(s));
  for (int k = 0; k < 20; ++k) {
    const DualGroupRingElem a = random_dual(s), b = random_dual(s);
    EXPECT_EQ(phi(a + b), phi(a) + phi(b));
    EXPECT_EQ(phi_inverse(phi(a)), a);
  }
}

TEST(Phi, Equivariance) {
  Shapes::each([](GroupRingShape s) {
    for (int k = 0; k < 5; ++k) {
      const GroupRingElem h = random_elem(s);
      const DualGroupRingElem chi = random_dual(s);
      // Oracle for hχ: (hχ)(g) = Σ_k h_k χ(γ^{-k} g), evaluated on each basis element.
      std::vector<BigInt> expected(s.order(), BigInt(0));
      for (std::size_t g = 0; g < s.order(); ++g) {
        for (std::size_t kk = 0; kk < s.order(); ++kk) {
          const GroupRingElem shifted = GroupRingElem::delta(s, (g + s.order() - kk) % s.order());
          expected[g] += h[kk] * chi(shifted).numerator;
        }
      }
      EXPECT_EQ(chi.acted_on_by(h), DualGroupRingElem(s, expected));
      EXPECT_EQ(phi(chi.acted_on_by(h)), h * phi(chi)) << describe(s);
    }
  });
}

TEST(Phi, PairingIsNondegenerate) {
  Shapes::each([](GroupRingShape s) {
    for (std::size_t j = 0; j < s.order(); ++j) {
      const GroupRingElem x = GroupRingElem::delta(s, j);
      bool nonzero = false;
      for (std::size_t k = 0; k < s.order(); ++k) nonzero |= DualGroupRingElem::delta(s, k)(x).numerator != 0;
      EXPECT_TRUE(nonzero);
    }
    // A nonzero x of order p still pairs nontrivially.
    const GroupRingElem small = BigInt(ipow(BigInt(s.p), static_cast<std::uint64_t>(s.m - 1))) *
                                GroupRingElem::delta(s, s.order() - 1);
    EXPECT_NE(DualGroupRingElem::delta(s, s.order() - 1)(small).numerator, 0);
  });
}

TEST(DualMap, Unfolding) {
  const GroupRingShape s{3, 1, 2};
  const DualGroupRingElem chi = random_dual(s);
  EXPECT_EQ(dual_map(NamedMap::Identity, chi), chi);
  const DualGroupRingElem up = dual_map(NamedMap::Res, chi);
  ASSERT_EQ(up.shape(), (GroupRingShape{3, 2, 2}));
  for (std::size_t j = 0; j < 9; ++j) EXPECT_EQ(up[j], chi[j % 3]);
  EXPECT_EQ(code_of([&] { dual_map(NamedMap::Cor, DualGroupRingElem::zero({3, 0, 2})); }), ErrorCode::LevelZero);
  EXPECT_EQ(code_of([&] { dual_map(NamedMap::Pi, DualGroupRingElem::zero({3, 1, 1})); }), ErrorCode::LevelMismatch);
}

TEST(DualMap, PiAndTheta) {
  // dual([p])(χ)(x) = χ(p·x): with values through [p^m], the value p·χ_j / p^{m+1}
  // is χ_j / p^m.
  const GroupRingShape s{5, 1, 3};
  const DualGroupRingElem chi = random_dual(s);
  const DualGroupRingElem down = dual_map(NamedMap::Pi, chi);
  for (std::size_t j = 0; j < s.order(); ++j) EXPECT_EQ(down[j], mod_floor(chi[j], BigInt(25)));
  const DualGroupRingElem up = dual_map(NamedMap::Theta, chi);
  for (std::size_t j = 0; j < s.order(); ++j) EXPECT_EQ(up[j], mod_floor(chi[j] * 5, BigInt(625)));
}

TEST(PiTheta, InjectiveAndSurjective) {
  Shapes::each([](GroupRingShape s) {
    // Injectivity via the basis: the images of the basis stay independent since
    // every coordinate of pi_embed(x) is p·x_j in Z/p^{m+1}.
    std::set<std::vector<BigInt>> seen;
    for (int k = 0; k < 30; ++k) {
      const GroupRingElem x = random_elem(s);
      const GroupRingElem y = pi_embed(x);
      EXPECT_EQ(y.exponent(), s.m + 1);
      for (std::size_t j = 0; j < s.order(); ++j) EXPECT_EQ(y[j] / s.p, x[j]);
      if (x.coeffs() != GroupRingElem::zero(s).coeffs()) EXPECT_NE(y, GroupRingElem::zero(y.shape()));
    }
    const GroupRingShape big{s.p, s.n, s.m + 1};
    for (std::size_t j = 0; j < s.order(); ++j) {
      EXPECT_EQ(theta(GroupRingElem::delta(big, j)), GroupRingElem::delta(s, j));
    }
    const GroupRingElem x = random_elem(s);
    EXPECT_EQ(theta(pi_embed(x)), BigInt(s.p) * x);
  });
}

TEST(Diagrams, AllCommute) {
  for (Diagram d : {Diagram::ResCor, Diagram::CorRes, Diagram::PiTheta}) {
    Shapes::each([d](GroupRingShape s) {
      const DiagramReport r = check_diagram(d, s.p, s.n, s.m, 10);
      EXPECT_TRUE(r.pass()) << to_string(d) << " " << describe(s);
      EXPECT_GT(r.checked, 10u);
    });
  }
  EXPECT_TRUE(check_diagram(Diagram::PiTheta, 3, 0, 1, 0).pass());
}

TEST(Diagrams, FaultInjectionIsDetected) {
  // Negate one coefficient on shapes with n + m odd. Every square compares φ
  // at two shapes of different parity, so a sign flip on one side shows up.
  const PhiMap faulty = [](const DualGroupRingElem& chi) {
    GroupRingElem x = phi(chi);
    if ((x.level() + x.exponent()) % 2 == 0) return x;
    std::vector<BigInt> c = x.coeffs();
    c[0] = -c[0];
    return GroupRingElem(x.shape(), c);
  };
  for (Diagram d : {Diagram::ResCor, Diagram::CorRes, Diagram::PiTheta}) {
    EXPECT_FALSE(check_diagram(d, 3, 1, 2, 5, 1, faulty).pass()) << to_string(d);
  }
}

// Independent image: Σ c_k (γ̄ - 1)^k by repeated convolution.
GroupRingElem image_by_powers(const LambdaElem& f, GroupRingShape s) {
  const GroupRingElem base = GroupRingElem::delta(s, 1 % s.order()) - GroupRingElem::identity(s);
  GroupRingElem power = GroupRingElem::identity(s), out = GroupRingElem::zero(s);
  for (const BigInt& c : f.residues()) {
    out = out + c * power;
    power = power * base;
  }
  return out;
}

TEST(FromSeries, Examples) {
  const LambdaElem one_plus_t(3, 4, 12, {1, 1});
  EXPECT_EQ(groupring_from_series(one_plus_t, 1, 2), GroupRingElem::delta({3, 1, 2}, 1));
  EXPECT_EQ(groupring_from_series(omega(1, 3, 4, 12), 1, 2), GroupRingElem::zero({3, 1, 2}));
  EXPECT_EQ(groupring_from_series(omega(2, 2, 4, 12), 2, 3), GroupRingElem::zero({2, 2, 3}));
  EXPECT_EQ(code_of([] { groupring_from_series(LambdaElem(3, 4, 3, {1, 1}), 1, 2); }), ErrorCode::TruncationTooShort);
  EXPECT_EQ(code_of([] { groupring_from_series(LambdaElem(3, 2, 12, {1, 1}), 1, 3); }),
            ErrorCode::InsufficientPrecision);
}

LambdaElem random_series(std::uint32_t p, int m, int n) {
  std::vector<BigInt> c(static_cast<std::size_t>(n));
  for (auto& v : c) v = testing::random_residue(ipow(BigInt(p), m));
  return {p, m, n, c};
}

TEST(FromSeries, RingMapAndLevelCompatibility) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int n = 0; n <= 2; ++n) {
      for (int m = 1; m <= 3; ++m) {
        const GroupRingShape s{p, n, m};
        const int trunc = static_cast<int>(std::max<std::size_t>(s.order() + 1, m * s.order()));
        if (trunc > 80) continue;
        for (int k = 0; k < 5; ++k) {
          const LambdaElem f = random_series(p, m + 1, trunc), g = random_series(p, m + 1, trunc);
          EXPECT_EQ(groupring_from_series(f, n, m), image_by_powers(f, s));
          EXPECT_EQ(groupring_from_series(f * g, n, m), groupring_from_series(f, n, m) * groupring_from_series(g, n, m));
          if (n >= 1) EXPECT_EQ(res(groupring_from_series(f, n, m)), groupring_from_series(f, n - 1, m));
        }
      }
    }
  }
}

TEST(Limits, TensorInvariants) {
  EXPECT_EQ(tensor_limit_invariants({1, {}}), (LimitInvariants{1, 0, 0}));
  EXPECT_EQ(tensor_limit_invariants({0, {2}}), (LimitInvariants{0, 2, 0}));
  EXPECT_EQ(tensor_limit_invariants({0, {}}), (LimitInvariants{0, 0, 0}));
  EXPECT_EQ(code_of([] { tensor_limit_invariants({0, {0}}); }), ErrorCode::InvalidArgument);
}

TEST(Limits, GrowthTable) {
  auto rows = limit_growth_table({0, {2}}, 3, 1);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(ipow(BigInt(3), static_cast<std::uint64_t>(rows[1].torsion_log_size)), 729);
  auto ranks = limit_growth_table({1, {}}, 2, 2);
  EXPECT_EQ(ranks[2].cofree_rank, 4);
  EXPECT_EQ(ranks[0].cofree_rank, 1);
  EXPECT_EQ(limit_growth_table({0, {3}}, 5, 0)[0].torsion_log_size, 3);
  for (const auto& r : limit_growth_table({2, {1, 3}}, 3, 3)) {
    EXPECT_TRUE(r.cross_checked);
    EXPECT_EQ(r.torsion_log_size, BigInt(4) * r.group_order);  // μ-growth with λ = 0
  }
  EXPECT_EQ(code_of([] { limit_growth_table({0, {1}}, 3, 9); }), ErrorCode::SizeLimit);
}

TEST(Limits, CardinalityByEnumeration) {
  // Count distinct elements of Λ_{n,m} by enumeration; small cases only.
  for (auto [p, n, m] : {std::tuple{2u, 0, 1}, {2u, 1, 2}, {3u, 1, 1}, {2u, 2, 1}, {5u, 0, 2}}) {
    const GroupRingShape s{p, n, m};
    std::set<std::vector<BigInt>> elems;
    // Raw integer vectors over [0, 2p^m) hit every class twice per slot.
    const auto base = static_cast<std::size_t>(s.modulus() * 2);
    const auto total = static_cast<std::size_t>(ipow(BigInt(base), s.order()));
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<BigInt> c(s.order());
      std::size_t rest = code;
      for (auto& v : c) {
        v = static_cast<long>(rest % base);
        rest /= base;
      }
      elems.insert(GroupRingElem(s, c).coeffs());
    }
    const auto row = limit_growth_table({0, {m}}, p, n).back();
    EXPECT_EQ(ipow(BigInt(p), static_cast<std::uint64_t>(row.torsion_log_size)), BigInt(elems.size()));
  }
}

}  // namespace
}  // namespace iwasawa
