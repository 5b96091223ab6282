#include <gtest/gtest.h>

#include <random>

#include <vey/forms.hpp>

#include "generators.hpp"
#include "oracles.hpp"

using namespace vey;

TEST(Forms, Omega0PullbackByIdentity) {
  EXPECT_EQ((pullback_omega0(Germ::identity(3, 4)).Jbar - multiply_by_i(3)).max_abs(), 0);
}

TEST(Forms, PullbackMatchesPointwiseDefinition) {
  std::mt19937_64 rng(31);
  const Germ G = gen::near_identity(3, 7, rng);  // cap 7: forms exact through degree 6
  const TwoFormGerm w = pullback_omega0(G);
  for (int t = 0; t < 5; ++t) {
    const auto v = oracle::random_point(3, 0.05, rng), xi = oracle::random_point(3, 1, rng),
               eta = oracle::random_point(3, 1, rng);
    auto a = oracle::directional(G, v, xi);
    for (auto& x : a) x *= cplx(0, 1);
    const double direct = pairing(a, oracle::directional(G, v, eta));
    EXPECT_NEAR(evaluate(w, v, xi, eta), direct, 1e-8);
    EXPECT_NEAR(antisymmetry_defect(w.Jbar, v, xi, eta), 0, 1e-14);
  }
}

TEST(Forms, HamiltonianFlowIsSymplectic) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 5; ++t) {
    const Germ phi = gen::symplectic(3, 4, rng);
    EXPECT_LT((pullback_omega0(phi).Jbar - multiply_by_i(3)).max_abs(), 1e-13);
  }
}

TEST(Forms, TwistIsNotSymplectic) {
  std::mt19937_64 rng(35);
  const Germ R = gen::twist(3, 3, rng);
  EXPECT_GT((pullback_omega0(R).Jbar - multiply_by_i(3)).max_abs(), 1e-3);
}

TEST(Forms, PrimitiveInvertsExteriorDerivative) {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 5; ++t) {
    const Germ G = gen::near_identity(3, 4, rng);
    GermMatrix ups = pullback_omega0(G).Jbar - multiply_by_i(3);
    ups.purge();
    const OneFormGerm a = primitive({ups});
    EXPECT_EQ(a.W.cap(), 4);
    EXPECT_LT((exterior_derivative(a).Jbar - ups).max_abs_in(0, 2), 1e-13);
  }
}

TEST(Forms, PrimitiveRejectsConstantPart) {
  EXPECT_THROW(primitive({multiply_by_i(2)}), std::domain_error);
}

TEST(Forms, ExteriorDerivativeOfExactForm) {
  std::mt19937_64 rng(39);
  const ScalarGerm f = gen::real_scalar(3, 2, 4, rng);
  // d(df) = 0
  EXPECT_LT(exterior_derivative({gradient(f, 3)}).Jbar.max_abs(), 1e-13);
}

TEST(Forms, InteriorProduct) {
  std::mt19937_64 rng(41);
  const Germ G = gen::near_identity(2, 4, rng);
  const TwoFormGerm w = pullback_omega0(G);
  const Germ V = gen::near_identity(2, 4, rng) - Germ::identity(2, 4);
  const OneFormGerm a = interior_product(V, w);
  const auto v = oracle::random_point(2, 0.01, rng), xi = oracle::random_point(2, 1, rng);
  // both sides agree through degree 4; the rest is O(|v|^5)
  EXPECT_NEAR(evaluate(a, v, xi), evaluate(w, v, evaluate(V, v), xi), 1e-9);
}

TEST(Forms, NeumannInverse) {
  std::mt19937_64 rng(43);
  const Germ G = gen::near_identity(3, 4, rng);
  GermMatrix ups = pullback_omega0(G).Jbar - multiply_by_i(3);
  ups.purge();
  const TauGermMatrix Jt = neumann_inverse(ups);
  for (double tau : {0.0, 0.3, 1.0}) {
    const GermMatrix w = multiply_by_i(3) + ups * cplx(tau);
    GermMatrix p = at_tau(Jt, tau) * w + GermMatrix::scalar(3, 1.0);
    EXPECT_LT(p.max_abs_in(0, ups.cap()), 1e-13);
    p = w * at_tau(Jt, tau) + GermMatrix::scalar(3, 1.0);
    EXPECT_LT(p.max_abs_in(0, ups.cap()), 1e-13);
  }
  EXPECT_THROW(neumann_inverse(multiply_by_i(3)), std::domain_error);
}
