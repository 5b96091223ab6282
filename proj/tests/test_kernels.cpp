#include <gtest/gtest.h>

#include <random>

#include <vey/fit.hpp>
#include <vey/harness.hpp>
#include <vey/kernels.hpp>

using namespace vey;
using harness::random_potential;

TEST(Kernels, TaylorCoefficientsOfZ) {
  std::mt19937_64 rng(91);
  for (int s = 0; s < 3; ++s) {
    const ModeSequence d = random_potential(6, 1.0, 1.0, rng);
    for (int j = 1; j <= 4; ++j) {
      const auto t = harness::taylor_fd(d, j, 48);
      EXPECT_LT(std::abs(t.second - eval_Z2(d, j)), 1e-6 * std::abs(eval_Z2(d, j)));
      EXPECT_LT(std::abs(t.third - eval_Z3(d, j)), 1e-4 * std::abs(eval_Z3(d, j)));
    }
  }
}

TEST(Kernels, SingleModeZ2ByHand) {
  // w_1 = w_{-1} = 1: Z_2^2 = kernel(2, 1) w_1^2 = -1 / (2 sqrt pi)
  ModeSequence w(IndexSet::symmetric, 1);
  w.at(1) = w.at(-1) = 1.0;
  EXPECT_NEAR(std::abs(eval_Z2(w, 2) + 1 / (2 * std::sqrt(M_PI))), 0, 1e-15);
  EXPECT_EQ(std::abs(eval_Z2(w, 1)), 0);
}

TEST(Kernels, SymmetrizedKernels) {
  EXPECT_DOUBLE_EQ(sym_kernel2(5, 2, 3), sym_kernel2(5, 3, 2));
  EXPECT_EQ(sym_kernel2(5, 2, 2), 0);
  EXPECT_DOUBLE_EQ(sym_kernel3(4, 1, 5, -2), sym_kernel3(4, -2, 1, 5));
  EXPECT_EQ(sym_kernel3(4, 1, 1, 1), 0);
}

TEST(Kernels, DecayRates) {
  std::vector<double> js, n2, n3, jb, b3;
  for (int j = 2; j <= 12; ++j) {
    js.push_back(j);
    n2.push_back(kernel_norm2(j, 200));
    n3.push_back(kernel_norm3(j, 120));
    if (j >= 3) {
      jb.push_back(j);
      b3.push_back(reindexed_norm3(j, 120));
    }
  }
  EXPECT_NEAR(loglog_fit(js, n2).slope, -1, 0.15);
  EXPECT_NEAR(loglog_fit(js, n3).slope, -2, 0.2);
  EXPECT_NEAR(loglog_fit(jb, b3).slope, -2, 0.3);
}

TEST(Kernels, Psi2IsQuadraticPartOfBirkhoffGerm) {
  const Germ g = kdv_germ(5, 3), q = psi2_germ(5);
  EXPECT_LT((g.truncated(2) - Germ::identity(5, 2) - q).max_abs_in(0, 2), 1e-15);
}

TEST(Kernels, Psi2MatchesBirkhoffMap) {
  std::mt19937_64 rng(93);
  std::normal_distribution<double> n;
  ModeSequence v(IndexSet::positive, 4);
  for (int j = 1; j <= 4; ++j) v.at(j) = cplx(n(rng), n(rng)) / double(j * j);
  const double h = 1e-2;
  auto P = [&](double t) { return psi_map(v * cplx(t), 4, 48); };
  // even part of Psi(tv) / t^2 with Richardson
  const ModeSequence e1 = (P(h) + P(-h)) * cplx(0.5 / (h * h));
  const ModeSequence e2 = (P(2 * h) + P(-2 * h)) * cplx(0.5 / (4 * h * h));
  const ModeSequence est = (e1 * cplx(4.0) - e2) * cplx(1.0 / 3.0);
  EXPECT_LT(sobolev_norm(est - psi2(v), 0), 1e-6 * sobolev_norm(psi2(v), 0));
}

TEST(Kernels, BirkhoffGermIsSymplecticAtLowDegree) {
  const Germ g = kdv_germ(6, 3);
  EXPECT_EQ(g.cap(), 3);
  EXPECT_THROW(kdv_germ(4, 4), std::invalid_argument);
}
