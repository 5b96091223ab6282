// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--known-failure N]...
//
// Exit status counts the failing criteria that were not declared known failures.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include <vey/fit.hpp>
#include <vey/harness.hpp>
#include <vey/kernels.hpp>
#include <vey/normalizer.hpp>

#include "generators.hpp"
#include "oracles.hpp"

using namespace vey;
using harness::random_potential;

namespace {

struct Result {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// 1. |z_j|^2 = pi gamma_j^2
Result gap_identity() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> norm(0.005, 0.05);
  double worst = 0;
  for (int s = 0; s < 20; ++s) {
    const BirkhoffMap B(random_potential(16, norm(rng), 2, rng), 128);
    for (int j = 1; j <= 5; ++j) {
      const double rhs = M_PI * B.gap(j) * B.gap(j);
      worst = std::max(worst, std::abs(std::norm(B.z(j)) - rhs) / (rhs + 1e-14));
    }
  }
  return {worst < 1e-8, fmt("max rel error %.2e (tol 1e-8)", worst)};
}

// 2. closed-form Z2, Z3 against finite-difference Taylor coefficients of z_j
Result kernel_closed_forms() {
  std::mt19937_64 rng(2025);
  double w2 = 0, w3 = 0;
  for (int s = 0; s < 10; ++s) {
    const ModeSequence d = random_potential(8, 1.0, 1.0, rng);
    for (int j = 1; j <= 4; ++j) {
      const auto t = harness::taylor_fd(d, j, 64);
      w2 = std::max(w2, std::abs(t.second - eval_Z2(d, j)) / std::abs(eval_Z2(d, j)));
      w3 = std::max(w3, std::abs(t.third - eval_Z3(d, j)) / std::abs(eval_Z3(d, j)));
    }
  }
  return {w2 < 1e-6 && w3 < 1e-4, fmt("Z2 rel %.2e (tol 1e-6), Z3 rel %.2e (tol 1e-4)", w2, w3)};
}

// 3. log-log decay of the symmetrized kernels over j = 2..12
Result kernel_decay() {
  std::vector<double> js, n2, n3;
  for (int j = 2; j <= 12; ++j) {
    js.push_back(j);
    n2.push_back(kernel_norm2(j, 200));
    n3.push_back(kernel_norm3(j, 120));
  }
  const double s2 = loglog_fit(js, n2).slope, s3 = loglog_fit(js, n3).slope;
  return {std::abs(s2 + 1) <= 0.15 && std::abs(s3 + 2) <= 0.2,
          fmt("slopes n=2: %.4f (-1 +- 0.15), n=3: %.4f (-2 +- 0.2)", s2, s3)};
}

// 4. smoothing exponent, and the gain ratio as mode content moves up
Result smoothing() {
  std::mt19937_64 rng(2026);
  std::normal_distribution<double> g;
  const int J = 8;
  ModeSequence v(IndexSet::positive, J);
  for (int j = 1; j <= J; ++j) v.at(j) = cplx(g(rng), g(rng)) / std::pow(double(j), 2.0);
  v *= cplx(0.05 / sobolev_norm(v, 0.5));
  const auto fits = harness::smoothing_fits(v, 4 * J, 8 * 4 * J);
  bool ok = true;
  std::string d = "exponents";
  for (const auto& f : fits) {
    ok = ok && std::abs(f.slope - 2) <= 0.1;
    d += fmt(" %.4f", f.slope);
  }
  d += " (2 +- 0.1); ratio slopes";
  // R(p) = ||Psi(v) - v||_{m+1} / ||v||_m^2 for v supported on modes p..p+3
  const double ms[] = {0.5, 1.0, 1.5};
  for (double m : ms) {
    std::vector<double> ps, rs;
    std::mt19937_64 r2(2027);
    for (int p = 1; p <= 8; ++p) {
      const int top = p + 3, J_out = 2 * top + 2, K = std::max(8 * J_out, 4 * top + 8);
      ModeSequence w(IndexSet::positive, top);
      for (int j = p; j <= top; ++j) w.at(j) = cplx(g(r2), g(r2));
      w *= cplx(0.02 / sobolev_norm(w, m));
      const ModeSequence pw = psi_map(w, J_out, K);
      ModeSequence diff(IndexSet::positive, J_out);
      for (int j = 1; j <= J_out; ++j) diff.at(j) = pw[j] - w[j];
      ps.push_back(p);
      rs.push_back(sobolev_norm(diff, m + 1) / std::pow(sobolev_norm(w, m), 2));
    }
    const double slope = loglog_fit(ps, rs).slope;
    ok = ok && slope <= 0.1;
    d += fmt(" %.3f", slope);
  }
  d += " (<= 0.1)";
  return {ok, d};
}

// 5. normal form of the truncated Birkhoff germ at (J, N) = (8, 3)
Result normalizer() {
  const NormalizeResult r = normalize(kdv_germ(8, 3));
  const auto& q = r.report;
  double act = 0;
  for (double x : q.action_residuals) act = std::max(act, x);
  const bool ok = q.symplectic_residual < 1e-9 && act < 1e-10 && q.closeness < 1e-12 && q.step1_average_residual < 1e-10;
  double act_next = 0;
  for (double x : q.action_residuals_full) act_next = std::max(act_next, x);
  return {ok, fmt("(a) %.2e (b) %.2e (c) %.2e (d) %.2e", q.symplectic_residual, act, q.closeness,
                  q.step1_average_residual) +
                  fmt("; next-degree action residual %.2e", act_next)};
}

// 6. Moser formula recovers manufactured potentials
Result moser() {
  std::mt19937_64 rng(2028);
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const int J = 2 + t % 3;
    ScalarGerm f0 = gen::real_scalar(J, 2, 5, rng, 4);
    f0 -= full_average(f0);
    std::vector<ScalarGerm> h;
    for (int j = 1; j <= J; ++j) h.push_back(oracle::chi(f0, j));
    const MoserResult r = moser_solve(h);
    for (int j = 1; j <= J; ++j) {
      worst = std::max(worst, (oracle::chi(r.f, j) - h[std::size_t(j - 1)]).max_abs());
      worst = std::max(worst, oracle::chi(r.f - f0, j).max_abs());
    }
  }
  return {worst < 1e-12, fmt("50 cases, max coefficient error %.2e (tol 1e-12)", worst)};
}

// 7. germ algebra on 1000 random cases
Result algebra() {
  std::mt19937_64 rng(2029);
  double inv = 0, adj = 0, maj = 0, ode = 0;
  int cases = 0;
  for (int t = 0; t < 250; ++t, ++cases) {
    const Germ F = gen::near_identity(3, 4, rng);
    const Germ G = invert(F);
    inv = std::max({inv, (compose(F, G) - Germ::identity(3, 4)).max_abs(), (compose(G, F) - Germ::identity(3, 4)).max_abs()});
  }
  for (int t = 0; t < 250; ++t, ++cases) {
    const Germ F = gen::near_identity(3, 4, rng);
    const GermMatrix D = differential(F);
    const auto v = oracle::random_point(3, 0.5, rng), xi = oracle::random_point(3, 1, rng),
               eta = oracle::random_point(3, 1, rng);
    adj = std::max(adj, std::abs(pairing(apply_at(D, v, xi), eta) - pairing(xi, apply_at(adjoint(D), v, eta))));
  }
  for (int t = 0; t < 250; ++t, ++cases) {
    const Germ F = gen::near_identity(2, 4, rng), G = gen::near_identity(2, 4, rng);
    const Germ lhs = majorant(compose(F, G)), rhs = compose(majorant(F), majorant(G));
    for (int j = 1; j <= 2; ++j)
      for (const auto& [m, c] : lhs(j).terms()) maj = std::max(maj, c.real() - rhs(j).coeff(m).real());
  }
  for (int t = 0; t < 250; ++t, ++cases) {
    const TauGerm V = lift(gen::near_identity(2, 4, rng) - Germ::identity(2, 4));
    const auto v = oracle::random_point(2, 1e-2, rng);
    ode = std::max(ode, oracle::dist(evaluate(flow(V), v), oracle::ode_flow(V, v)));
  }
  const bool ok = inv < 1e-12 && adj < 1e-12 && maj <= 1e-12 && ode < 100 * std::pow(1e-2, 5);
  return {ok, fmt("%.0f cases; inverse %.1e, adjoint %.1e (tol 1e-12)", cases, inv, adj) +
                  fmt(", majorant excess %.1e (tol 1e-12), flow-vs-ODE %.1e (tol 1e-8)", std::max(maj, 0.0), ode)};
}

// 8. the gaps commute; the actions of the germ commute below degree N + 1
Result commutation() {
  std::mt19937_64 rng(2030);
  double worst = 0;
  for (int s = 0; s < 10; ++s) {
    const BirkhoffMap B(random_potential(8, 0.05, 2, rng), 64);
    std::vector<ModeSequence> g;
    for (int j = 1; j <= 4; ++j) g.push_back(gap_gradient(B, j));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const BracketValue b = nu_bracket(g[std::size_t(i)], g[std::size_t(j)]);
        worst = std::max(worst, std::abs(b.value) / b.scale);
      }
  }
  const double germ = commutation_residual(kdv_germ(8, 3), 3);
  return {worst < 1e-6 && germ < 1e-8, fmt("gap brackets rel %.2e (tol 1e-6), germ brackets %.2e (tol 1e-8)", worst, germ)};
}

// 9. ||P_j - P_j0|| <= C ||u|| / j with one C across j = 1..16
Result projection_bounds() {
  std::mt19937_64 rng(2031);
  std::vector<double> xs, ys;
  double worst = 0;
  for (int s = 0; s < 10; ++s) {
    const double n = 0.005 + 0.045 * s / 9.0;
    const ModeSequence w = random_potential(16, n, 2, rng);
    const HillDiscretization H = assemble(w, 128);
    const SpectralData S = eigen(H);
    for (int j = 1; j <= 16; ++j) {
      const double y = (projection(S, j) - unperturbed_projection(H, j)).operatorNorm();
      xs.push_back(n / j);
      ys.push_back(y);
      worst = std::max(worst, y / (n / j));
    }
  }
  const ProportionalFit f = proportional_log_fit(xs, ys);
  return {f.r2 > 0.95, fmt("fitted C %.3f, R^2 %.4f (need > 0.95); max ratio %.3f", f.C, f.r2, worst)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int a = 1; a < argc; ++a) {
    const std::string s = argv[a];
    if (s == "--known-failure" && a + 1 < argc) {
      known.insert(std::stoi(argv[++a]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--known-failure N]...\n");
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"gap identity", gap_identity},          {"kernel closed forms", kernel_closed_forms},
      {"kernel decay", kernel_decay},          {"1-smoothing", smoothing},
      {"normalizer on KdV germ", normalizer},  {"Moser formula", moser},
      {"germ algebra", algebra},               {"commuting integrals", commutation},
      {"projection bounds", projection_bounds}};
  int unexpected = 0, failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = int(i) + 1;
    const auto t0 = std::chrono::steady_clock::now();
    const Result r = criteria[i].second();
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s: %s [%.1fs]%s\n", r.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), r.detail.c_str(), sec,
                !r.pass && known.count(id) ? " (known failure)" : "");
    std::fflush(stdout);
    if (!r.pass) {
      ++failed;
      if (!known.count(id)) ++unexpected;
    }
  }
  std::printf("%zu criteria, %d passed, %d failed (%d unexpected)\n", criteria.size(), int(criteria.size()) - failed,
              failed, unexpected);
  return unexpected;
}
