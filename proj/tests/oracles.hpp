#pragma once
// Reference computations that avoid the library code paths they check.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <vey/germ.hpp>
#include <vey/hill.hpp>

namespace oracle {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;

// Term-by-term evaluation from exponent counts.
inline cplx eval_poly(const vey::ScalarGerm& p, const Point& v) {
  cplx s = 0;
  for (const auto& [m, c] : p.terms()) {
    cplx t = c;
    for (int j = 1; j <= int(v.size()); ++j)
      t *= std::pow(v[std::size_t(j - 1)], m.alpha(j)) * std::pow(std::conj(v[std::size_t(j - 1)]), m.beta(j));
    s += t;
  }
  return s;
}

inline Point eval_germ(const vey::Germ& F, const Point& v) {
  Point out;
  for (int j = 1; j <= F.modes(); ++j) out.push_back(eval_poly(F(j), v));
  return out;
}

inline Point axpy(const Point& x, cplx a, const Point& y) {
  Point r = x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * y[i];
  return r;
}

inline double dist(const Point& a, const Point& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Directional derivative dF(v) xi by a fourth-order central difference.
inline Point directional(const vey::Germ& F, const Point& v, const Point& xi, double h = 1e-4) {
  const Point a = eval_germ(F, axpy(v, h, xi)), b = eval_germ(F, axpy(v, -h, xi));
  const Point c = eval_germ(F, axpy(v, 2 * h, xi)), d = eval_germ(F, axpy(v, -2 * h, xi));
  Point r(v.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (8.0 * (a[i] - b[i]) - (c[i] - d[i])) / (12 * h);
  return r;
}

inline Point random_point(int J, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Point v(static_cast<std::size_t>(J));
  double n = 0;
  for (auto& x : v) {
    x = cplx(g(rng), g(rng));
    n += std::norm(x);
  }
  for (auto& x : v) x *= radius / std::sqrt(n);
  return v;
}

/// Time-1 map of dv/dtau = V^tau(v) by adaptive Dormand-Prince.
inline Point ode_flow(const vey::TauGerm& V, const Point& v0) {
  using State = std::vector<double>;
  const int J = V.modes();
  auto rhs = [&](const State& x, State& dx, double tau) {
    Point v(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) v[std::size_t(j)] = cplx(x[std::size_t(2 * j)], x[std::size_t(2 * j + 1)]);
    dx.assign(x.size(), 0.0);
    for (int j = 1; j <= J; ++j) {
      cplx s = 0;
      for (const auto& [m, c] : V(j).terms()) {
        cplx t = c(tau);
        for (int k = 1; k <= J; ++k)
          t *= std::pow(v[std::size_t(k - 1)], m.alpha(k)) * std::pow(std::conj(v[std::size_t(k - 1)]), m.beta(k));
        s += t;
      }
      dx[std::size_t(2 * j - 2)] = s.real();
      dx[std::size_t(2 * j - 1)] = s.imag();
    }
  };
  State x;
  for (const auto& z : v0) {
    x.push_back(z.real());
    x.push_back(z.imag());
  }
  namespace ode = boost::numeric::odeint;
  ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_dopri5<State>()), rhs, x, 0.0, 1.0,
                          1e-3);
  Point out;
  for (int j = 0; j < J; ++j) out.emplace_back(x[std::size_t(2 * j)], x[std::size_t(2 * j + 1)]);
  return out;
}

/// Hill matrix by quadrature of <-u phi_k', phi_k> on a uniform grid of [0, 4 pi].
inline Eigen::MatrixXcd hill_by_quadrature(const vey::ModeSequence& w, int K, int points = 1024) {
  const int n = 2 * K + 1;
  std::vector<cplx> u(static_cast<std::size_t>(points));
  for (int l = 0; l < points; ++l) {
    const double x = 4 * M_PI * l / points;
    cplx s = 0;
    for (int j = -w.cutoff(); j <= w.cutoff(); ++j)
      if (j != 0) s += w[j] * std::polar(1.0, j * x);
    u[std::size_t(l)] = s / (2 * std::sqrt(M_PI));
  }
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  const double dx = 4 * M_PI / points;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) {
      cplx s = 0;
      for (int l = 0; l < points; ++l) s += u[std::size_t(l)] * std::polar(1.0, 0.5 * (b - a) * (4 * M_PI * l / points));
      M(a + K, b + K) = -s * dx / (4 * M_PI) + (a == b ? 0.25 * a * a : 0.0);
    }
  return M;
}

// chi_j from exponents: the coefficient of u^alpha conj(u)^beta picks up i(alpha_j - beta_j).
inline vey::ScalarGerm chi(const vey::ScalarGerm& f, int j) {
  vey::ScalarGerm r(f.cap());
  for (const auto& [m, c] : f.terms()) r.add(m, c * cplx(0, m.alpha(j) - m.beta(j)));
  return r;
}

}  // namespace oracle
