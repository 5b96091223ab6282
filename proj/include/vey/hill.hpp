#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phase_space.hpp"

namespace vey {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Galerkin matrix of L_u = -d^2/dx^2 - u on [0, 4 pi] in the orthonormal basis
/// e^{ikx/2} / sqrt(4 pi), |k| <= K.
struct HillDiscretization {
  int K = 0;
  MatrixXcd matrix;
  bool hermitian = true;
  ModeSequence w;

  int size() const { return 2 * K + 1; }
  int index(int k) const { return k + K; }
};

inline HillDiscretization assemble(const ModeSequence& w, int K) {
  if (w.index_set() != IndexSet::symmetric) throw std::invalid_argument("assemble: potential must be indexed by Z0");
  const int b = w.bandwidth();
  if (K < 2 * b + 4) throw std::domain_error("assemble: K too small for the potential bandwidth");
  HillDiscretization H;
  H.K = K;
  H.w = w;
  H.hermitian = w.is_real(1e-14);
  const int n = 2 * K + 1;
  H.matrix = MatrixXcd::Zero(n, n);
  const double c = 1.0 / (2 * std::sqrt(M_PI));
  for (int k = -K; k <= K; ++k) {
    H.matrix(H.index(k), H.index(k)) = 0.25 * k * k;
    for (int m = -b; m <= b; ++m) {
      const int kp = k - 2 * m;
      if (m == 0 || kp < -K || kp > K) continue;
      H.matrix(H.index(k), H.index(kp)) -= c * w[m];
    }
  }
  return H;
}

inline HillDiscretization assemble(const GridFunction& u, int K, int J) { return assemble(fourier_analyze(u, J), K); }

struct SpectralData {
  std::vector<cplx> lambda;  // ascending (by real part)
  MatrixXcd vectors;         // right eigenvectors as columns
  MatrixXcd left;            // inverse of `vectors` when the matrix is not Hermitian
  bool hermitian = true;
  bool provisional = false;

  double lambda_re(int k) const { return lambda.at(std::size_t(k)).real(); }
  // gamma_j = lambda_{2j} - lambda_{2j-1}; modulus of the difference for complex u.
  double gap(int j) const {
    const cplx d = lambda.at(std::size_t(2 * j)) - lambda.at(std::size_t(2 * j - 1));
    return hermitian ? d.real() : std::abs(d);
  }
  bool degenerate(int j) const { return gap(j) < 1e-12; }
};

inline SpectralData eigen(const HillDiscretization& H) {
  SpectralData S;
  S.hermitian = H.hermitian;
  const int n = H.size();
  if (H.hermitian) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H.matrix);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigen: Hermitian solver failed");
    S.vectors = es.eigenvectors();
    for (int k = 0; k < n; ++k) S.lambda.push_back(es.eigenvalues()(k));
    return S;
  }
  Eigen::ComplexEigenSolver<MatrixXcd> es(H.matrix);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen: complex solver failed");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return es.eigenvalues()(a).real() < es.eigenvalues()(b).real(); });
  S.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    S.lambda.push_back(es.eigenvalues()(order[std::size_t(k)]));
    S.vectors.col(k) = es.eigenvectors().col(order[std::size_t(k)]);
  }
  S.left = S.vectors.inverse();
  S.provisional = true;
  return S;
}

inline constexpr double kContourDelta = 0.125;

// Circle |lambda - j^2/4| = delta0 j.
inline void check_contour(const SpectralData& S, int j) {
  const double c = 0.25 * j * j, r = kContourDelta * j;
  int inside = 0;
  for (std::size_t k = 0; k < S.lambda.size(); ++k) {
    const double d = std::abs(S.lambda[k] - c);
    if (std::abs(d - r) < 1e-3 * r)
      throw std::domain_error("projection: eigenvalue " + std::to_string(k) + " lies on the contour for j = " +
                              std::to_string(j));
    if (d < r) {
      ++inside;
      if (int(k) != 2 * j - 1 && int(k) != 2 * j)
        throw std::domain_error("projection: eigenvalue " + std::to_string(k) + " inside the contour for j = " +
                                std::to_string(j));
    }
  }
  if (inside != 2) throw std::domain_error("projection: contour for j = " + std::to_string(j) + " does not enclose two eigenvalues");
}

// Spectral projection onto E_j(u) from eigenpairs.
inline MatrixXcd projection(const SpectralData& S, int j) {
  check_contour(S, j);
  const int a = 2 * j - 1, b = 2 * j;
  if (S.hermitian)
    return S.vectors.col(a) * S.vectors.col(a).adjoint() + S.vectors.col(b) * S.vectors.col(b).adjoint();
  return S.vectors.col(a) * S.left.row(a) + S.vectors.col(b) * S.left.row(b);
}

// Same projection by the trapezoid rule on the circle.
inline MatrixXcd projection_contour(const HillDiscretization& H, int j, int nodes = 64) {
  const int n = H.size();
  const double c = 0.25 * j * j, r = kContourDelta * j;
  MatrixXcd P = MatrixXcd::Zero(n, n);
  const MatrixXcd I = MatrixXcd::Identity(n, n);
  for (int q = 0; q < nodes; ++q) {
    const cplx e = std::polar(1.0, 2 * M_PI * q / nodes);
    const cplx lam = c + r * e;
    // -(1/2 pi i) (L - lam)^{-1} d lam with d lam = i r e dtheta.
    P -= (r * e / double(nodes)) * (H.matrix - lam * I).partialPivLu().solve(I);
  }
  return P;
}

// Projection onto span{e^{ijx/2}, e^{-ijx/2}}.
inline MatrixXcd unperturbed_projection(const HillDiscretization& H, int j) {
  MatrixXcd P0 = MatrixXcd::Zero(H.size(), H.size());
  P0(H.index(j), H.index(j)) = 1;
  P0(H.index(-j), H.index(-j)) = 1;
  return P0;
}

/// U_j = (I - (P_j - P_j0)^2)^{-1/2} P_j.
inline MatrixXcd transformation_operator(const MatrixXcd& P, const MatrixXcd& P0, bool hermitian = true) {
  const int n = int(P.rows());
  const MatrixXcd D = P - P0;
  const MatrixXcd S = D * D;
  MatrixXcd R;
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(S);
    if (es.info() != Eigen::Success) throw std::runtime_error("transformation_operator: solver failed");
    Eigen::VectorXd f(n);
    for (int k = 0; k < n; ++k) {
      const double mu = es.eigenvalues()(k);
      if (mu >= 1) throw std::domain_error("transformation_operator: spectral radius of (P - P0)^2 is not below 1");
      f(k) = 1 / std::sqrt(1 - std::max(mu, 0.0));
    }
    R = es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
  } else {
    Eigen::ComplexEigenSolver<MatrixXcd> es(S);
    if (es.info() != Eigen::Success) throw std::runtime_error("transformation_operator: solver failed");
    VectorXcd f(n);
    for (int k = 0; k < n; ++k) {
      const cplx mu = es.eigenvalues()(k);
      if (std::abs(mu) >= 1) throw std::domain_error("transformation_operator: spectral radius of (P - P0)^2 is not below 1");
      f(k) = 1.0 / std::sqrt(1.0 - mu);
    }
    R = es.eigenvectors() * f.asDiagonal() * es.eigenvectors().inverse();
  }
  return R * P;
}

struct ProjectionSet {
  int j = 0;
  MatrixXcd P, P0, U;
};

inline ProjectionSet projections(const HillDiscretization& H, const SpectralData& S, int j) {
  ProjectionSet p;
  p.j = j;
  p.P = projection(S, j);
  p.P0 = unperturbed_projection(H, j);
  p.U = transformation_operator(p.P, p.P0, S.hermitian);
  return p;
}

/// Birkhoff coordinates z_j(u) of one potential.
///
/// For real u the inverse square root is taken on the (at most four
/// dimensional) subspace spanned by E_j(u) and E_j0, outside of which
/// P_j - P_j0 vanishes.
class BirkhoffMap {
 public:
  BirkhoffMap(const ModeSequence& w, int K) : H_(assemble(w, K)), S_(eigen(H_)) {}

  const HillDiscretization& hill() const { return H_; }
  const SpectralData& spectrum() const { return S_; }

  // f_j = U_|j| f_j0 with f_j0 = e^{-ijx/2} / sqrt(2 pi).
  VectorXcd f(int j) const {
    const int a = std::abs(j);
    VectorXcd f0 = VectorXcd::Zero(H_.size());
    f0(H_.index(-j)) = std::sqrt(2.0);
    if (!S_.hermitian) return projections(H_, S_, a).U * f0;
    check_contour(S_, a);
    MatrixXcd Y(H_.size(), 2);
    Y.col(0) = S_.vectors.col(2 * a - 1);
    Y.col(1) = S_.vectors.col(2 * a);
    MatrixXcd span(H_.size(), 4);
    span << Y, MatrixXcd::Zero(H_.size(), 2);
    span(H_.index(a), 2) = 1;
    span(H_.index(-a), 3) = 1;
    Eigen::HouseholderQR<MatrixXcd> qr(span);
    const MatrixXcd Q = qr.householderQ() * MatrixXcd::Identity(H_.size(), 4);
    // D = P - P0 compressed to the span.
    MatrixXcd QY = Q.adjoint() * Y;
    MatrixXcd Q0(4, 2);
    Q0.col(0) = Q.row(H_.index(a)).adjoint();
    Q0.col(1) = Q.row(H_.index(-a)).adjoint();
    const MatrixXcd D4 = QY * QY.adjoint() - Q0 * Q0.adjoint();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(D4 * D4);
    Eigen::VectorXd g(4);
    for (int k = 0; k < 4; ++k) {
      const double mu = es.eigenvalues()(k);
      if (mu >= 1) throw std::domain_error("transformation_operator: spectral radius of (P - P0)^2 is not below 1");
      g(k) = 1 / std::sqrt(1 - std::max(mu, 0.0)) - 1;
    }
    const VectorXcd Pf = Y * (Y.adjoint() * f0);
    const MatrixXcd E = es.eigenvectors() * g.asDiagonal() * es.eigenvectors().adjoint();
    return Pf + Q * (E * (Q.adjoint() * Pf));
  }

  // z_j = -sqrt(pi) ((L - j^2/4) f_j, conj f_j), (f, g) = int_0^{4 pi} f conj(g).
  cplx z(int j) const {
    if (j == 0) throw std::invalid_argument("z_map: index must be nonzero");
    const VectorXcd fj = f(j);
    const VectorXcd Lf = H_.matrix * fj - (0.25 * j * j) * fj;
    cplx s = 0;
    for (int k = -H_.K; k <= H_.K; ++k) s += Lf(H_.index(k)) * fj(H_.index(-k));
    return -std::sqrt(M_PI) * s;
  }

  double gap(int j) const { return S_.gap(j); }

 private:
  HillDiscretization H_;
  SpectralData S_;
};

inline cplx z_map(const ModeSequence& w, int j, int K) { return BirkhoffMap(w, K).z(j); }

// w = D~ pi^{-1} v.
inline ModeSequence potential_from_v(const ModeSequence& v) { return diag_weight(reality_embed(v), 0.5); }

/// Psi^j(v) = j^{-1/2} z_j(u) for j = 1..J_out.
inline ModeSequence psi_map(const ModeSequence& v, int J_out, int K) {
  BirkhoffMap B(potential_from_v(v), K);
  ModeSequence out(IndexSet::positive, J_out);
  for (int j = 1; j <= J_out; ++j) out.at(j) = B.z(j) / std::sqrt(double(j));
  return out;
}

/// Fourier coefficients g_m (|m| <= K, g_0 = 0) of the L^2(0, 2 pi) gradient of
/// gamma_j^2, so that d gamma_j^2 (du) = int g du dx.
///
/// Uses the 2 x 2 block M_ab = <L y_b, y_a> on E_j: gamma^2 = (M11 - M22)^2 + 4 |M12|^2,
/// which stays smooth through degenerate pairs.
inline ModeSequence gap_gradient(const BirkhoffMap& B, int j) {
  const auto& H = B.hill();
  const auto& S = B.spectrum();
  if (!S.hermitian) throw std::domain_error("gap_gradient: real potential required");
  const int K = H.K;
  const VectorXcd y1 = S.vectors.col(2 * j - 1), y2 = S.vectors.col(2 * j);
  auto M = [&](const VectorXcd& a, const VectorXcd& b) { return a.dot(H.matrix * b); };
  const cplx m11 = M(y1, y1), m22 = M(y2, y2), m12 = M(y1, y2);
  // Gradient coefficients of M_ab: -(1/2 pi) sum_k c^b_k conj(c^a_{k-2m}).
  auto grad = [&](const VectorXcd& a, const VectorXcd& b, int m) {
    cplx s = 0;
    for (int k = -K; k <= K; ++k) {
      const int kp = k - 2 * m;
      if (kp < -K || kp > K) continue;
      s += b(H.index(k)) * std::conj(a(H.index(kp)));
    }
    return -s / (2 * M_PI);
  };
  ModeSequence g(IndexSet::symmetric, K);
  const double d = (m11 - m22).real();
  for (int m = -K; m <= K; ++m) {
    if (m == 0) continue;
    const cplx g11 = grad(y1, y1, m), g22 = grad(y2, y2, m);
    const cplx g12 = grad(y1, y2, m), g12n = grad(y1, y2, -m);
    g.at(m) = 2 * d * (g11 - g22) + 4.0 * (std::conj(m12) * g12 + m12 * std::conj(g12n));
  }
  return g;
}

// int_0^{2 pi} g du dx for du = (1/(2 sqrt pi)) sum w_m e^{imx}.
inline cplx gradient_pairing(const ModeSequence& g, const ModeSequence& dw) {
  cplx s = 0;
  for (int m = -g.cutoff(); m <= g.cutoff(); ++m)
    if (m != 0) s += g[m] * dw[-m];
  return 2 * M_PI * s / (2 * std::sqrt(M_PI));
}

struct BracketValue {
  double value = 0;
  double scale = 0;
};

// {F, G}_nu = int grad F d/dx grad G dx, with the matching modulus scale.
inline BracketValue nu_bracket(const ModeSequence& a, const ModeSequence& b) {
  cplx s = 0;
  double sc = 0;
  const int M = std::min(a.cutoff(), b.cutoff());
  for (int m = -M; m <= M; ++m) {
    if (m == 0) continue;
    s += a[-m] * cplx(0, m) * b[m];
    sc += std::abs(m) * std::abs(a[-m]) * std::abs(b[m]);
  }
  return {2 * M_PI * s.real(), 2 * M_PI * sc};
}

}  // namespace vey
