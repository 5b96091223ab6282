#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "coeff.hpp"

namespace vey {

enum class IndexSet { positive, symmetric };

/// Finitely supported sequence over j = 1..J (positive) or 0 < |j| <= J (symmetric).
class ModeSequence {
 public:
  ModeSequence() = default;
  ModeSequence(IndexSet s, int J) : set_(s), J_(J), d_(std::size_t(s == IndexSet::positive ? J : 2 * J + 1)) {
    if (J < 0) throw std::invalid_argument("negative cutoff");
  }
  static ModeSequence positive(std::vector<cplx> v) {
    ModeSequence s(IndexSet::positive, int(v.size()));
    s.d_ = std::move(v);
    return s;
  }

  IndexSet index_set() const { return set_; }
  int cutoff() const { return J_; }

  bool contains(int j) const {
    if (j == 0) return false;
    if (set_ == IndexSet::positive) return j >= 1 && j <= J_;
    return std::abs(j) <= J_;
  }
  cplx operator[](int j) const { return contains(j) ? d_[slot(j)] : cplx{}; }
  cplx& at(int j) {
    if (!contains(j)) throw std::out_of_range("mode outside the index set");
    return d_[slot(j)];
  }

  // Positive-mode entries as a dense vector (index 0 is mode 1).
  std::vector<cplx> positive_part() const {
    std::vector<cplx> v(static_cast<std::size_t>(J_));
    for (int j = 1; j <= J_; ++j) v[std::size_t(j - 1)] = (*this)[j];
    return v;
  }

  // w_{-j} = conj(w_j) within tol.
  bool is_real(double tol = 1e-14) const {
    if (set_ != IndexSet::symmetric) return false;
    for (int j = 1; j <= J_; ++j)
      if (std::abs((*this)[-j] - std::conj((*this)[j])) > tol) return false;
    return true;
  }

  // Largest |j| with a nonzero entry.
  int bandwidth() const {
    int b = 0;
    for (int j = 1; j <= J_; ++j)
      if ((*this)[j] != cplx{} || (*this)[-j] != cplx{}) b = j;
    return b;
  }

  ModeSequence& operator*=(cplx s) {
    for (auto& x : d_) x *= s;
    return *this;
  }
  friend ModeSequence operator*(ModeSequence a, cplx s) { return a *= s; }
  friend ModeSequence operator+(ModeSequence a, const ModeSequence& b) {
    if (a.set_ != b.set_ || a.J_ != b.J_) throw std::invalid_argument("sequence shapes differ");
    for (std::size_t i = 0; i < a.d_.size(); ++i) a.d_[i] += b.d_[i];
    return a;
  }
  friend ModeSequence operator-(ModeSequence a, const ModeSequence& b) { return a + b * cplx(-1.0); }

 private:
  std::size_t slot(int j) const { return std::size_t(set_ == IndexSet::positive ? j - 1 : j + J_); }

  IndexSet set_ = IndexSet::positive;
  int J_ = 0;
  std::vector<cplx> d_;
};

/// Samples of u on the uniform grid x_l = 2 pi l / n, n a power of two.
struct GridFunction {
  std::vector<cplx> samples;

  int size() const { return int(samples.size()); }
  double x(int l) const { return 2 * M_PI * l / size(); }
};

inline double sobolev_norm(const ModeSequence& w, double m) {
  double s = 0;
  const int J = w.cutoff();
  for (int j = -J; j <= J; ++j)
    if (w.contains(j)) s += std::pow(double(std::abs(j)), 2 * m) * std::norm(w[j]);
  return std::sqrt(s);
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// w_j = 2 sqrt(pi) * (j-th discrete Fourier coefficient), 0 < |j| <= J.
inline ModeSequence fourier_analyze(const GridFunction& u, int J, double mean_tol = 1e-12) {
  const int n = u.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("grid size must be a power of two");
  if (n < 4 * J) throw std::invalid_argument("grid does not resolve the requested modes");
  Eigen::FFT<double> fft;
  std::vector<cplx> X;
  fft.fwd(X, u.samples);
  double scale = 0;
  for (const auto& s : u.samples) scale = std::max(scale, std::abs(s));
  if (std::abs(X[0]) / n > mean_tol * std::max(1.0, scale)) throw std::domain_error("potential has nonzero mean");
  ModeSequence w(IndexSet::symmetric, J);
  const double c = 2 * std::sqrt(M_PI) / n;
  for (int j = 1; j <= J; ++j) {
    w.at(j) = c * X[std::size_t(j)];
    w.at(-j) = c * X[std::size_t(n - j)];
  }
  return w;
}

// u(x_l) = (1 / 2 sqrt(pi)) sum_j w_j e^{i j x_l}.
inline GridFunction fourier_synthesize(const ModeSequence& w, int n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("grid size must be a power of two");
  const int J = w.cutoff();
  if (n < 4 * J) throw std::invalid_argument("grid does not resolve the requested modes");
  std::vector<cplx> X(static_cast<std::size_t>(n));
  for (int j = 1; j <= J; ++j) {
    X[std::size_t(j)] = w[j];
    X[std::size_t(n - j)] = w[-j];
  }
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  GridFunction u;
  fft.inv(u.samples, X);
  for (auto& s : u.samples) s /= 2 * std::sqrt(M_PI);
  return u;
}

// D~^{2r}-style weights: mode j scaled by |j|^r.
inline ModeSequence diag_weight(const ModeSequence& w, double r) {
  ModeSequence out = w;
  const int J = w.cutoff();
  for (int j = -J; j <= J; ++j)
    if (w.contains(j)) out.at(j) *= std::pow(double(std::abs(j)), r);
  return out;
}

// T: v_j = u_j j^{-1/2}.
inline ModeSequence weight_forward(const ModeSequence& u) { return diag_weight(u, -0.5); }
inline ModeSequence weight_backward(const ModeSequence& v) { return diag_weight(v, 0.5); }

// pi: keep the positive modes.
inline ModeSequence reality_project(const ModeSequence& v) {
  ModeSequence out(IndexSet::positive, v.cutoff());
  for (int j = 1; j <= v.cutoff(); ++j) out.at(j) = v[j];
  return out;
}

// pi^{-1}: v'_j = v_j, v'_{-j} = conj(v_j).
inline ModeSequence reality_embed(const ModeSequence& v) {
  ModeSequence out(IndexSet::symmetric, v.cutoff());
  for (int j = 1; j <= v.cutoff(); ++j) {
    out.at(j) = v[j];
    out.at(-j) = std::conj(v[j]);
  }
  return out;
}

}  // namespace vey
