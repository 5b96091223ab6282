#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "germ.hpp"
#include "phase_space.hpp"

namespace vey {

// Coefficient of w_k w_{j-k} in Z_2^j.
inline double kernel_Z2(int j, int k) {
  if (k == 0 || k == j) return 0;
  return 1.0 / (2 * std::sqrt(M_PI) * k * (k - j));
}

// Coefficient of w_{i1} w_{i2} w_{j-i1-i2} in the main sum of Z_3^j.
inline double kernel_Z3(int j, int i1, int i2) {
  const int s = i1 + i2;
  if (i1 == 0 || i2 == 0 || i1 == j || s == 0 || s == j) return 0;
  return 1.0 / (4 * M_PI * double(i1) * (i1 - j) * s * (s - j));
}

// Coefficient of w_j w_l w_{-l} in the correction sum of Z_3^j.
inline double kernel_Z3_correction(int j, int l) {
  if (l == 0 || l == j) return 0;
  return -1.0 / (4 * M_PI * double(l) * l * (l - j) * (l - j));
}

inline cplx eval_Z2(const ModeSequence& w, int j) {
  const int J = w.cutoff();
  cplx s = 0;
  for (int k = -J; k <= J; ++k) {
    const int r = j - k;
    if (k == 0 || r == 0 || std::abs(r) > J) continue;
    s += kernel_Z2(j, k) * w[k] * w[r];
  }
  return s;
}

inline cplx eval_Z3(const ModeSequence& w, int j) {
  const int J = w.cutoff();
  cplx s = 0;
  for (int i1 = -J; i1 <= J; ++i1)
    for (int i2 = -J; i2 <= J; ++i2) {
      const int i3 = j - i1 - i2;
      if (i3 == 0 || std::abs(i3) > J) continue;
      const double c = kernel_Z3(j, i1, i2);
      if (c != 0) s += c * w[i1] * w[i2] * w[i3];
    }
  cplx t = 0;
  for (int l = -J; l <= J; ++l) t += kernel_Z3_correction(j, l) * w[l] * w[-l];
  return s + w[j] * t;
}

// Symmetric kernel K_2^j(i1, i2) on i1 + i2 = j.
inline double sym_kernel2(int j, int i1, int i2) {
  if (i1 + i2 != j || i1 == 0 || i2 == 0) return 0;
  return 0.5 * (kernel_Z2(j, i1) + kernel_Z2(j, i2));
}

// Symmetric kernel K_3^j(i1, i2, i3) on i1 + i2 + i3 = j, both sums included.
inline double sym_kernel3(int j, int i1, int i2, int i3) {
  if (i1 + i2 + i3 != j || i1 == 0 || i2 == 0 || i3 == 0) return 0;
  const std::array<int, 3> x{i1, i2, i3};
  static constexpr int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  double s = 0;
  for (const auto& p : perm) {
    const int a = x[std::size_t(p[0])], b = x[std::size_t(p[1])], c = x[std::size_t(p[2])];
    s += kernel_Z3(j, a, b);
    if (a == j && b == -c) s += kernel_Z3_correction(j, b);
  }
  return s / 6;
}

// l^2 norms over Z0^n with all indices cut at |i| <= L.
inline double kernel_norm2(int j, int L) {
  double s = 0;
  for (int k = -L; k <= L; ++k) {
    const int r = j - k;
    if (std::abs(r) > L) continue;
    s += std::pow(sym_kernel2(j, k, r), 2);
  }
  return std::sqrt(s);
}

inline double kernel_norm3(int j, int L) {
  double s = 0;
  for (int a = -L; a <= L; ++a)
    for (int b = -L; b <= L; ++b) {
      const int c = j - a - b;
      if (std::abs(c) > L) continue;
      s += std::pow(sym_kernel3(j, a, b, c), 2);
    }
  return std::sqrt(s);
}

// ||B_3^j||: B_3^j(i1, i2, i3) = K_3^{i1}(j, i2, i3).
inline double reindexed_norm3(int j, int L) {
  double s = 0;
  for (int b = -L; b <= L; ++b)
    for (int c = -L; c <= L; ++c) {
      const int i1 = j + b + c;
      if (i1 == 0 || std::abs(i1) > L) continue;
      s += std::pow(sym_kernel3(i1, j, b, c), 2);
    }
  return std::sqrt(s);
}

// v'_k as a monomial: u_k for k > 0, conj(u_{-k}) for k < 0.
inline Monomial mode_variable(int k) { return Monomial::variable(std::abs(k), k < 0); }

/// Quadratic part of Psi: psi_2^j(v) = (1 / 2 sqrt(pi j)) sum_k |k|^{1/2}|j-k|^{1/2} / (k(k-j)) v'_k v'_{j-k}.
inline Germ psi2_germ(int J) {
  Germ g(J, 2);
  for (int j = 1; j <= J; ++j)
    for (int k = -J; k <= J; ++k) {
      const int r = j - k;
      if (k == 0 || r == 0 || std::abs(r) > J) continue;
      const double c = std::sqrt(std::abs(double(k)) * std::abs(double(r))) / (2 * std::sqrt(M_PI * j) * k * (k - j));
      g(j).add(*mode_variable(k).times(mode_variable(r)), c);
    }
  return g;
}

inline ModeSequence psi2(const ModeSequence& v) {
  const Germ g = psi2_germ(v.cutoff());
  return ModeSequence::positive(evaluate(g, v.positive_part()));
}

/// Truncated Birkhoff map Psi = pi D~^{-1} F(D~ pi^{-1} v) with F = id + Z_2 + Z_3.
inline Germ kdv_germ(int J, int N) {
  if (N < 1 || N > 3) throw std::invalid_argument("kdv_germ: closed-form kernels cover N <= 3");
  Germ g = Germ::identity(J, N);
  auto weight = [](int k) { return std::sqrt(std::abs(double(k))); };
  for (int j = 1; j <= J; ++j) {
    const double s = 1 / std::sqrt(double(j));
    if (N >= 2)
      for (int k = -J; k <= J; ++k) {
        const int r = j - k;
        if (k == 0 || r == 0 || std::abs(r) > J) continue;
        g(j).add(*mode_variable(k).times(mode_variable(r)), s * kernel_Z2(j, k) * weight(k) * weight(r));
      }
    if (N >= 3) {
      for (int i1 = -J; i1 <= J; ++i1)
        for (int i2 = -J; i2 <= J; ++i2) {
          const int i3 = j - i1 - i2;
          if (i3 == 0 || std::abs(i3) > J) continue;
          const double c = kernel_Z3(j, i1, i2);
          if (c == 0) continue;
          const Monomial m = *mode_variable(i1).times(mode_variable(i2))->times(mode_variable(i3));
          g(j).add(m, s * c * weight(i1) * weight(i2) * weight(i3));
        }
      for (int l = -J; l <= J; ++l) {
        const double c = kernel_Z3_correction(j, l);
        if (c == 0) continue;
        const Monomial m = *mode_variable(j).times(mode_variable(l))->times(mode_variable(-l));
        g(j).add(m, s * c * weight(j) * weight(l) * weight(l));
      }
    }
  }
  g.purge();
  return g;
}

}  // namespace vey
