#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace vey {

using cplx = std::complex<double>;

/// Polynomial in the homotopy parameter tau with complex coefficients.
class TauPoly {
 public:
  TauPoly() = default;
  TauPoly(cplx c) : c_{c} { trim(); }  // NOLINT(implicit)
  explicit TauPoly(std::vector<cplx> c) : c_(std::move(c)) { trim(); }

  static TauPoly tau() { return TauPoly(std::vector<cplx>{0.0, 1.0}); }

  int degree() const { return int(c_.size()) - 1; }
  const std::vector<cplx>& coefficients() const { return c_; }
  cplx operator[](int k) const { return k < int(c_.size()) ? c_[std::size_t(k)] : cplx{}; }
  bool empty() const { return c_.empty(); }

  cplx operator()(double t) const {
    cplx s = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * t + *it;
    return s;
  }

  // Antiderivative vanishing at tau = 0.
  TauPoly integral() const {
    std::vector<cplx> out(c_.size() + 1);
    for (std::size_t k = 0; k < c_.size(); ++k) out[k + 1] = c_[k] / double(k + 1);
    return TauPoly(std::move(out));
  }

  TauPoly& operator+=(const TauPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  TauPoly& operator-=(const TauPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  TauPoly& operator*=(cplx s) {
    for (auto& x : c_) x *= s;
    trim();
    return *this;
  }
  friend TauPoly operator+(TauPoly a, const TauPoly& b) { return a += b; }
  friend TauPoly operator-(TauPoly a, const TauPoly& b) { return a -= b; }
  friend TauPoly operator-(TauPoly a) { return a *= -1.0; }
  friend TauPoly operator*(TauPoly a, cplx s) { return a *= s; }
  friend TauPoly operator*(cplx s, TauPoly a) { return a *= s; }
  friend TauPoly operator*(const TauPoly& a, const TauPoly& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<cplx> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t k = 0; k < b.c_.size(); ++k) out[i + k] += a.c_[i] * b.c_[k];
    return TauPoly(std::move(out));
  }
  friend TauPoly conj(const TauPoly& a) {
    TauPoly r = a;
    for (auto& x : r.c_) x = std::conj(x);
    return r;
  }
  friend double magnitude(const TauPoly& a) {
    double m = 0;
    for (const auto& x : a.c_) m = std::max(m, std::abs(x));
    return m;
  }
  friend bool operator==(const TauPoly&, const TauPoly&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
  }
  std::vector<cplx> c_;
};

inline double magnitude(const cplx& z) { return std::abs(z); }

// Drops tau-coefficients below eps; complex scalars are left to the caller.
inline TauPoly purged(const TauPoly& a, double eps) {
  std::vector<cplx> c = a.coefficients();
  for (auto& x : c)
    if (std::abs(x) < eps) x = 0;
  return TauPoly(std::move(c));
}
inline cplx purged(const cplx& a, double eps) { return std::abs(a) < eps ? cplx{} : a; }

inline bool is_zero(const cplx& z) { return z == cplx{}; }
inline bool is_zero(const TauPoly& a) { return a.empty(); }

}  // namespace vey
