#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "coeff.hpp"
#include "monomial.hpp"

namespace vey {

// Coefficients smaller than this are dropped after algebraic operations.
inline constexpr double kPurgeEps = 1e-15;

/// Truncated polynomial in u_j, conj(u_j) with coefficients in C.
///
/// `cap` is the degree through which the polynomial is known; terms above it are
/// never stored. Products and sums propagate caps so that every stored
/// coefficient is exact given exact inputs.
template <class C>
class Polynomial {
 public:
  using Map = std::map<Monomial, C>;

  explicit Polynomial(int cap = kMaxDegree) : cap_(std::clamp(cap, -1, kMaxDegree)) {}

  static Polynomial constant(const C& c, int cap = kMaxDegree) {
    Polynomial p(cap);
    p.add(Monomial{}, c);
    return p;
  }
  static Polynomial variable(int mode, bool conj, int cap = kMaxDegree) {
    Polynomial p(cap);
    p.add(Monomial::variable(mode, conj), C(cplx(1.0)));
    return p;
  }

  int cap() const { return cap_; }
  const Map& terms() const { return t_; }
  bool empty() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  int low() const { return t_.empty() ? cap_ + 1 : t_.begin()->first.degree(); }
  int top() const { return t_.empty() ? -1 : t_.rbegin()->first.degree(); }

  C coeff(const Monomial& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? C{} : it->second;
  }

  void add(const Monomial& m, const C& c) {
    if (m.degree() > cap_ || is_zero(c)) return;
    auto [it, fresh] = t_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (is_zero(it->second)) t_.erase(it);
    }
  }

  void lower_cap(int cap) {
    cap = std::min(cap, cap_);
    if (cap == cap_) return;
    cap_ = std::max(cap, -1);
    while (!t_.empty() && t_.rbegin()->first.degree() > cap_) t_.erase(std::prev(t_.end()));
  }
  Polynomial truncated(int cap) const {
    Polynomial p = *this;
    p.lower_cap(cap);
    return p;
  }

  Polynomial homogeneous(int d) const {
    Polynomial p(cap_);
    for (const auto& [m, c] : t_)
      if (m.degree() == d) p.t_.emplace_hint(p.t_.end(), m, c);
    return p;
  }
  Polynomial degree_range(int lo, int hi) const {
    Polynomial p(cap_);
    for (const auto& [m, c] : t_)
      if (m.degree() >= lo && m.degree() <= hi) p.t_.emplace_hint(p.t_.end(), m, c);
    return p;
  }

  Polynomial& operator+=(const Polynomial& o) {
    lower_cap(o.cap_);
    for (const auto& [m, c] : o.t_) add(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    lower_cap(o.cap_);
    for (const auto& [m, c] : o.t_) add(m, -c);
    return *this;
  }
  Polynomial& operator*=(const C& s) {
    if (is_zero(s)) {
      t_.clear();
      return *this;
    }
    for (auto it = t_.begin(); it != t_.end();) {
      it->second = it->second * s;
      it = is_zero(it->second) ? t_.erase(it) : std::next(it);
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= C(cplx(-1.0)); }
  friend Polynomial operator*(Polynomial a, const C& s) { return a *= s; }
  friend Polynomial operator*(const C& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    const int cap = std::min({a.cap_ + b.low(), b.cap_ + a.low(), kMaxDegree});
    Polynomial p(cap);
    for (const auto& [ma, ca] : a.t_) {
      if (ma.degree() + b.low() > cap) break;
      for (const auto& [mb, cb] : b.t_) {
        if (ma.degree() + mb.degree() > cap) break;
        p.add(*ma.times(mb), ca * cb);
      }
    }
    return p;
  }

  // Pointwise complex conjugate as a function of u.
  Polynomial conj() const {
    Polynomial p(cap_);
    using std::conj;
    for (const auto& [m, c] : t_) p.t_.emplace(m.conj(), conj(c));
    return p;
  }

  // Partial derivative in the variable with the given code (u_j or conj(u_j)).
  Polynomial derivative(int code) const {
    Polynomial p(cap_ - 1);
    for (const auto& [m, c] : t_) {
      auto [n, q] = m.derive(code);
      if (n) p.add(q, c * C(cplx(double(n))));
    }
    return p;
  }

  // Multiplies each coefficient by f(monomial), a complex scalar.
  template <class F>
  Polynomial scaled_by(F f) const {
    Polynomial p(cap_);
    for (const auto& [m, c] : t_) {
      const cplx s = f(m);
      if (s != cplx{}) p.add(m, c * C(s));
    }
    return p;
  }

  template <class F>
  Polynomial filtered(F keep) const {
    Polynomial p(cap_);
    for (const auto& [m, c] : t_)
      if (keep(m)) p.t_.emplace_hint(p.t_.end(), m, c);
    return p;
  }

  template <class D, class F>
  Polynomial<D> map_coefficients(F f) const {
    Polynomial<D> p(cap_);
    for (const auto& [m, c] : t_) p.add(m, f(c));
    return p;
  }

  C evaluate(const std::vector<cplx>& u) const {
    C s{};
    for (const auto& [m, c] : t_) s += c * C(monomial_value(m, u));
    return s;
  }

  double max_abs() const {
    double r = 0;
    for (const auto& [m, c] : t_) r = std::max(r, magnitude(c));
    return r;
  }

  void purge(double eps = kPurgeEps) {
    for (auto it = t_.begin(); it != t_.end();) {
      it->second = purged(it->second, eps);
      it = is_zero(it->second) ? t_.erase(it) : std::next(it);
    }
  }

  static cplx monomial_value(const Monomial& m, const std::vector<cplx>& u) {
    cplx s = 1.0;
    for (int i = 0; i < m.degree(); ++i) {
      const int c = m.code(i);
      const std::size_t j = std::size_t(var_mode(c) - 1);
      const cplx x = j < u.size() ? u[j] : cplx{};
      s *= var_is_conj(c) ? std::conj(x) : x;
    }
    return s;
  }

 private:
  int cap_;
  Map t_;
};

using ScalarGerm = Polynomial<cplx>;

// Real part (p + conj p)/2 of a scalar germ.
template <class C>
Polynomial<C> real_part(const Polynomial<C>& p) {
  Polynomial<C> r = p + p.conj();
  r *= C(cplx(0.5));
  return r;
}

// Max |coefficient| over stored terms of degree lo..hi.
template <class C>
double max_abs_in(const Polynomial<C>& p, int lo, int hi) {
  double r = 0;
  for (const auto& [m, c] : p.terms())
    if (m.degree() >= lo && m.degree() <= hi) r = std::max(r, magnitude(c));
  return r;
}

}  // namespace vey
