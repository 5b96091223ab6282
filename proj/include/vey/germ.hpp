#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace vey {

/// Polynomial map of C^J (modes 1..J) truncated at a total degree.
template <class C>
struct VectorGerm {
  std::vector<Polynomial<C>> comp;  // comp[j-1] is the mode-j component

  VectorGerm() = default;
  VectorGerm(int J, int cap) : comp(std::size_t(J), Polynomial<C>(cap)) {}

  static VectorGerm identity(int J, int cap) {
    VectorGerm g(J, cap);
    for (int j = 1; j <= J; ++j) g(j).add(Monomial::variable(j, false), C(cplx(1.0)));
    return g;
  }

  int modes() const { return int(comp.size()); }
  Polynomial<C>& operator()(int j) { return comp.at(std::size_t(j - 1)); }
  const Polynomial<C>& operator()(int j) const { return comp.at(std::size_t(j - 1)); }

  int cap() const {
    int c = kMaxDegree;
    for (const auto& p : comp) c = std::min(c, p.cap());
    return c;
  }
  int min_degree() const {
    int d = kMaxDegree + 1;
    for (const auto& p : comp) d = std::min(d, p.low());
    return d;
  }
  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& p : comp) n += p.size();
    return n;
  }

  VectorGerm& operator+=(const VectorGerm& o) {
    check_same(o);
    for (std::size_t j = 0; j < comp.size(); ++j) comp[j] += o.comp[j];
    return *this;
  }
  VectorGerm& operator-=(const VectorGerm& o) {
    check_same(o);
    for (std::size_t j = 0; j < comp.size(); ++j) comp[j] -= o.comp[j];
    return *this;
  }
  VectorGerm& operator*=(const C& s) {
    for (auto& p : comp) p *= s;
    return *this;
  }
  friend VectorGerm operator+(VectorGerm a, const VectorGerm& b) { return a += b; }
  friend VectorGerm operator-(VectorGerm a, const VectorGerm& b) { return a -= b; }
  friend VectorGerm operator*(VectorGerm a, const C& s) { return a *= s; }
  friend VectorGerm operator*(const C& s, VectorGerm a) { return a *= s; }

  template <class F>
  VectorGerm each(F f) const {
    VectorGerm g;
    g.comp.reserve(comp.size());
    for (const auto& p : comp) g.comp.push_back(f(p));
    return g;
  }
  VectorGerm homogeneous(int d) const {
    return each([d](const Polynomial<C>& p) { return p.homogeneous(d); });
  }
  VectorGerm degree_range(int lo, int hi) const {
    return each([lo, hi](const Polynomial<C>& p) { return p.degree_range(lo, hi); });
  }
  VectorGerm truncated(int cap) const {
    return each([cap](const Polynomial<C>& p) { return p.truncated(cap); });
  }
  void lower_cap(int cap) {
    for (auto& p : comp) p.lower_cap(cap);
  }
  void purge(double eps = kPurgeEps) {
    for (auto& p : comp) p.purge(eps);
  }
  double max_abs() const {
    double r = 0;
    for (const auto& p : comp) r = std::max(r, p.max_abs());
    return r;
  }
  double max_abs_in(int lo, int hi) const {
    double r = 0;
    for (const auto& p : comp) r = std::max(r, vey::max_abs_in(p, lo, hi));
    return r;
  }

 private:
  void check_same(const VectorGerm& o) const {
    if (o.comp.size() != comp.size()) throw std::invalid_argument("germ mode counts differ");
  }
};

using Germ = VectorGerm<cplx>;
using TauGerm = VectorGerm<TauPoly>;

template <class C>
std::vector<C> evaluate(const VectorGerm<C>& F, const std::vector<cplx>& u) {
  std::vector<C> out;
  out.reserve(F.comp.size());
  for (const auto& p : F.comp) out.push_back(p.evaluate(u));
  return out;
}

/// Substitutes u_r -> F_r, conj(u_r) -> conj(F_r) into polynomials, caching
/// monomial powers of F so that all components share the work.
template <class C>
class Substitution {
 public:
  explicit Substitution(const VectorGerm<C>& F) : F_(F) {
    low_ = F.min_degree();
    if (low_ < 1) throw std::invalid_argument("substituted germ must vanish at the origin");
    for (const auto& p : F.comp) conjF_.push_back(p.conj());
  }

  const Polynomial<C>& power(const Monomial& m) {
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    Polynomial<C> value;
    if (m.degree() == 0) {
      value = Polynomial<C>::constant(C(cplx(1.0)));
    } else {
      std::vector<int> cs = m.codes();
      const int last = cs.back();
      cs.pop_back();
      const Polynomial<C>& head = power(Monomial::from_codes(cs));
      value = head * factor(last);
    }
    return memo_.emplace(m, std::move(value)).first->second;
  }

  Polynomial<C> apply(const Polynomial<C>& g) {
    const int cap = std::min(kMaxDegree, (g.cap() + 1) * low_ - 1);
    Polynomial<C> out(cap);
    for (const auto& [m, c] : g.terms()) {
      if (m.degree() * low_ > cap) break;
      const Polynomial<C>& pw = power(m);
      Polynomial<C> term = pw * c;
      out += term;
    }
    return out;
  }

 private:
  const Polynomial<C>& factor(int code) {
    const std::size_t j = std::size_t(var_mode(code) - 1);
    if (j >= F_.comp.size()) return zero_;
    return var_is_conj(code) ? conjF_[j] : F_.comp[j];
  }

  const VectorGerm<C>& F_;
  std::vector<Polynomial<C>> conjF_;
  std::map<Monomial, Polynomial<C>> memo_;
  Polynomial<C> zero_{kMaxDegree};
  int low_ = 1;
};

template <class C>
Polynomial<C> compose(const Polynomial<C>& g, const VectorGerm<C>& F) {
  Substitution<C> s(F);
  Polynomial<C> r = s.apply(g);
  r.purge();
  return r;
}

// G o F, truncated where the inputs stop being exact.
template <class C>
VectorGerm<C> compose(const VectorGerm<C>& G, const VectorGerm<C>& F) {
  Substitution<C> s(F);
  VectorGerm<C> out;
  out.comp.reserve(G.comp.size());
  for (const auto& p : G.comp) {
    out.comp.push_back(s.apply(p));
    out.comp.back().purge();
  }
  return out;
}

// Max deviation of the linear part of F from the identity.
template <class C>
double linear_defect(const VectorGerm<C>& F) {
  double d = 0;
  for (int j = 1; j <= F.modes(); ++j) {
    for (const auto& [m, c] : F(j).terms()) {
      if (m.degree() == 0) d = std::max(d, magnitude(c));
      if (m.degree() != 1) continue;
      const bool diag = m == Monomial::variable(j, false);
      d = std::max(d, magnitude(diag ? c - C(cplx(1.0)) : c));
    }
    if (F(j).coeff(Monomial::variable(j, false)) == C{}) d = std::max(d, 1.0);
  }
  return d;
}

/// Inverse germ, degree by degree: with G = id + G_2 + ..., the degree-d part is
/// fixed by the degree-d part of (F - id)(G) computed from G's lower parts.
inline Germ invert(const Germ& F, double tol = 1e-12) {
  if (linear_defect(F) > tol) throw std::domain_error("invert: linear part is not the identity");
  const int J = F.modes();
  const int N = F.cap();
  Germ F0 = F - Germ::identity(J, N);
  F0 = F0.degree_range(2, N);
  Germ G = Germ::identity(J, N);
  for (int d = 2; d <= N; ++d) {
    Germ T = compose(F0, G.degree_range(1, d - 1));
    G -= T.homogeneous(d);
  }
  G.purge();
  return G;
}

// |coefficients| at merged exponents |u|^(alpha+beta).
inline ScalarGerm majorant(const ScalarGerm& p) {
  ScalarGerm r(p.cap());
  for (const auto& [m, c] : p.terms()) r.add(m.merged(), std::abs(c));
  return r;
}
inline Germ majorant(const Germ& F) {
  return F.each([](const ScalarGerm& p) { return majorant(p); });
}

// Nonzero (mode, charge) pairs of a monomial, in increasing mode.
inline std::vector<std::pair<int, int>> charge_vector(const Monomial& m) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < m.degree(); ++i) {
    const int c = m.code(i);
    const int j = var_mode(c);
    const int q = var_is_conj(c) ? -1 : 1;
    if (!out.empty() && out.back().first == j) out.back().second += q;
    else out.emplace_back(j, q);
  }
  std::erase_if(out, [](const auto& e) { return e.second == 0; });
  return out;
}

// True when the charge vector of m equals sum of (mode, weight) pairs in `target`.
inline bool charge_equals(const Monomial& m, std::vector<std::pair<int, int>> target) {
  std::map<int, int> t;
  for (auto [j, q] : target) t[j] += q;
  std::erase_if(t, [](const auto& e) { return e.second == 0; });
  auto cv = charge_vector(m);
  if (cv.size() != t.size()) return false;
  std::size_t i = 0;
  for (auto [j, q] : t) {
    if (cv[i].first != j || cv[i].second != q) return false;
    ++i;
  }
  return true;
}

// Scalar averages: M_j keeps charge_j == 0; M keeps angle-free monomials.
template <class C>
Polynomial<C> angle_average(const Polynomial<C>& f, int j) {
  return f.filtered([j](const Monomial& m) { return m.charge(j) == 0; });
}
template <class C>
Polynomial<C> full_average(const Polynomial<C>& f) {
  return f.filtered([](const Monomial& m) { return charge_vector(m).empty(); });
}

// Vector germs average as one-forms / vector fields: Phi^{-t} F(Phi^t u).
template <class C>
VectorGerm<C> angle_average(const VectorGerm<C>& F, int j) {
  VectorGerm<C> out = F;
  for (int k = 1; k <= F.modes(); ++k)
    out(k) = F(k).filtered([j, k](const Monomial& m) { return m.charge(j) == (j == k ? 1 : 0); });
  return out;
}
template <class C>
VectorGerm<C> full_average(const VectorGerm<C>& F) {
  VectorGerm<C> out = F;
  for (int k = 1; k <= F.modes(); ++k)
    out(k) = F(k).filtered([k](const Monomial& m) { return charge_equals(m, {{k, 1}}); });
  return out;
}

// L_j: charge k at mode j is multiplied by pi (k = 0) or 1/(ik).
inline ScalarGerm weighted_average(const ScalarGerm& g, int j) {
  return g.scaled_by([j](const Monomial& m) {
    const int k = m.charge(j);
    return k == 0 ? cplx(M_PI) : 1.0 / cplx(0.0, double(k));
  });
}

// chi_j f = df/dphi_j: charge k at mode j is multiplied by ik.
template <class C>
Polynomial<C> angle_derivative(const Polynomial<C>& f, int j) {
  return f.scaled_by([j](const Monomial& m) { return cplx(0.0, double(m.charge(j))); });
}

// Component j is 2 d f / d conj(u_j).
template <class C>
VectorGerm<C> gradient(const Polynomial<C>& f, int J) {
  VectorGerm<C> g;
  for (int j = 1; j <= J; ++j) g.comp.push_back(f.derivative(var_code(j, true)) * C(cplx(2.0)));
  return g;
}

// {f, g} = <i grad f, grad g>, written with Wirtinger derivatives.
template <class C>
Polynomial<C> poisson_bracket(const Polynomial<C>& f, const Polynomial<C>& g, int J) {
  Polynomial<C> r;
  for (int k = 1; k <= J; ++k) {
    const int u = var_code(k, false), ub = var_code(k, true);
    Polynomial<C> t = f.derivative(ub) * g.derivative(u) - f.derivative(u) * g.derivative(ub);
    r += t;
  }
  r *= C(cplx(0.0, 2.0));
  r.purge();
  return r;
}

// Actions I_j = |u_j|^2 / 2 as exact scalar germs.
inline ScalarGerm action(int j) {
  ScalarGerm p;
  p.add(Monomial::from_codes({var_code(j, false), var_code(j, true)}), 0.5);
  return p;
}

// |F_j|^2 / 2 as a scalar germ.
template <class C>
Polynomial<C> half_modulus_squared(const Polynomial<C>& p) {
  Polynomial<C> r = p * p.conj();
  r *= C(cplx(0.5));
  return r;
}

inline TauGerm lift(const Germ& F) {
  TauGerm out;
  for (const auto& p : F.comp) out.comp.push_back(p.map_coefficients<TauPoly>([](cplx c) { return TauPoly(c); }));
  return out;
}

inline Germ at_tau(const TauGerm& F, double tau) {
  Germ out;
  for (const auto& p : F.comp) {
    out.comp.push_back(p.map_coefficients<cplx>([tau](const TauPoly& c) { return c(tau); }));
    out.comp.back().purge();
  }
  return out;
}

/// Flow of the field V^tau started at tau = 0, as a germ polynomial in tau.
///
/// Picard iteration phi <- id + int_0^tau V^s(phi^s) ds; with V of min degree 2
/// each sweep fixes one more homogeneous degree, so cap - 1 sweeps are exact.
inline TauGerm flow_family(const TauGerm& V) {
  const int J = V.modes();
  const int N = V.cap();
  if (V.min_degree() < 2) throw std::domain_error("flow: field must vanish to second order");
  TauGerm id = TauGerm::identity(J, N);
  TauGerm phi = id;
  for (int sweep = 1; sweep < N; ++sweep) {
    TauGerm rhs = compose(V, phi);
    TauGerm next = id;
    for (int j = 1; j <= J; ++j) {
      Polynomial<TauPoly> integrated(rhs(j).cap());
      for (const auto& [m, c] : rhs(j).terms()) integrated.add(m, c.integral());
      next(j) += integrated;
    }
    phi = std::move(next);
  }
  phi.purge();
  return phi;
}

inline Germ flow(const TauGerm& V) { return at_tau(flow_family(V), 1.0); }
inline Germ flow(const Germ& V) { return flow(lift(V)); }

}  // namespace vey
