#pragma once

#include <vector>

#include "germ.hpp"

namespace vey {

/// Real-linear operator on C^J depending polynomially on u:
///   xi |-> A(u) xi + B(u) conj(xi).
/// Two-forms, differentials and their adjoints all live here; the B block is
/// what a plain J x J complex matrix cannot carry.
template <class C>
struct OperatorGerm {
  int J = 0;
  std::vector<Polynomial<C>> a, b;  // row-major, entry (k, r) at (k-1)*J + (r-1)

  OperatorGerm() = default;
  OperatorGerm(int modes, int cap)
      : J(modes), a(std::size_t(modes * modes), Polynomial<C>(cap)), b(std::size_t(modes * modes), Polynomial<C>(cap)) {}

  // s * identity (complex-linear), exact.
  static OperatorGerm scalar(int modes, cplx s, int cap = kMaxDegree) {
    OperatorGerm op(modes, cap);
    for (int k = 1; k <= modes; ++k) op.A(k, k).add(Monomial{}, C(s));
    return op;
  }

  Polynomial<C>& A(int k, int r) { return a[idx(k, r)]; }
  Polynomial<C>& B(int k, int r) { return b[idx(k, r)]; }
  const Polynomial<C>& A(int k, int r) const { return a[idx(k, r)]; }
  const Polynomial<C>& B(int k, int r) const { return b[idx(k, r)]; }

  int cap() const {
    int c = kMaxDegree;
    for (const auto& p : a) c = std::min(c, p.cap());
    for (const auto& p : b) c = std::min(c, p.cap());
    return c;
  }
  int min_degree() const {
    int d = kMaxDegree + 1;
    for (const auto& p : a) d = std::min(d, p.low());
    for (const auto& p : b) d = std::min(d, p.low());
    return d;
  }

  OperatorGerm& operator+=(const OperatorGerm& o) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] += o.a[i];
      b[i] += o.b[i];
    }
    return *this;
  }
  OperatorGerm& operator-=(const OperatorGerm& o) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] -= o.a[i];
      b[i] -= o.b[i];
    }
    return *this;
  }
  // Scalar multiple; a real scalar keeps the operator real-linear in the obvious way,
  // a complex scalar s acts as multiplication by s on the output.
  OperatorGerm& operator*=(const C& s) {
    for (auto& p : a) p *= s;
    for (auto& p : b) p *= s;
    return *this;
  }
  friend OperatorGerm operator+(OperatorGerm x, const OperatorGerm& y) { return x += y; }
  friend OperatorGerm operator-(OperatorGerm x, const OperatorGerm& y) { return x -= y; }
  friend OperatorGerm operator*(OperatorGerm x, const C& s) { return x *= s; }
  friend OperatorGerm operator*(const C& s, OperatorGerm x) { return x *= s; }

  template <class F>
  OperatorGerm each(F f) const {
    OperatorGerm o;
    o.J = J;
    for (const auto& p : a) o.a.push_back(f(p));
    for (const auto& p : b) o.b.push_back(f(p));
    return o;
  }
  OperatorGerm truncated(int cap) const {
    return each([cap](const Polynomial<C>& p) { return p.truncated(cap); });
  }
  OperatorGerm degree_range(int lo, int hi) const {
    return each([lo, hi](const Polynomial<C>& p) { return p.degree_range(lo, hi); });
  }
  void lower_cap(int cap) {
    for (auto& p : a) p.lower_cap(cap);
    for (auto& p : b) p.lower_cap(cap);
  }
  void purge(double eps = kPurgeEps) {
    for (auto& p : a) p.purge(eps);
    for (auto& p : b) p.purge(eps);
  }
  double max_abs() const {
    double r = 0;
    for (const auto& p : a) r = std::max(r, p.max_abs());
    for (const auto& p : b) r = std::max(r, p.max_abs());
    return r;
  }
  double max_abs_in(int lo, int hi) const {
    double r = 0;
    for (const auto& p : a) r = std::max(r, vey::max_abs_in(p, lo, hi));
    for (const auto& p : b) r = std::max(r, vey::max_abs_in(p, lo, hi));
    return r;
  }

 private:
  std::size_t idx(int k, int r) const { return std::size_t((k - 1) * J + (r - 1)); }
};

using GermMatrix = OperatorGerm<cplx>;
using TauGermMatrix = OperatorGerm<TauPoly>;

// Operator product X o Y: (A1 A2 + B1 conj(B2), A1 B2 + B1 conj(A2)).
template <class C>
OperatorGerm<C> operator*(const OperatorGerm<C>& X, const OperatorGerm<C>& Y) {
  const int J = X.J;
  const int cap = std::min(X.cap() + Y.min_degree(), Y.cap() + X.min_degree());
  OperatorGerm<C> Z(J, std::min(cap, kMaxDegree));
  std::vector<Polynomial<C>> ya_conj, yb_conj;
  for (const auto& p : Y.a) ya_conj.push_back(p.conj());
  for (const auto& p : Y.b) yb_conj.push_back(p.conj());
  for (int k = 1; k <= J; ++k)
    for (int r = 1; r <= J; ++r) {
      Polynomial<C> za(Z.cap()), zb(Z.cap());
      for (int s = 1; s <= J; ++s) {
        const auto& xa = X.A(k, s);
        const auto& xb = X.B(k, s);
        const std::size_t sr = std::size_t((s - 1) * J + (r - 1));
        if (!xa.empty()) {
          if (!Y.a[sr].empty()) za += xa * Y.a[sr];
          if (!Y.b[sr].empty()) zb += xa * Y.b[sr];
        }
        if (!xb.empty()) {
          if (!yb_conj[sr].empty()) za += xb * yb_conj[sr];
          if (!ya_conj[sr].empty()) zb += xb * ya_conj[sr];
        }
      }
      za.lower_cap(Z.cap());
      zb.lower_cap(Z.cap());
      za.purge();
      zb.purge();
      Z.A(k, r) = std::move(za);
      Z.B(k, r) = std::move(zb);
    }
  return Z;
}

// X(u) applied to the germ xi(u).
template <class C>
VectorGerm<C> act(const OperatorGerm<C>& X, const VectorGerm<C>& xi) {
  const int J = X.J;
  VectorGerm<C> out;
  std::vector<Polynomial<C>> xi_conj;
  for (const auto& p : xi.comp) xi_conj.push_back(p.conj());
  for (int k = 1; k <= J; ++k) {
    Polynomial<C> acc;
    for (int r = 1; r <= J; ++r) {
      if (!X.A(k, r).empty() && !xi(r).empty()) acc += X.A(k, r) * xi(r);
      if (!X.B(k, r).empty() && !xi_conj[std::size_t(r - 1)].empty()) acc += X.B(k, r) * xi_conj[std::size_t(r - 1)];
    }
    // Known only as far as the inputs are.
    int cap = kMaxDegree;
    for (int r = 1; r <= J; ++r) {
      cap = std::min(cap, X.A(k, r).cap() + xi.min_degree());
      cap = std::min(cap, X.B(k, r).cap() + xi.min_degree());
      cap = std::min(cap, xi(r).cap() + X.min_degree());
    }
    acc.lower_cap(cap);
    acc.purge();
    out.comp.push_back(std::move(acc));
  }
  return out;
}

// Numeric action at a point: (A(u) xi + B(u) conj xi).
inline std::vector<cplx> apply_at(const GermMatrix& X, const std::vector<cplx>& u, const std::vector<cplx>& xi) {
  std::vector<cplx> out(static_cast<std::size_t>(X.J));
  for (int k = 1; k <= X.J; ++k)
    for (int r = 1; r <= X.J; ++r) {
      const cplx x = xi[std::size_t(r - 1)];
      out[std::size_t(k - 1)] += X.A(k, r).evaluate(u) * x + X.B(k, r).evaluate(u) * std::conj(x);
    }
  return out;
}

// <a, b> = Re sum a_j conj(b_j).
inline double pairing(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  double s = 0;
  for (std::size_t j = 0; j < x.size() && j < y.size(); ++j) s += (x[j] * std::conj(y[j])).real();
  return s;
}

// dF(u) xi = A xi + B conj(xi), A = dF/du, B = dF/dconj(u).
template <class C>
OperatorGerm<C> differential(const VectorGerm<C>& F) {
  const int J = F.modes();
  OperatorGerm<C> D(J, std::max(F.cap() - 1, -1));
  for (int k = 1; k <= J; ++k)
    for (int r = 1; r <= J; ++r) {
      D.A(k, r) = F(k).derivative(var_code(r, false));
      D.B(k, r) = F(k).derivative(var_code(r, true));
    }
  return D;
}

enum class AdjointKind { conjugate, transpose };

/// Adjoint of a real-linear operator germ.
///
/// conjugate: <X xi, eta> = <xi, X* eta> for the real pairing; (A, B) -> (A^H, B^T).
/// transpose: Re (X h, conj g) = Re (h, conj(X^t g)) with the complex bilinear
/// product; (A, B) -> (A^T, B^H). For B = 0 the identity holds without Re.
template <class C>
OperatorGerm<C> adjoint(const OperatorGerm<C>& X, AdjointKind kind = AdjointKind::conjugate) {
  const int J = X.J;
  OperatorGerm<C> Y(J, X.cap());
  for (int k = 1; k <= J; ++k)
    for (int r = 1; r <= J; ++r) {
      if (kind == AdjointKind::conjugate) {
        Y.A(k, r) = X.A(r, k).conj();
        Y.B(k, r) = X.B(r, k);
      } else {
        Y.A(k, r) = X.A(r, k);
        Y.B(k, r) = X.B(r, k).conj();
      }
    }
  return Y;
}

template <class C>
OperatorGerm<C> adjoint_differential(const VectorGerm<C>& F, AdjointKind kind = AdjointKind::conjugate) {
  return adjoint(differential(F), kind);
}

// Entries composed with the map F: X(F(u)).
template <class C>
OperatorGerm<C> compose(const OperatorGerm<C>& X, const VectorGerm<C>& F) {
  Substitution<C> s(F);
  auto sub = [&s](const Polynomial<C>& p) {
    Polynomial<C> q = s.apply(p);
    q.purge();
    return q;
  };
  return X.each(sub);
}

template <class C>
OperatorGerm<C> conj_entries(const OperatorGerm<C>& X) {
  return X.each([](const Polynomial<C>& p) { return p.conj(); });
}

// Average of Phi^{-t} X(Phi^t u) Phi^t over mode j, or over all modes (j = 0).
template <class C>
OperatorGerm<C> angle_average(const OperatorGerm<C>& X, int j) {
  OperatorGerm<C> Y = X;
  for (int k = 1; k <= X.J; ++k)
    for (int r = 1; r <= X.J; ++r) {
      const int da = (j == k) - (j == r), db = (j == k) + (j == r);
      Y.A(k, r) = X.A(k, r).filtered([j, da](const Monomial& m) { return m.charge(j) == da; });
      Y.B(k, r) = X.B(k, r).filtered([j, db](const Monomial& m) { return m.charge(j) == db; });
    }
  return Y;
}
template <class C>
OperatorGerm<C> full_average(const OperatorGerm<C>& X) {
  OperatorGerm<C> Y = X;
  for (int k = 1; k <= X.J; ++k)
    for (int r = 1; r <= X.J; ++r) {
      Y.A(k, r) = X.A(k, r).filtered([k, r](const Monomial& m) { return charge_equals(m, {{k, 1}, {r, -1}}); });
      Y.B(k, r) = X.B(k, r).filtered([k, r](const Monomial& m) { return charge_equals(m, {{k, 1}, {r, 1}}); });
    }
  return Y;
}

inline TauGermMatrix lift(const GermMatrix& X) {
  TauGermMatrix Y;
  Y.J = X.J;
  auto up = [](const ScalarGerm& p) { return p.map_coefficients<TauPoly>([](cplx c) { return TauPoly(c); }); };
  for (const auto& p : X.a) Y.a.push_back(up(p));
  for (const auto& p : X.b) Y.b.push_back(up(p));
  return Y;
}

inline GermMatrix at_tau(const TauGermMatrix& X, double tau) {
  GermMatrix Y;
  Y.J = X.J;
  for (const auto& p : X.a) Y.a.push_back(p.map_coefficients<cplx>([tau](const TauPoly& c) { return c(tau); }));
  for (const auto& p : X.b) Y.b.push_back(p.map_coefficients<cplx>([tau](const TauPoly& c) { return c(tau); }));
  Y.purge();
  return Y;
}

}  // namespace vey
