#pragma once

#include <stdexcept>

#include "operator_germ.hpp"

namespace vey {

/// One-form xi |-> <W(v), xi>.
struct OneFormGerm {
  Germ W;
};

/// Two-form (xi, eta) |-> <Jbar(v) xi, eta>.
struct TwoFormGerm {
  GermMatrix Jbar;
};

inline GermMatrix multiply_by_i(int J) { return GermMatrix::scalar(J, cplx(0.0, 1.0)); }

inline TwoFormGerm omega0(int J) { return {multiply_by_i(J)}; }

inline double evaluate(const OneFormGerm& a, const std::vector<cplx>& v, const std::vector<cplx>& xi) {
  return pairing(evaluate(a.W, v), xi);
}
inline double evaluate(const TwoFormGerm& w, const std::vector<cplx>& v, const std::vector<cplx>& xi,
                       const std::vector<cplx>& eta) {
  return pairing(apply_at(w.Jbar, v, xi), eta);
}

// G^* omega_0: Jbar = dG^* i dG.
inline TwoFormGerm pullback_omega0(const Germ& G) {
  const GermMatrix D = differential(G);
  GermMatrix iD = D * cplx(0.0, 1.0);
  GermMatrix J1 = adjoint(D) * iD;
  J1.purge();
  return {std::move(J1)};
}

// Pullback of a general two-form by F: dF^* Jbar(F) dF.
inline TwoFormGerm pullback(const TwoFormGerm& w, const Germ& F) {
  const GermMatrix D = differential(F);
  GermMatrix inner = compose(w.Jbar, F) * D;
  GermMatrix out = adjoint(D) * inner;
  out.purge();
  return {std::move(out)};
}

/// W(v) = int_0^1 Ups(tv) tv dt for Ups vanishing at the origin.
inline OneFormGerm primitive(const TwoFormGerm& w) {
  const GermMatrix& U = w.Jbar;
  if (U.max_abs_in(0, 0) > 0) throw std::domain_error("primitive: form must vanish at the origin");
  Germ Uv = act(U, Germ::identity(U.J, kMaxDegree));
  for (auto& p : Uv.comp) p = p.scaled_by([](const Monomial& m) { return cplx(1.0 / (m.degree() + 1)); });
  Uv.purge();
  return {std::move(Uv)};
}

// d(W dv) = dW - dW^* as an operator.
inline TwoFormGerm exterior_derivative(const OneFormGerm& a) {
  const GermMatrix D = differential(a.W);
  GermMatrix out = D - adjoint(D);
  out.purge();
  return {std::move(out)};
}

// V | omega: the one-form <Jbar V, .>.
inline OneFormGerm interior_product(const Germ& V, const TwoFormGerm& w) { return {act(w.Jbar, V)}; }

/// J^tau = -(i + tau Ups)^{-1} = (sum_q (tau i Ups)^q) i, exact under truncation.
inline TauGermMatrix neumann_inverse(const GermMatrix& Ups) {
  if (Ups.max_abs_in(0, 0) > 0) throw std::domain_error("neumann_inverse: perturbation has a constant part");
  const int J = Ups.J;
  TauGermMatrix X = lift(Ups * cplx(0.0, 1.0));
  X *= TauPoly::tau();
  TauGermMatrix term = TauGermMatrix::scalar(J, 1.0);
  TauGermMatrix sum = term;
  while (true) {
    term = term * X;
    term.purge();
    bool any = false;
    for (const auto& p : term.a) any = any || !p.empty();
    for (const auto& p : term.b) any = any || !p.empty();
    if (!any) break;
    sum += term;
  }
  sum.lower_cap(Ups.cap());
  TauGermMatrix out = sum * TauGermMatrix::scalar(J, cplx(0.0, 1.0));
  out.purge();
  return out;
}

// Antisymmetry defect max |<Jbar xi, eta> + <Jbar eta, xi>| over given samples.
inline double antisymmetry_defect(const GermMatrix& X, const std::vector<cplx>& v, const std::vector<cplx>& xi,
                                  const std::vector<cplx>& eta) {
  return std::abs(pairing(apply_at(X, v, xi), eta) + pairing(apply_at(X, v, eta), xi));
}

}  // namespace vey
