#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "forms.hpp"

namespace vey {

enum class Stage { input, post_step1, post_step2 };

struct NormalizationState {
  Germ Psi;
  Germ G;  // Psi^{-1}
  TwoFormGerm omega1;
  OneFormGerm alphaDelta;
  Stage stage = Stage::input;

  // Data of the most recent homotopy step, kept for verification.
  TauGerm flow_family;
  TauGermMatrix form_family;  // omega^tau used by that step
  Germ field_W, field_Y;
  std::vector<ScalarGerm> h;
  ScalarGerm f;
};

inline NormalizationState make_state(const Germ& Psi, Stage stage = Stage::input) {
  NormalizationState s;
  s.Psi = Psi;
  s.G = invert(Psi);
  s.omega1 = pullback_omega0(s.G);
  GermMatrix ups = s.omega1.Jbar - multiply_by_i(Psi.modes());
  ups.purge();
  s.alphaDelta = primitive({ups});
  s.stage = stage;
  return s;
}

class MoserIncompatible : public std::domain_error {
 public:
  MoserIncompatible(const std::string& what, int j, int k, double defect)
      : std::domain_error(what), j_(j), k_(k), defect_(defect) {}
  int j() const { return j_; }
  int k() const { return k_; }
  double defect() const { return defect_; }

 private:
  int j_, k_;
  double defect_;
};

struct MoserResult {
  ScalarGerm f;
  double mean_defect = 0;        // max_j |M h_j|
  double symmetry_defect = 0;    // max_{j,k} |chi_j h_k - chi_k h_j|
  int worst_j = 0, worst_k = 0;  // pair attaining symmetry_defect (j == k flags a mean defect)
};

/// f = sum_l M_1 ... M_{l-1} L_l h_l. In strict mode any violation of
/// chi_j h_k = chi_k h_j or M h_j = 0 above tol is rejected.
inline MoserResult moser_solve(const std::vector<ScalarGerm>& h, bool strict = true, double tol = 1e-10) {
  MoserResult r;
  const int J = int(h.size());
  for (int j = 1; j <= J; ++j) {
    const double d = full_average(h[std::size_t(j - 1)]).max_abs();
    if (d > r.mean_defect) {
      r.mean_defect = d;
      if (d > r.symmetry_defect) r.worst_j = r.worst_k = j;
    }
  }
  if (strict && r.mean_defect > tol)
    throw MoserIncompatible("moser_solve: h_" + std::to_string(r.worst_j) + " has a nonzero angle average",
                            r.worst_j, r.worst_j, r.mean_defect);
  for (int j = 1; j <= J; ++j)
    for (int k = j + 1; k <= J; ++k) {
      ScalarGerm d = angle_derivative(h[std::size_t(k - 1)], j) - angle_derivative(h[std::size_t(j - 1)], k);
      const double v = d.max_abs();
      if (v > r.symmetry_defect) {
        r.symmetry_defect = v;
        r.worst_j = j;
        r.worst_k = k;
      }
    }
  if (strict && r.symmetry_defect > tol)
    throw MoserIncompatible("moser_solve: incompatible pair (" + std::to_string(r.worst_j) + ", " +
                                std::to_string(r.worst_k) + ")",
                            r.worst_j, r.worst_k, r.symmetry_defect);
  int cap = kMaxDegree;
  for (const auto& p : h) cap = std::min(cap, p.cap());
  ScalarGerm f(cap);
  for (int l = 1; l <= J; ++l) {
    ScalarGerm t = weighted_average(h[std::size_t(l - 1)], l);
    t = t.filtered([l](const Monomial& m) {
      for (int i = 1; i < l; ++i)
        if (m.charge(i) != 0) return false;
      return true;
    });
    f += t;
  }
  f.purge();
  r.f = std::move(f);
  return r;
}

// h_j = <W, i v_j 1_j> = Re(W_j conj(i v_j)).
inline std::vector<ScalarGerm> angular_components(const Germ& W) {
  std::vector<ScalarGerm> h;
  for (int j = 1; j <= W.modes(); ++j) {
    ScalarGerm conj_iv;
    conj_iv.add(Monomial::variable(j, true), cplx(0.0, -1.0));
    ScalarGerm p = real_part(W(j) * conj_iv);
    p.purge();
    h.push_back(std::move(p));
  }
  return h;
}

/// Step 1: make the angle average of omega_1 equal to omega_0.
inline NormalizationState step1(const NormalizationState& in) {
  if (in.stage != Stage::input) throw std::logic_error("step1: state is not at the input stage");
  const int J = in.Psi.modes();
  GermMatrix ups = full_average(in.omega1.Jbar) - multiply_by_i(J);
  ups.purge();
  const TauGermMatrix Jhat = neumann_inverse(ups);
  const Germ MW = full_average(in.alphaDelta.W);
  TauGerm V = act(Jhat, lift(MW));
  V.purge();
  TauGerm family = flow_family(V);
  const Germ phi1 = at_tau(family, 1.0);
  NormalizationState out = make_state(compose(invert(phi1), in.Psi), Stage::post_step1);
  out.flow_family = std::move(family);
  TauGermMatrix form = lift(ups);
  form *= TauPoly::tau();
  out.form_family = lift(multiply_by_i(J)) + form;
  out.field_W = MW;
  return out;
}

struct NormalizeOptions {
  bool strict_moser = false;
  double moser_tol = 1e-10;
};

/// Step 2: remove the remainder with Moser's formula and the homotopy flow.
inline NormalizationState step2(const NormalizationState& in, const NormalizeOptions& opt = {},
                                MoserResult* moser = nullptr) {
  if (in.stage != Stage::post_step1) throw std::logic_error("step2: state has not been through step1");
  const int J = in.Psi.modes();
  const Germ& W = in.alphaDelta.W;
  std::vector<ScalarGerm> h = angular_components(W);
  MoserResult mr = moser_solve(h, opt.strict_moser, opt.moser_tol);
  const Germ Y = gradient(mr.f, J);
  GermMatrix ups = in.omega1.Jbar - multiply_by_i(J);
  ups.purge();
  const TauGermMatrix Jtau = neumann_inverse(ups);
  TauGerm V = act(Jtau, lift(W - Y));
  V.purge();
  TauGerm family = flow_family(V);
  const Germ phi1 = at_tau(family, 1.0);
  NormalizationState out = make_state(compose(invert(phi1), in.Psi), Stage::post_step2);
  out.flow_family = std::move(family);
  TauGermMatrix form = lift(ups);
  form *= TauPoly::tau();
  out.form_family = lift(multiply_by_i(J)) + form;
  out.field_W = W;
  out.field_Y = Y;
  out.h = std::move(h);
  out.f = mr.f;
  if (moser) *moser = std::move(mr);
  return out;
}

// Max coefficient of {|F_i|^2/2, |F_j|^2/2} over pairs i < j and degrees <= deg.
inline double commutation_residual(const Germ& F, int deg) {
  const int J = F.modes();
  std::vector<ScalarGerm> I;
  for (int j = 1; j <= J; ++j) I.push_back(half_modulus_squared(F(j)));
  double r = 0;
  for (int i = 1; i <= J; ++i)
    for (int j = i + 1; j <= J; ++j)
      r = std::max(r, max_abs_in(poisson_bracket(I[std::size_t(i - 1)], I[std::size_t(j - 1)], J), 0, deg));
  return r;
}

// Max coefficient of F^* omega_0 - omega_0 through the degree F determines.
inline double symplectic_residual(const Germ& F) {
  GermMatrix d = pullback_omega0(F).Jbar - multiply_by_i(F.modes());
  return d.max_abs_in(0, F.cap() - 1);
}

struct NormalFormReport {
  int J = 0, N = 0;
  double symplectic_residual = 0;          // (Psi+)^* omega0 - omega0, form degrees <= N-1
  std::vector<double> action_residuals;    // per j: I_j o phi^1 - I_j, degrees <= N
  std::vector<double> action_residuals_full;  // same through degree N+1
  double action_transfer = 0;              // I_j o Psi (post step 1) vs I_j o Psi+, degrees <= N
  double action_transfer_full = 0;         // same through degree N+1
  double closeness = 0;                    // degree-2 part of Psi+ - Psi
  double commutation_input = 0;            // degrees <= N
  double commutation_input_full = 0;       // degrees <= N+1
  double commutation_output = 0;
  double commutation_output_full = 0;
  double step1_average_residual = 0;       // M omega_1 - omega_0 after step 1
  double step1_rotation_defect = 0;        // step-1 flow minus its rotation average
  double step1_tau_spread = 0;             // spread of (phi^tau)^* omega^tau over sampled tau
  double step2_tau_spread = 0;
  double moser_mean_defect = 0;
  double moser_symmetry_defect = 0;
  int moser_worst_j = 0, moser_worst_k = 0;
  double angle_pairing_surrogate = 0;      // max |omega_1(chi_i, chi_j)| / |v|^2 on samples
  double orthogonality = 0;                // max |<W - Y, i v_j 1_j>| / |v|^{N+1} on samples
};

// Pairwise spread of the pulled-back forms (phi^tau)^* omega^tau.
inline double tau_spread(const TauGerm& family, const TauGermMatrix& forms, int deg) {
  std::vector<GermMatrix> p;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0})
    p.push_back(pullback({at_tau(forms, t)}, at_tau(family, t)).Jbar);
  double r = 0;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b) r = std::max(r, (p[a] - p[b]).max_abs_in(0, deg));
  return r;
}

inline std::vector<cplx> random_point(int J, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(static_cast<std::size_t>(J));
  double n2 = 0;
  for (auto& x : v) {
    do x = cplx(g(rng), g(rng));
    while (std::abs(x) < 0.2);
    n2 += std::norm(x);
  }
  for (auto& x : v) x *= radius / std::sqrt(n2);
  return v;
}

inline double action_residual(const Germ& phi, int j, int lo, int hi) {
  ScalarGerm d = half_modulus_squared(phi(j)) - action(j);
  return max_abs_in(d, lo, hi);
}

/// Residuals of a completed normalization.
inline NormalFormReport verify(const NormalizationState& input, const NormalizationState& s1,
                               const NormalizationState& s2, const MoserResult& mr, std::uint64_t seed = 1) {
  NormalFormReport r;
  const int J = input.Psi.modes();
  const int N = input.Psi.cap();
  r.J = J;
  r.N = N;
  r.symplectic_residual = symplectic_residual(s2.Psi);
  const Germ phi1 = at_tau(s2.flow_family, 1.0);
  for (int j = 1; j <= J; ++j) {
    r.action_residuals.push_back(action_residual(phi1, j, 0, N));
    r.action_residuals_full.push_back(action_residual(phi1, j, 0, N + 1));
    ScalarGerm d = half_modulus_squared(s1.Psi(j)) - half_modulus_squared(s2.Psi(j));
    r.action_transfer = std::max(r.action_transfer, max_abs_in(d, 0, N));
    r.action_transfer_full = std::max(r.action_transfer_full, max_abs_in(d, 0, N + 1));
  }
  r.closeness = (s2.Psi - input.Psi).max_abs_in(2, 2);
  r.commutation_input = commutation_residual(input.Psi, N);
  r.commutation_input_full = commutation_residual(input.Psi, N + 1);
  r.commutation_output = commutation_residual(s2.Psi, N);
  r.commutation_output_full = commutation_residual(s2.Psi, N + 1);
  GermMatrix avg = full_average(s1.omega1.Jbar) - multiply_by_i(J);
  r.step1_average_residual = avg.max_abs_in(0, N - 1);
  const Germ phi_s1 = at_tau(s1.flow_family, 1.0);
  r.step1_rotation_defect = (phi_s1 - full_average(phi_s1)).max_abs();
  r.step1_tau_spread = tau_spread(s1.flow_family, s1.form_family, N - 1);
  r.step2_tau_spread = tau_spread(s2.flow_family, s2.form_family, N - 1);
  r.moser_mean_defect = mr.mean_defect;
  r.moser_symmetry_defect = mr.symmetry_defect;
  r.moser_worst_j = mr.worst_j;
  r.moser_worst_k = mr.worst_k;

  std::mt19937_64 rng(seed);
  for (int sample = 0; sample < 8; ++sample) {
    const double radius = 1e-2;
    const std::vector<cplx> v = random_point(J, radius, rng);
    for (int i = 1; i <= J; ++i) {
      std::vector<cplx> ci(static_cast<std::size_t>(J)), cj(static_cast<std::size_t>(J));
      ci[std::size_t(i - 1)] = cplx(0, 1) * v[std::size_t(i - 1)];
      for (int j = 1; j <= J; ++j) {
        std::fill(cj.begin(), cj.end(), cplx{});
        cj[std::size_t(j - 1)] = cplx(0, 1) * v[std::size_t(j - 1)];
        const double w = evaluate(s1.omega1, v, ci, cj);
        r.angle_pairing_surrogate = std::max(r.angle_pairing_surrogate, std::abs(w) / (radius * radius));
      }
      const auto WY = evaluate(s2.field_W - s2.field_Y, v);
      r.orthogonality = std::max(r.orthogonality, std::abs(pairing(WY, ci)) / std::pow(radius, N + 1));
    }
  }
  return r;
}

struct NormalizeResult {
  Germ Psi_plus;
  NormalFormReport report;
  NormalizationState input, after_step1, after_step2;
  bool commutation_warning = false;
};

enum class CommutationPolicy { warn, abort };

class CommutationFailure : public std::domain_error {
 public:
  CommutationFailure(const std::string& w, double residual) : std::domain_error(w), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

inline NormalizeResult normalize(const Germ& Psi, CommutationPolicy policy = CommutationPolicy::warn,
                                 double commutation_tol = 1e-8, const NormalizeOptions& opt = {}) {
  NormalizeResult out;
  const int N = Psi.cap();
  const double pre = commutation_residual(Psi, N);
  if (pre > commutation_tol) {
    if (policy == CommutationPolicy::abort)
      throw CommutationFailure("normalize: actions of the input do not commute", pre);
    out.commutation_warning = true;
  }
  out.input = make_state(Psi);
  out.after_step1 = step1(out.input);
  MoserResult mr;
  out.after_step2 = step2(out.after_step1, opt, &mr);
  out.Psi_plus = out.after_step2.Psi;
  out.report = verify(out.input, out.after_step1, out.after_step2, mr);
  return out;
}

}  // namespace vey
