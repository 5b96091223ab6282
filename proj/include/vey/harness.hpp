#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "fit.hpp"
#include "germ_io.hpp"
#include "hill.hpp"
#include "kernels.hpp"
#include "normalizer.hpp"

namespace vey::harness {

using json = nlohmann::ordered_json;

enum ExitCode { kPass = 0, kViolation = 1, kInputError = 2 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PotentialSpec {
  std::string kind = "random";  // zero | single | two | random | list
  double amplitude = 0.05;      // random: L2 norm of u; single/two: |w_mode|
  double decay = 2;             // random: scale j^-decay
  int mode = 1;
  int mode2 = 2;
  double amplitude2 = 0.02;
  std::string list;  // "j:re:im j:re:im ..."
  int samples = 4;
};

struct Tolerances {
  double gap_identity = 1e-8;
  double smoothing = 0.1;
  double z2 = 1e-6;
  double z3 = 1e-4;
  double decay2 = 0.15;
  double decay3 = 0.2;
  double convergence = 1e-10;
  double symplectic = 1e-9;
  double action = 1e-10;
  double closeness = 1e-12;
  double step1 = 1e-10;
  double tau_spread = 1e-10;
  double commutation = 1e-8;
};

struct RunConfig {
  int J = 8, N = 3, K = 0;  // K = 0 selects 8 J
  std::uint64_t seed = 1;
  PotentialSpec potential;
  Tolerances tol;
  std::string policy = "warn";  // commutation pre-check: warn | abort
  std::string germ = "kdv";     // normalize input: kdv | identity

  int half_modes() const { return K > 0 ? K : 8 * J; }

  void validate() const {
    if (J < 2) throw ConfigError("run.J: must be at least 2");
    if (J > 64) throw ConfigError("run.J: must be at most 64");
    if (N < 2 || N > 6) throw ConfigError("run.N: must lie in 2..6");
    if (half_modes() < 4 * J) throw ConfigError("run.K: must be at least 4 J");
    const auto& p = potential;
    if (p.kind != "zero" && p.kind != "single" && p.kind != "two" && p.kind != "random" && p.kind != "list")
      throw ConfigError("potential.kind: unknown preset '" + p.kind + "'");
    if (p.samples < 1) throw ConfigError("potential.samples: must be positive");
    if (p.mode < 1 || p.mode > J) throw ConfigError("potential.mode: must lie in 1..J");
    if (p.mode2 < 1 || p.mode2 > J) throw ConfigError("potential.mode2: must lie in 1..J");
    if (!(p.amplitude >= 0)) throw ConfigError("potential.amplitude: must be nonnegative");
    if (policy != "warn" && policy != "abort") throw ConfigError("normalize.policy: expected warn or abort");
    if (germ != "kdv" && germ != "identity") throw ConfigError("normalize.germ: expected kdv or identity");
  }

  template <class F>
  void visit(F&& f) {
    f("run", "J", J);
    f("run", "N", N);
    f("run", "K", K);
    f("run", "seed", seed);
    f("potential", "kind", potential.kind);
    f("potential", "amplitude", potential.amplitude);
    f("potential", "decay", potential.decay);
    f("potential", "mode", potential.mode);
    f("potential", "mode2", potential.mode2);
    f("potential", "amplitude2", potential.amplitude2);
    f("potential", "list", potential.list);
    f("potential", "samples", potential.samples);
    f("tolerances", "gap_identity", tol.gap_identity);
    f("tolerances", "smoothing", tol.smoothing);
    f("tolerances", "z2", tol.z2);
    f("tolerances", "z3", tol.z3);
    f("tolerances", "decay2", tol.decay2);
    f("tolerances", "decay3", tol.decay3);
    f("tolerances", "convergence", tol.convergence);
    f("tolerances", "symplectic", tol.symplectic);
    f("tolerances", "action", tol.action);
    f("tolerances", "closeness", tol.closeness);
    f("tolerances", "step1", tol.step1);
    f("tolerances", "tau_spread", tol.tau_spread);
    f("tolerances", "commutation", tol.commutation);
    f("normalize", "policy", policy);
    f("normalize", "germ", germ);
  }

  std::string dump() {
    std::ostringstream os;
    std::string section;
    visit([&](const std::string& s, const std::string& k, const auto& v) {
      if (s != section) {
        os << (section.empty() ? "" : "\n") << "[" << s << "]\n";
        section = s;
      }
      os << k << " = ";
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
        char buf[32];
        os << std::string_view(buf, std::size_t(std::to_chars(buf, buf + sizeof buf, v).ptr - buf));
      } else {
        os << v;
      }
      os << "\n";
    });
    return os.str();
  }

  static RunConfig parse(std::istream& is) {
    boost::property_tree::ptree pt;
    try {
      boost::property_tree::read_ini(is, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }
    RunConfig c;
    std::map<std::string, bool> seen;
    c.visit([&](const std::string& s, const std::string& k, auto& v) {
      const std::string path = s + "." + k;
      seen[path] = true;
      auto node = pt.get_child_optional(boost::property_tree::ptree::path_type(path, '.'));
      if (!node) return;
      using T = std::decay_t<decltype(v)>;
      auto parsed = node->get_value_optional<T>();
      if (!parsed) throw ConfigError(path + ": cannot parse '" + node->data() + "'");
      v = *parsed;
    });
    for (const auto& [s, sec] : pt) {
      if (sec.empty()) throw ConfigError("key '" + s + "' outside of a section");
      for (const auto& [k, v] : sec)
        if (!seen.count(s + "." + k)) throw ConfigError("unknown key '" + s + "." + k + "'");
    }
    c.validate();
    return c;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config " + path);
    return parse(is);
  }
};

/// Real potential with complex Gaussian w_j ~ j^-decay, scaled to ||u||_{L2} = norm.
inline ModeSequence random_potential(int J, double norm, double decay, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ModeSequence w(IndexSet::symmetric, J);
  double n2 = 0;
  for (int j = 1; j <= J; ++j) {
    const cplx x = cplx(g(rng), g(rng)) * std::pow(double(j), -decay);
    w.at(j) = x;
    w.at(-j) = std::conj(x);
    n2 += std::norm(x);
  }
  if (n2 > 0) w *= norm / std::sqrt(n2);
  return w;
}

// ||u||_{L2(0, 2 pi)} = (sum_{j >= 1} |w_j|^2)^{1/2} for real u.
inline double l2_norm(const ModeSequence& w) { return sobolev_norm(w, 0) / std::sqrt(2.0); }

inline std::vector<ModeSequence> potentials(const RunConfig& c) {
  const auto& p = c.potential;
  std::vector<ModeSequence> out;
  ModeSequence w(IndexSet::symmetric, c.J);
  auto put = [&w](int j, cplx x) {
    w.at(j) += x;
    w.at(-j) += std::conj(x);
  };
  if (p.kind == "random") {
    std::mt19937_64 rng(c.seed);
    for (int s = 0; s < p.samples; ++s) out.push_back(random_potential(c.J, p.amplitude, p.decay, rng));
    return out;
  }
  if (p.kind == "single") put(p.mode, p.amplitude);
  if (p.kind == "two") {
    put(p.mode, p.amplitude);
    put(p.mode2, p.amplitude2);
  }
  if (p.kind == "list") {
    std::istringstream ss(p.list);
    std::string item;
    while (ss >> item) {
      int j = 0;
      double re = 0, im = 0;
      char c1 = 0, c2 = 0;
      std::istringstream is(item);
      if (!(is >> j >> c1 >> re >> c2 >> im) || c1 != ':' || c2 != ':')
        throw ConfigError("potential.list: malformed entry '" + item + "'");
      if (j < 1 || j > c.J) throw ConfigError("potential.list: mode " + std::to_string(j) + " outside 1..J");
      put(j, cplx(re, im));
    }
  }
  out.push_back(w);
  return out;
}

struct Check {
  std::string name;
  double value = 0, tolerance = 0;
  bool pass = true;
};

/// Collected results of one subcommand.
struct Outcome {
  json report = json::object();
  std::map<std::string, std::vector<std::vector<std::string>>> tables;  // name -> rows, first row is the header
  std::map<std::string, Germ> germs;
  std::vector<Check> checks;

  void check(const std::string& name, double value, double tol) { checks.push_back({name, value, tol, value <= tol}); }
  void check_band(const std::string& name, double value, double target, double halfwidth) {
    checks.push_back({name, value, halfwidth, std::abs(value - target) <= halfwidth});
  }
  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline Outcome cmd_spectrum(const RunConfig& c) {
  Outcome o;
  const int K = c.half_modes();
  auto& lam = o.tables["eigenvalues"];
  auto& gaps = o.tables["gaps"];
  auto& conv = o.tables["convergence"];
  lam.push_back({"sample", "index", "lambda"});
  gaps.push_back({"sample", "j", "gamma"});
  conv.push_back({"sample", "K", "max_abs_change"});
  double worst_conv = 0, max_gap = 0;
  const auto pots = potentials(c);
  for (std::size_t s = 0; s < pots.size(); ++s) {
    const SpectralData S = eigen(assemble(pots[s], K));
    const SpectralData S2 = eigen(assemble(pots[s], 2 * K));
    double change = 0;
    for (int k = 0; k <= 2 * c.J; ++k) {
      lam.push_back({std::to_string(s), std::to_string(k), fmt(S.lambda_re(k))});
      change = std::max(change, std::abs(S.lambda_re(k) - S2.lambda_re(k)));
    }
    for (int j = 1; j <= c.J; ++j) {
      gaps.push_back({std::to_string(s), std::to_string(j), fmt(S.gap(j))});
      max_gap = std::max(max_gap, S.gap(j));
    }
    conv.push_back({std::to_string(s), std::to_string(K), fmt(change)});
    worst_conv = std::max(worst_conv, change);
  }
  o.report["samples"] = pots.size();
  o.report["max_gap"] = max_gap;
  o.report["convergence_max_change"] = worst_conv;
  o.check("spectral_convergence", worst_conv, c.tol.convergence);
  return o;
}

// Exponents of ||Psi(s v) - s v||_{m+1} against ||s v||_m for m in {1/2, 1, 3/2}.
inline std::vector<LineFit> smoothing_fits(const ModeSequence& v, int J_out, int K) {
  const std::vector<double> ms{0.5, 1.0, 1.5};
  std::vector<std::vector<double>> xs(ms.size()), ys(ms.size());
  for (double s : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    const ModeSequence sv = v * cplx(s);
    const ModeSequence pv = psi_map(sv, J_out, K);
    ModeSequence d(IndexSet::positive, J_out);
    for (int j = 1; j <= J_out; ++j) d.at(j) = pv[j] - sv[j];
    for (std::size_t i = 0; i < ms.size(); ++i) {
      xs[i].push_back(sobolev_norm(sv, ms[i]));
      ys[i].push_back(sobolev_norm(d, ms[i] + 1));
    }
  }
  std::vector<LineFit> out;
  for (std::size_t i = 0; i < ms.size(); ++i) out.push_back(loglog_fit(xs[i], ys[i]));
  return out;
}

inline Outcome cmd_birkhoff(const RunConfig& c) {
  Outcome o;
  const int K = c.half_modes();
  auto& tab = o.tables["gap_identity"];
  tab.push_back({"sample", "j", "abs_z_squared", "pi_gamma_squared", "rel_error"});
  double worst = 0;
  const auto pots = potentials(c);
  const int jmax = std::min(c.J, 5);
  for (std::size_t s = 0; s < pots.size(); ++s) {
    const BirkhoffMap B(pots[s], K);
    for (int j = 1; j <= jmax; ++j) {
      const double lhs = std::norm(B.z(j)), rhs = M_PI * B.gap(j) * B.gap(j);
      const double rel = std::abs(lhs - rhs) / (rhs + 1e-14);
      worst = std::max(worst, rel);
      tab.push_back({std::to_string(s), std::to_string(j), fmt(lhs), fmt(rhs), fmt(rel)});
    }
  }
  o.report["samples"] = pots.size();
  o.report["gap_identity_max_rel"] = worst;
  o.check("gap_identity", worst, c.tol.gap_identity);

  // Smoothing exponent on v = T pi(first potential), rescaled to a small h^{1/2} norm.
  ModeSequence v = weight_forward(reality_project(pots.front()));
  const double nv = sobolev_norm(v, 0.5);
  auto& sm = o.tables["smoothing"];
  sm.push_back({"m", "exponent", "ci_low", "ci_high"});
  if (nv > 0) {
    v *= cplx(0.05 / nv);
    const int J_out = 4 * c.J;
    const auto fits = smoothing_fits(v, J_out, std::max(K, 8 * J_out));
    const double ms[] = {0.5, 1.0, 1.5};
    json ex = json::array();
    for (std::size_t i = 0; i < fits.size(); ++i) {
      sm.push_back({fmt(ms[i]), fmt(fits[i].slope), fmt(fits[i].ci_low), fmt(fits[i].ci_high)});
      ex.push_back(fits[i].slope);
      o.check_band("smoothing_exponent_m" + fmt(ms[i]), fits[i].slope, 2.0, c.tol.smoothing);
    }
    o.report["smoothing_exponents"] = ex;
  }
  return o;
}

// Second and third Taylor coefficients of t |-> z_j(t w) by Richardson-extrapolated central differences.
struct TaylorEstimate {
  cplx second, third;
};
inline TaylorEstimate taylor_fd(const ModeSequence& w, int j, int K, double h = 0.01) {
  auto z = [&](double t) { return z_map(w * cplx(t), j, K); };
  const cplx p1 = z(h), m1 = z(-h), p2 = z(2 * h), m2 = z(-2 * h);
  const cplx e1 = (p1 + m1) / (2 * h * h), e2 = (p2 + m2) / (8 * h * h);
  const cplx o1 = ((p1 - m1) / 2.0 - h * w[j]) / (h * h * h);
  const cplx o2 = ((p2 - m2) / 2.0 - 2 * h * w[j]) / (8 * h * h * h);
  return {(4.0 * e1 - e2) / 3.0, (4.0 * o1 - o2) / 3.0};
}

inline Outcome cmd_kernels(const RunConfig& c) {
  Outcome o;
  const int K = c.half_modes();
  std::mt19937_64 rng(c.seed);
  auto& fd = o.tables["kernel_fd"];
  fd.push_back({"sample", "j", "z2_rel_error", "z3_rel_error"});
  double w2 = 0, w3 = 0;
  for (int s = 0; s < c.potential.samples; ++s) {
    const ModeSequence d = random_potential(c.J, 1.0, 1.0, rng);
    for (int j = 1; j <= std::min(c.J, 4); ++j) {
      const auto t = taylor_fd(d, j, K);
      const cplx Z2 = eval_Z2(d, j), Z3 = eval_Z3(d, j);
      const double r2 = std::abs(t.second - Z2) / std::abs(Z2), r3 = std::abs(t.third - Z3) / std::abs(Z3);
      w2 = std::max(w2, r2);
      w3 = std::max(w3, r3);
      fd.push_back({std::to_string(s), std::to_string(j), fmt(r2), fmt(r3)});
    }
  }
  o.report["z2_max_rel"] = w2;
  o.report["z3_max_rel"] = w3;
  o.check("z2_finite_difference", w2, c.tol.z2);
  o.check("z3_finite_difference", w3, c.tol.z3);

  auto& dec = o.tables["kernel_decay"];
  dec.push_back({"j", "norm_K2", "norm_K3", "norm_B3"});
  std::vector<double> js, n2, n3, j3, b3;
  for (int j = 2; j <= 12; ++j) {
    js.push_back(j);
    n2.push_back(kernel_norm2(j, 200));
    n3.push_back(kernel_norm3(j, 120));
    const double b = j >= 3 ? reindexed_norm3(j, 120) : 0;
    if (j >= 3) {
      j3.push_back(j);
      b3.push_back(b);
    }
    dec.push_back({std::to_string(j), fmt(n2.back()), fmt(n3.back()), fmt(b)});
  }
  const LineFit f2 = loglog_fit(js, n2), f3 = loglog_fit(js, n3), fb = loglog_fit(j3, b3);
  auto fit_json = [](const LineFit& f) {
    return json{{"slope", f.slope}, {"ci_low", f.ci_low}, {"ci_high", f.ci_high}, {"r2", f.r2}};
  };
  o.report["decay_n2"] = fit_json(f2);
  o.report["decay_n3"] = fit_json(f3);
  o.report["decay_b3"] = fit_json(fb);
  o.check_band("decay_slope_n2", f2.slope, -1.0, c.tol.decay2);
  o.check_band("decay_slope_n3", f3.slope, -2.0, c.tol.decay3);
  return o;
}

inline json report_json(const NormalFormReport& r) {
  return json{{"J", r.J},
              {"N", r.N},
              {"symplectic_residual", r.symplectic_residual},
              {"action_residuals", r.action_residuals},
              {"action_residuals_next_degree", r.action_residuals_full},
              {"action_transfer", r.action_transfer},
              {"action_transfer_next_degree", r.action_transfer_full},
              {"closeness", r.closeness},
              {"commutation_input", r.commutation_input},
              {"commutation_input_next_degree", r.commutation_input_full},
              {"commutation_output", r.commutation_output},
              {"commutation_output_next_degree", r.commutation_output_full},
              {"step1_average_residual", r.step1_average_residual},
              {"step1_rotation_defect", r.step1_rotation_defect},
              {"step1_tau_spread", r.step1_tau_spread},
              {"step2_tau_spread", r.step2_tau_spread},
              {"moser_mean_defect", r.moser_mean_defect},
              {"moser_symmetry_defect", r.moser_symmetry_defect},
              {"moser_worst_pair", {r.moser_worst_j, r.moser_worst_k}},
              {"angle_pairing_surrogate", r.angle_pairing_surrogate},
              {"orthogonality", r.orthogonality}};
}

inline Outcome cmd_normalize(const RunConfig& c) {
  if (c.germ == "kdv" && c.N > 3) throw ConfigError("run.N: the kdv germ is available for N <= 3");
  Outcome o;
  const Germ Psi = c.germ == "kdv" ? kdv_germ(c.J, c.N) : Germ::identity(c.J, c.N);
  const auto policy = c.policy == "abort" ? CommutationPolicy::abort : CommutationPolicy::warn;
  const NormalizeResult res = normalize(Psi, policy, c.tol.commutation);
  const auto& r = res.report;
  o.germs["psi"] = Psi;
  o.germs["psi_plus"] = res.Psi_plus;
  o.report["germ"] = c.germ;
  o.report["commutation_warning"] = res.commutation_warning;
  o.report["normal_form"] = report_json(r);
  double act = 0;
  for (double x : r.action_residuals) act = std::max(act, x);
  o.check("symplectic_residual", r.symplectic_residual, c.tol.symplectic);
  o.check("action_invariance", act, c.tol.action);
  o.check("action_transfer", r.action_transfer, c.tol.action);
  o.check("degree2_closeness", r.closeness, c.tol.closeness);
  o.check("step1_average", r.step1_average_residual, c.tol.step1);
  o.check("tau_independence", std::max(r.step1_tau_spread, r.step2_tau_spread), c.tol.tau_spread);
  o.check("commutation_not_worse", r.commutation_output - r.commutation_input, 1e-10);
  return o;
}

/// Invariant suite on stored germs: each germ alone, and Psi against Psi+ when two are given.
inline Outcome cmd_verify(const RunConfig& c, const std::vector<std::string>& paths) {
  if (paths.empty() || paths.size() > 2) throw ConfigError("verify: expected one or two germ files");
  Outcome o;
  std::vector<Germ> g;
  for (const auto& p : paths) g.push_back(GermFile::load(p));
  const Germ& last = g.back();
  const double lin = linear_defect(last);
  o.report["linear_part_defect"] = lin;
  o.check("linear_part_identity", lin, c.tol.closeness);
  const double symp = symplectic_residual(last);
  const double comm = commutation_residual(last, last.cap());
  o.report["symplectic_residual"] = symp;
  o.report["commutation_residual"] = comm;
  o.check("symplectic_residual", symp, c.tol.symplectic);
  o.check("commutation", comm, c.tol.commutation);
  if (g.size() == 2) {
    if (g[0].modes() != g[1].modes() || g[0].cap() != g[1].cap()) throw ConfigError("verify: germ shapes differ");
    const int N = g[1].cap();
    double transfer = 0;
    for (int j = 1; j <= g[1].modes(); ++j)
      transfer = std::max(transfer, max_abs_in(half_modulus_squared(g[0](j)) - half_modulus_squared(g[1](j)), 0, N));
    const double close = (g[1] - g[0]).max_abs_in(2, 2);
    o.report["action_transfer"] = transfer;
    o.report["closeness"] = close;
    o.check("action_transfer", transfer, c.tol.action);
    o.check("degree2_closeness", close, c.tol.closeness);
  }
  return o;
}

/// Writes report.json, tables/*.csv and germs/*.germ under dir.
inline void write_outcome(const std::filesystem::path& dir, const std::string& command, const RunConfig& c,
                          Outcome& o) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  json checks = json::array();
  for (const auto& k : o.checks)
    checks.push_back({{"name", k.name}, {"value", k.value}, {"tolerance", k.tolerance}, {"pass", k.pass}});
  json top{{"command", command},
           {"J", c.J},
           {"N", c.N},
           {"K", c.half_modes()},
           {"seed", c.seed},
           {"pass", o.passed()},
           {"checks", checks},
           {"results", o.report}};
  std::ofstream(dir / "report.json") << top.dump(2) << "\n";
  if (!o.tables.empty()) fs::create_directories(dir / "tables");
  for (const auto& [name, rows] : o.tables) {
    std::ofstream os(dir / "tables" / (name + ".csv"));
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
  }
  if (!o.germs.empty()) fs::create_directories(dir / "germs");
  for (const auto& [name, F] : o.germs) GermFile::save((dir / "germs" / (name + ".germ")).string(), F);
}

}  // namespace vey::harness
