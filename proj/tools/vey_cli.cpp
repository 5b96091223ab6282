// vey: spectral and normal-form experiments.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <vey/harness.hpp>

namespace h = vey::harness;

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff coordinates and Vey normalization experiments"};
  app.require_subcommand(0, 1);
  bool dump_defaults = false;
  app.add_flag("--dump-defaults", dump_defaults, "Print the default configuration and exit");

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<std::string> germ_paths;

  std::vector<CLI::App*> subs;
  for (const char* name : {"spectrum", "birkhoff", "kernels", "normalize", "verify"}) {
    CLI::App* s = app.add_subcommand(name);
    s->add_option("--config", config_path, "Configuration file (INI)");
    s->add_option("--out", out_dir, "Output directory");
    s->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& v) {
          seed = v;
          seed_given = true;
        },
        "Random seed (overrides the config)");
    subs.push_back(s);
  }
  subs[0]->description("Eigenvalues, gaps and K-convergence of the Hill operator");
  subs[1]->description("Gap identity |z_j|^2 = pi gamma_j^2 and the smoothing exponent");
  subs[2]->description("Finite-difference check of the Z2/Z3 kernels and their decay fits");
  subs[3]->description("Normalize the truncated Birkhoff germ and report residuals");
  subs[4]->description("Re-run the invariant suite on stored germ files");
  subs[4]->add_option("germs", germ_paths, "Germ files: Psi+ alone, or Psi then Psi+")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? h::kPass : h::kInputError;
  }

  try {
    h::RunConfig cfg = config_path.empty() ? h::RunConfig{} : h::RunConfig::load(config_path);
    if (seed_given) cfg.seed = seed;
    if (dump_defaults) {
      std::cout << h::RunConfig{}.dump();
      return h::kPass;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return h::kInputError;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    h::Outcome o;
    if (cmd == "spectrum") o = h::cmd_spectrum(cfg);
    if (cmd == "birkhoff") o = h::cmd_birkhoff(cfg);
    if (cmd == "kernels") o = h::cmd_kernels(cfg);
    if (cmd == "normalize") o = h::cmd_normalize(cfg);
    if (cmd == "verify") o = h::cmd_verify(cfg, germ_paths);
    h::write_outcome(out_dir, cmd, cfg, o);
    for (const auto& c : o.checks)
      std::printf("%-4s %-32s %.3e (tol %.1e)\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value, c.tolerance);
    return o.passed() ? h::kPass : h::kViolation;
  } catch (const vey::CommutationFailure& e) {
    std::cerr << "commutation pre-check failed: " << e.what() << " (" << e.residual() << ")\n";
    return h::kViolation;
  } catch (const h::ConfigError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return h::kInputError;
  } catch (const vey::GermParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return h::kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return h::kInputError;
  }
}
