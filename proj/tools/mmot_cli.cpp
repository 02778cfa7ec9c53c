// Command-line front end: solve one transport problem, check
// representability, run lift and Fourier diagnostics, execute declarative
// experiments, or run the full invariant suite.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>

#include "mmot/errors.hpp"
#include "mmot/experiments.hpp"
#include "mmot/fourier.hpp"
#include "mmot/io.hpp"
#include "mmot/representability.hpp"
#include "mmot/serialize.hpp"
#include "mmot/solver.hpp"
#include "mmot/validation.hpp"

namespace {

using namespace mmot;

struct GlobalFlags {
  int jobs = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  bool json_errors = false;
};

void write_out(const std::string& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  io::write_file((std::filesystem::path(dir) / name).string(), content);
}

int cmd_solve(const GlobalFlags& flags, const std::string& mu_path, const std::string& cost_spec,
              int n, const std::string& formulation, const std::string& out_dir) {
  const auto mu = serialize::discrete_from_json(io::read_file(mu_path));
  const auto cost = CostFunction::parse(cost_spec);
  MmotOptions opts;
  opts.variable_budget = flags.budget;
  const auto report = formulation == "reduced" ? solve_reduced(mu, n, cost, opts)
                                               : solve_mmot(mu, n, cost, opts);
  std::printf("F_%d = %.9f  (total %.9f over %g pairs, %d LP iterations, %.3fs)\n", n,
              report.value_per_pair, report.total_cost, pairs_of(n),
              report.lp_stats.iterations, report.wall_seconds);
  if (report.infinite) std::printf("value is +inf: every feasible coupling hits a singular pair\n");
  write_out(out_dir, "solve_report.json", serialize::to_json(report));
  return 0;
}

int cmd_repcheck(const GlobalFlags& flags, const std::string& mu2_path, int n,
                 const std::string& out_dir) {
  const auto mu2 = serialize::pair_from_json(io::read_file(mu2_path));
  RepresentabilityOptions opts;
  opts.variable_budget = flags.budget;
  const auto answer = is_n_representable(mu2, n, opts);
  if (answer.feasible) {
    std::printf("feasible: the pair measure is %d-representable\n", n);
  } else {
    double margin = 0.0;
    const bool ok = verify_representability_certificate(mu2, n, answer.farkas,
                                                        opts.lp.tol_feasibility, &margin);
    std::printf("infeasible: not %d-representable (certificate margin %.3e, %s)%s\n", n,
                margin, ok ? "verified" : "UNVERIFIED",
                answer.numerically_marginal ? " [numerically marginal]" : "");
  }
  write_out(out_dir, "repcheck.json", serialize::to_json(answer));
  return 0;
}

int cmd_lift(const std::string& gamma_path, int k, const std::string& out_dir) {
  const auto gamma = serialize::nbody_from_json(io::read_file(gamma_path));
  const auto exchangeable = gamma.mode() == Mode::multiset ? gamma : symmetrize(gamma);
  const auto check = lift_tv_check(exchangeable);
  std::printf("pair marginal tv = %.12f, bound 2/N = %.12f, 1-marginal tv = %.3e -> %s\n",
              check.tv, check.bound, check.marginal1_tv, check.pass ? "pass" : "FAIL");
  nlohmann::json j{{"kind", "lift_check"},
                   {"n", exchangeable.bodies()},
                   {"tv", check.tv},
                   {"bound", check.bound},
                   {"marginal1_tv", check.marginal1_tv},
                   {"pass", check.pass}};
  if (k > 2) {
    const auto kk = lift_tv_check_k(exchangeable, k);
    std::printf("k = %d marginal tv = %.12f, bound k(k-1)/N = %.12f -> %s\n", k, kk.tv,
                kk.bound, kk.pass ? "pass" : "FAIL");
    j["k_check"] = {{"k", k}, {"tv", kk.tv}, {"bound", kk.bound}, {"pass", kk.pass}};
  }
  write_out(out_dir, "lift.json", j.dump(2) + "\n");
  return 0;
}

int cmd_fourier(const std::string& mixture_path, const std::string& cost_spec,
                const std::string& out_dir) {
  const auto nu = serialize::mixture_from_json(io::read_file(mixture_path));
  const auto cost = CostFunction::parse(cost_spec);
  const auto d = fourier::variance_decomposition(nu, cost);
  std::printf("c_infinity   = %.12f\nmean_field   = %.12f\nvariance     = %.12f\n"
              "identity err = %.3e\n",
              d.c_infinity, d.mean_field, d.variance_term, d.identity_error);
  write_out(out_dir, "fourier.json", serialize::to_json(d));
  const auto spectrum = fourier::dft(*nu.grid(), fourier::sample_on_torus(cost, *nu.grid()));
  write_out(out_dir, "spectrum.csv", serialize::spectrum_to_csv(spectrum));
  return 0;
}

int cmd_experiment(const GlobalFlags& flags, const std::string& config_path,
                   const std::string& out_override) {
  RunConfig cfg = load_config(config_path);
  if (flags.jobs > 0) cfg.jobs = flags.jobs;
  if (flags.seed != 0) cfg.seed = flags.seed;
  if (flags.budget != kDefaultBudget) cfg.budget = flags.budget;
  if (!out_override.empty()) cfg.output_dir = out_override;
  const auto result = run_experiment(cfg);
  const auto report = persist(result, cfg.output_dir, cfg.write_csv, cfg.write_svg);
  std::printf("%s: %zu rows in %.3fs -> %s\n", to_string(result.kind), result.rows.size(),
              result.wall_seconds, report.manifest_path.c_str());
  for (const auto& flag : result.flags) std::printf("note: %s\n", flag.c_str());
  return 0;
}

int real_main(int argc, char** argv) {
  CLI::App app{"symmetric N-marginal and infinite-body optimal transport toolkit"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--jobs", flags.jobs, "worker threads for experiment rows (0 = all cores)");
  app.add_option("--seed", flags.seed, "seed for randomized runs");
  app.add_option("--budget", flags.budget, "LP variable budget");
  app.add_flag("--json-errors", flags.json_errors, "machine-readable errors on stderr");

  std::string mu_path, cost_spec = "gaussian:s=0.7071067811865476", out_dir = ".";
  int bodies = 2;
  std::string formulation = "direct";
  auto* solve = app.add_subcommand("solve", "solve one N-marginal transport problem");
  solve->add_option("--mu", mu_path, "one-body measure JSON")->required();
  solve->add_option("--cost", cost_spec, "cost, e.g. gaussian:s=0.7071 or coulomb");
  solve->add_option("--n", bodies, "body count N")->required();
  solve->add_option("--formulation", formulation)->check(CLI::IsMember({"direct", "reduced"}));
  solve->add_option("--out", out_dir, "output directory");

  std::string mu2_path;
  auto* repcheck = app.add_subcommand("repcheck", "decide N-representability of a pair measure");
  repcheck->add_option("--mu2", mu2_path, "symmetric pair measure JSON")->required();
  repcheck->add_option("--n", bodies, "representability order N")->required();
  repcheck->add_option("--out", out_dir, "output directory");

  std::string gamma_path;
  int lift_k = 2;
  auto* lift = app.add_subcommand("lift", "empirical-measure lift tv check");
  lift->add_option("--gamma", gamma_path, "exchangeable N-body measure JSON")->required();
  lift->add_option("--k", lift_k, "also check the k-marginal rate");
  lift->add_option("--out", out_dir, "output directory");

  std::string mixture_path;
  auto* fourier_cmd = app.add_subcommand("fourier", "variance decomposition of a mixture");
  fourier_cmd->add_option("--mixture", mixture_path, "mixture JSON on a torus grid")->required();
  fourier_cmd->add_option("--cost", cost_spec, "cost to decompose against");
  fourier_cmd->add_option("--out", out_dir, "output directory");

  std::string config_path, out_override;
  auto* experiment = app.add_subcommand("experiment", "run a declarative experiment config");
  experiment->add_option("config", config_path, "TOML or JSON config file")->required();
  experiment->add_option("--out", out_override, "override the config output directory");

  auto* validate = app.add_subcommand("validate", "run the full invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (solve->parsed()) return cmd_solve(flags, mu_path, cost_spec, bodies, formulation, out_dir);
  if (repcheck->parsed()) return cmd_repcheck(flags, mu2_path, bodies, out_dir);
  if (lift->parsed()) return cmd_lift(gamma_path, lift_k, out_dir);
  if (fourier_cmd->parsed()) return cmd_fourier(mixture_path, cost_spec, out_dir);
  if (experiment->parsed()) return cmd_experiment(flags, config_path, out_override);
  if (validate->parsed()) {
    return validation::run_and_print(flags.seed, std::cout) == 0 ? 0 : 1;
  }
  return 2;
}

void report_error(const char* type, const std::exception& e, bool json) {
  if (json) {
    nlohmann::json j{{"error", {{"type", type}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
  } else {
    std::fprintf(stderr, "error (%s): %s\n", type, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool json_errors = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--json-errors") json_errors = true;
  }
  try {
    return real_main(argc, argv);
  } catch (const ConfigError& e) {
    report_error("config", e, json_errors);
    return 2;
  } catch (const BudgetError& e) {
    report_error("budget", e, json_errors);
    return 1;
  } catch (const NumericalBreakdown& e) {
    report_error("numerical", e, json_errors);
    return 1;
  } catch (const DomainError& e) {
    report_error("domain", e, json_errors);
    return 1;
  } catch (const std::exception& e) {
    report_error("internal", e, json_errors);
    return 1;
  }
}
