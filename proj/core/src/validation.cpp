#include "mmot/validation.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <random>

#include "mmot/definetti.hpp"
#include "mmot/errors.hpp"
#include "mmot/experiments.hpp"
#include "mmot/fourier.hpp"
#include "mmot/io.hpp"
#include "mmot/multiset.hpp"
#include "mmot/representability.hpp"

namespace mmot::validation {

namespace {

struct Reporter {
  SuiteResult result;
  void check(bool ok, const std::string& what) {
    ++result.checked;
    if (!ok) {
      ++result.violations;
      if (result.notes.size() < 8) result.notes.push_back(what);
    }
  }
};

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = -std::log(std::max(unit(rng), 1e-300));
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

DiscreteMeasure random_measure(std::mt19937_64& rng, const GridPtr& grid) {
  return DiscreteMeasure(grid, random_simplex(rng, grid->size()));
}

NBodyMeasure random_exchangeable(std::mt19937_64& rng, const GridPtr& grid, int n) {
  return NBodyMeasure(grid, n, Mode::multiset,
                      random_simplex(rng, multiset::count(static_cast<int>(grid->size()), n)));
}

GridPtr small_line_grid(int m) {
  std::vector<double> coords(m);
  for (int i = 0; i < m; ++i) coords[i] = i;
  return make_line_grid(coords);
}

SuiteResult measure_suite(std::uint64_t seed) {
  Reporter rep;
  rep.result.name = "measure-core";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_m(2, 4), pick_n(3, 6);

  for (int t = 0; t < 50; ++t) {
    const int m = pick_m(rng), n = pick_n(rng);
    const auto grid = small_line_grid(m);
    const auto gamma = random_exchangeable(rng, grid, n);
    // marginal chain consistency
    for (int k = 2; k < n; ++k) {
      const auto gk = marginal(gamma, k);
      for (int j = 2; j <= k; ++j) {
        rep.check(tv_distance(marginal(gk, j), marginal(gamma, j)) <= 1e-12,
                  "marginal chain consistency");
      }
      rep.check(tv_distance(marginal1(gk), marginal1(gamma)) <= 1e-12, "marginal1 consistency");
    }
    // product marginals
    const auto mu = random_measure(rng, grid);
    const auto prod = product_measure(mu, n);
    for (int k = 2; k < n; ++k) {
      rep.check(tv_distance(marginal(prod, k), product_measure(mu, k)) <= 1e-9,
                "product k-marginal equals k-fold product");
    }
    rep.check(tv_distance(marginal1(prod), mu) <= 1e-12, "product 1-marginal");
  }

  // symmetrize: idempotence and cost invariance on small dense measures
  const auto cost = CostFunction::gaussian(1.0);
  for (int t = 0; t < 30; ++t) {
    const int m = pick_m(rng);
    const int n = 3;
    const auto grid = small_line_grid(m);
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= m;
    const NBodyMeasure dense(grid, n, Mode::dense, random_simplex(rng, total));
    const auto sym = symmetrize(dense);
    rep.check(tv_distance(symmetrize(to_dense(sym)), sym) <= 1e-12, "symmetrize idempotent");
    const double c0 = nbody_cost(cost, dense);
    const double c1 = nbody_cost(cost, sym);
    rep.check(std::abs(c0 - c1) <= 1e-12 * (1.0 + std::abs(c0)),
              "symmetrize preserves pair cost");
    rep.check(sampled_symmetry_check(to_dense(sym), seed + t), "multiset expansion exchangeable");
  }

  // tv is a metric
  for (int t = 0; t < 50; ++t) {
    const int m = pick_m(rng);
    const auto grid = small_line_grid(m);
    const auto a = random_measure(rng, grid);
    const auto b = random_measure(rng, grid);
    const auto c = random_measure(rng, grid);
    rep.check(std::abs(tv_distance(a, b) - tv_distance(b, a)) <= 1e-15, "tv symmetry");
    rep.check(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12,
              "tv triangle inequality");
    rep.check(tv_distance(a, a) == 0.0, "tv identity");
  }
  return rep.result;
}

SuiteResult cost_suite(std::uint64_t seed) {
  Reporter rep;
  rep.result.name = "cost-lib";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);

  const std::vector<CostFunction> costs = {
      CostFunction::gaussian(0.7), CostFunction::coulomb_regularized(0.3),
      CostFunction::truncated_quadratic(2.0), CostFunction::quadratic(),
      CostFunction::coulomb()};
  for (const auto& c : costs) {
    bool even = true;
    for (int t = 0; t < 1000; ++t) {
      const std::vector<double> z{coord(rng)};
      const std::vector<double> neg{-z[0]};
      if (c.ell(z) != c.ell(neg)) even = false;
    }
    rep.check(even, "evenness of " + c.name());
  }

  // nbody equals C(N,2) times the pair integral of the 2-marginal
  std::uniform_int_distribution<int> pick_m(2, 4), pick_n(3, 6);
  for (int t = 0; t < 50; ++t) {
    const int m = pick_m(rng), n = pick_n(rng);
    const auto grid = small_line_grid(m);
    const auto gamma = random_exchangeable(rng, grid, n);
    const auto c = CostFunction::gaussian(0.5 + 0.1 * (t % 5));
    const double direct = nbody_cost(c, gamma);
    const double reduced = pairs_of(n) * pair_cost_integral(c, marginal2(gamma));
    rep.check(std::abs(direct - reduced) <= 1e-10 * (1.0 + std::abs(direct)),
              "nbody cost consistency with the 2-marginal");
  }

  // truncated quadratic vanishes only at zero
  const auto tq = CostFunction::truncated_quadratic(2.0);
  rep.check(tq.ell(std::vector<double>{0.0}) == 0.0, "truncated quadratic at 0");
  bool positive_off_zero = true;
  for (int i = 1; i <= 64; ++i) {
    if (tq.ell(std::vector<double>{i * 0.125}) <= 0.0) positive_off_zero = false;
  }
  rep.check(positive_off_zero, "truncated quadratic positive off 0");
  return rep.result;
}

SuiteResult lp_suite(std::uint64_t seed) {
  Reporter rep;
  rep.result.name = "lp-engine";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_r(2, 5), extra(1, 7);
  std::uniform_real_distribution<double> entry(-2.0, 2.0), costd(-1.0, 2.0), unit(0.0, 1.0);

  for (int t = 0; t < 200; ++t) {
    const int r = pick_r(rng);
    const int n = r + extra(rng);
    const bool force_infeasible = t % 4 == 3;
    lp::LinearProgram prog(force_infeasible ? r + 1 : r, n);
    std::vector<std::vector<double>> a(r, std::vector<double>(n, 0.0));
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < n; ++j) {
        if (unit(rng) < 0.7) {
          a[i][j] = entry(rng);
          prog.coefficient(i, j, a[i][j]);
        }
      }
    }
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
      x0[j] = unit(rng) < 0.5 ? 0.0 : unit(rng);
      prog.objective(j, costd(rng));
    }
    for (int i = 0; i < r; ++i) {
      double b = 0.0;
      for (int j = 0; j < n; ++j) b += a[i][j] * x0[j];
      prog.rhs(i, b);
    }
    if (force_infeasible) {
      // duplicate the first row with a shifted right-hand side
      for (int j = 0; j < n; ++j) {
        if (a[0][j] != 0.0) prog.coefficient(r, j, a[0][j]);
      }
      double b0 = 0.0;
      for (int j = 0; j < n; ++j) b0 += a[0][j] * x0[j];
      prog.rhs(r, b0 + 1.0);
    }

    try {
      const auto approx = lp::solve(prog);
      const auto exact = lp::solve_exact(prog);
      rep.check(approx.status == exact.status, "status agreement");
      if (approx.status == lp::Status::optimal && exact.status == lp::Status::optimal) {
        rep.check(std::abs(approx.objective - exact.objective) <=
                      1e-8 * (1.0 + std::abs(exact.objective)),
                  "optimal value agreement to 1e-8");
        double yb = 0.0;
        for (int i = 0; i < prog.rows(); ++i) yb += approx.dual[i] * prog.rhs()[i];
        rep.check(yb <= approx.objective + 1e-8 * (1.0 + std::abs(approx.objective)),
                  "weak duality");
        rep.check(approx.feasibility_residual <= 1e-9 * 10, "primal residual");
      }
      if (approx.status == lp::Status::infeasible) {
        double margin = 0.0;
        rep.check(lp::verify_farkas(prog, approx.farkas, 1e-7, &margin),
                  "farkas certificate verifies");
      }
    } catch (const NumericalBreakdown& e) {
      rep.check(false, std::string("breakdown: ") + e.what());
    }
  }
  return rep.result;
}

SuiteResult solver_suite(std::uint64_t seed) {
  Reporter rep;
  rep.result.name = "mmot-solver";
  std::mt19937_64 rng(seed);
  const auto grid2 = make_line_grid({0.0, 1.0});
  const auto mu2 = DiscreteMeasure::uniform(grid2);
  const auto gauss = CostFunction::gaussian(1.0 / std::sqrt(2.0));
  const double e1 = std::exp(-1.0);

  // two-point ladder against the closed form ((m-1) + m e^-1) / (2m-1)
  double prev = 0.0;
  const double mf = mean_field_value(mu2, gauss);
  for (int n = 2; n <= 10; ++n) {
    const double f = solve_mmot(mu2, n, gauss).value_per_pair;
    const int half = (n + 1) / 2;
    const double closed = ((half - 1) + half * e1) / (2 * half - 1);
    rep.check(std::abs(f - closed) <= 1e-8, "ladder value at N=" + std::to_string(n));
    rep.check(f >= prev - 1e-9, "monotone in N");
    rep.check(f <= mf + 1e-9, "bounded by mean field");
    prev = f;
  }

  // formulation agreement on random instances
  std::uniform_int_distribution<int> pick_m(2, 4), pick_n(2, 5);
  for (int t = 0; t < 15; ++t) {
    const int m = pick_m(rng), n = pick_n(rng);
    const auto grid = small_line_grid(m);
    const auto mu = random_measure(rng, grid);
    const auto c = CostFunction::gaussian(0.6 + 0.2 * (t % 3));
    const double direct = solve_mmot(mu, n, c).value_per_pair;
    const double reduced = solve_reduced(mu, n, c).value_per_pair;
    rep.check(std::abs(direct - reduced) <= 1e-8 * (1.0 + std::abs(direct)),
              "direct and reduced formulations agree");
  }
  return rep.result;
}

SuiteResult representability_suite(std::uint64_t seed) {
  Reporter rep;
  rep.result.name = "representability";
  std::mt19937_64 rng(seed);

  const auto grid = small_line_grid(2);
  std::vector<double> anti(4, 0.0);
  anti[0 * 2 + 1] = 0.5;
  anti[1 * 2 + 0] = 0.5;
  const PairMeasure anticorr(grid, anti);
  const auto at3 = is_n_representable(anticorr, 3);
  rep.check(!at3.feasible, "anticorrelated pair is not 3-representable");
  double margin = 0.0;
  rep.check(verify_representability_certificate(anticorr, 3, at3.farkas, 1e-7, &margin),
            "refutation certificate verifies");
  rep.check(is_n_representable(anticorr, 2).feasible, "anticorrelated pair is 2-representable");

  // pair marginals of exchangeable measures are representable at that order
  std::uniform_int_distribution<int> pick_m(2, 5), pick_k(2, 6);
  for (int t = 0; t < 100; ++t) {
    const int m = pick_m(rng), k = pick_k(rng);
    const auto g = small_line_grid(m);
    const auto gamma = random_exchangeable(rng, g, k);
    const auto answer = is_n_representable(marginal2(gamma), k);
    rep.check(answer.feasible, "pair marginal of a k-body measure is k-representable");
    if (answer.feasible) {
      rep.check(tv_distance(marginal2(*answer.witness), marginal2(gamma)) <= 1e-6,
                "witness reproduces the pair measure");
    }
  }

  const auto verdict = monotonicity_check(anticorr, 4, 3);
  rep.check(verdict.implication_holds, "monotonicity implication");
  return rep.result;
}

SuiteResult definetti_suite(std::uint64_t seed) {
  Reporter rep;
  rep.result.name = "definetti-lift";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_m(2, 4), pick_n(2, 8);

  for (int t = 0; t < 200; ++t) {
    const int m = pick_m(rng), n = pick_n(rng);
    const auto grid = small_line_grid(m);
    const auto gamma = random_exchangeable(rng, grid, n);
    const auto check = lift_tv_check(gamma);
    rep.check(check.pass, "lift tv bound");
    rep.check(check.marginal1_tv <= kNormTolerance, "lift preserves the 1-marginal");
  }

  // lift marginals are representable at every probed order
  for (int t = 0; t < 10; ++t) {
    const int m = pick_m(rng);
    const auto grid = small_line_grid(m);
    const auto gamma = random_exchangeable(rng, grid, 4);
    for (int k = 2; k <= 4; ++k) {
      const auto lifted = lift_marginal(gamma, k);
      rep.check(is_n_representable(marginal2(lifted), k).feasible,
                "lift marginal is k-representable");
    }
  }

  // mixture pair marginals survive the representability probe
  for (int t = 0; t < 10; ++t) {
    const int m = pick_m(rng);
    const auto grid = small_line_grid(m);
    std::vector<DiscreteMeasure> comps;
    const int ncomp = 2 + (t % 3);
    for (int a = 0; a < ncomp; ++a) comps.push_back(random_measure(rng, grid));
    const Mixture nu(std::move(comps), random_simplex(rng, ncomp));
    const auto probe = infinite_representability_probe(mixture_pair_marginal(nu), 6);
    rep.check(probe.representable_up_to_k_max, "mixture pair marginal probes representable");
  }
  return rep.result;
}

SuiteResult fourier_suite(std::uint64_t seed) {
  Reporter rep;
  rep.result.name = "fourier-analysis";
  std::mt19937_64 rng(seed);
  const auto torus = make_torus_grid(1, 16, 8.0);
  const auto gauss = CostFunction::gaussian(1.0 / std::sqrt(2.0));

  for (int t = 0; t < 100; ++t) {
    const auto q = random_measure(rng, torus);
    const auto qt = random_measure(rng, torus);
    const auto quad = fourier::plancherel_quadratic(gauss, q);
    rep.check(quad.abs_error <= 1e-10 * (1.0 + std::abs(quad.lhs)), "quadratic identity");
    const auto bil = fourier::plancherel_bilinear(gauss, q, qt);
    rep.check(bil.abs_error <= 1e-10 * (1.0 + std::abs(bil.lhs)), "bilinear identity");
  }

  std::uniform_int_distribution<int> pick_c(1, 5);
  for (int t = 0; t < 100; ++t) {
    const int ncomp = pick_c(rng);
    std::vector<DiscreteMeasure> comps;
    for (int a = 0; a < ncomp; ++a) comps.push_back(random_measure(rng, torus));
    const Mixture nu(std::move(comps), random_simplex(rng, ncomp));
    const auto d = fourier::variance_decomposition(nu, gauss);
    rep.check(d.identity_error <= 1e-10 * (1.0 + std::abs(d.c_infinity)),
              "variance decomposition identity");
    rep.check(d.variance_term >= -1e-12, "variance nonnegative under a nonnegative spectrum");
    rep.check(std::abs(d.mean_field - d.mean_field_spectral) <=
                  1e-10 * (1.0 + std::abs(d.mean_field)),
              "spectral mean field equals the direct double sum");
  }

  const auto tq = CostFunction::truncated_quadratic(2.0);
  const auto wide = make_torus_grid(1, 64, 16.0);
  const auto negative = fourier::find_negative_variance_mixture(tq, wide, seed);
  rep.check(negative.has_value(), "indefinite cost admits a negative variance mixture");
  return rep.result;
}

SuiteResult persist_suite(std::uint64_t seed) {
  Reporter rep;
  rep.result.name = "cli-persist";

  RunConfig cfg;
  cfg.experiment.kind = ExperimentKind::convergence;
  cfg.experiment.measure.points = {{0.0}, {1.0}};
  cfg.experiment.measure.weights = {0.5, 0.5};
  cfg.experiment.cost_name = "gaussian";
  cfg.experiment.cost_params["s"] = 1.0 / std::sqrt(2.0);
  cfg.experiment.range_min = 2;
  cfg.experiment.range_max = 5;
  cfg.seed = seed;

  const auto parsed = config_from_toml(dump_config(cfg));
  rep.check(parsed == cfg, "config round-trip identity");

  const auto base = std::filesystem::temp_directory_path() /
                    ("mmot-validate-" + std::to_string(seed));
  const auto r1 = run_experiment(cfg);
  const auto r2 = run_experiment(cfg);
  persist(r1, (base / "a").string());
  persist(r2, (base / "b").string());
  for (const char* name : {"result.json", "table.csv", "plot.svg", "manifest.json"}) {
    rep.check(io::read_file((base / "a" / name).string()) ==
                  io::read_file((base / "b" / name).string()),
              std::string("byte-identical re-run: ") + name);
  }
  std::filesystem::remove_all(base);
  return rep.result;
}

}  // namespace

std::vector<SuiteResult> run_all(std::uint64_t seed) {
  return {
      measure_suite(seed + 1),  cost_suite(seed + 2),     lp_suite(seed + 3),
      solver_suite(seed + 4),   representability_suite(seed + 5),
      definetti_suite(seed + 6), fourier_suite(seed + 7), persist_suite(seed + 8),
  };
}

int run_and_print(std::uint64_t seed, std::ostream& out) {
  int total = 0;
  for (const auto& suite : run_all(seed)) {
    out << (suite.violations == 0 ? "[PASS] " : "[FAIL] ") << suite.name << ": "
        << suite.checked << " checks, " << suite.violations << " violations\n";
    for (const auto& note : suite.notes) out << "       - " << note << "\n";
    total += suite.violations;
  }
  return total;
}

}  // namespace mmot::validation
