#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/measure.hpp"

namespace mmot {

// One-body measure given inline (points + weights, optional torus period) or
// as a path to a measure JSON file.
struct MeasureSpec {
  std::optional<std::string> file;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  std::optional<double> period;

  DiscreteMeasure build() const;
  bool operator==(const MeasureSpec&) const = default;
};

enum class ExperimentKind { convergence, hierarchy, deficit_scaling, counterexample, df_bound_sweep };

const char* to_string(ExperimentKind k);
ExperimentKind experiment_kind_from(const std::string& name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::convergence;
  MeasureSpec measure;
  std::string cost_name = "gaussian";
  std::map<std::string, double> cost_params;
  int range_min = 2;
  int range_max = 2;
  int hierarchy_bodies = 0;      // N for the hierarchy experiment
  double counterexample_sigma = 0.0;

  CostFunction build_cost() const;
  bool operator==(const ExperimentSpec&) const = default;
};

// Declarative run configuration. The on-disk format is a TOML subset
// (sections, key = value with strings, numbers, booleans, flat or
// one-level-nested arrays, # comments); a JSON file with the same section
// structure is accepted as an alternative. Unknown sections or keys are
// rejected.
struct RunConfig {
  ExperimentSpec experiment;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  int jobs = 0;  // 0 = all hardware threads
  std::uint64_t budget = kDefaultBudget;
  std::map<std::string, double> tolerance_overrides;  // tol_feasibility, tol_gap, tol_farkas
  bool write_csv = true;
  bool write_svg = true;

  bool operator==(const RunConfig&) const = default;
};

RunConfig config_from_toml(const std::string& text);
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);  // dispatches on .toml / .json

// Canonical TOML emission; config_from_toml(dump_config(c)) == c.
std::string dump_config(const RunConfig& config);

}  // namespace mmot
