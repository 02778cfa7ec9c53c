#include "mmot/serialize.hpp"

#include <cmath>
#include <json.hpp>

#include "mmot/errors.hpp"
#include "mmot/io.hpp"

namespace mmot::serialize {

namespace {

using nlohmann::json;

json num(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  if (std::isnan(v)) return json();
  return json(v);
}

json weights_json(std::span<const double> w) {
  json a = json::array();
  for (const double x : w) a.push_back(num(x));
  return a;
}

json grid_json(const SupportGrid& g) {
  json points = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    json p = json::array();
    for (const double c : g.point(i)) p.push_back(c);
    points.push_back(std::move(p));
  }
  json out{{"dimension", g.dimension()}, {"points", std::move(points)}};
  if (g.periodic()) out["period"] = g.period();
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const char* what) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : allowed) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
  }
}

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError(std::string(what) + ": invalid JSON");
  return j;
}

GridPtr grid_from(const json& j) {
  if (!j.is_object()) throw ConfigError("grid: expected an object");
  expect_keys(j, {"dimension", "points", "period"}, "grid");
  const int d = j.at("dimension").get<int>();
  std::vector<std::vector<double>> points;
  for (const auto& p : j.at("points")) points.push_back(p.get<std::vector<double>>());
  std::optional<double> period;
  if (j.contains("period")) period = j.at("period").get<double>();
  return make_grid(d, std::move(points), period);
}

std::vector<double> weights_from(const json& j) {
  std::vector<double> w;
  w.reserve(j.size());
  for (const auto& v : j) {
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf") {
        w.push_back(std::numeric_limits<double>::infinity());
        continue;
      }
      throw ConfigError("weights: unexpected string '" + s + "'");
    }
    w.push_back(v.get<double>());
  }
  return w;
}

}  // namespace

std::string to_json(const DiscreteMeasure& mu) {
  json j{{"kind", "discrete"},
         {"grid", grid_json(*mu.grid())},
         {"scheme", "dense"},
         {"weights", weights_json(mu.weights())}};
  return dump(j);
}

std::string to_json(const PairMeasure& mu2) {
  json j{{"kind", "pair"},
         {"grid", grid_json(*mu2.grid())},
         {"scheme", "dense"},
         {"weights", weights_json(mu2.weights())}};
  return dump(j);
}

std::string to_json(const NBodyMeasure& gamma) {
  json j{{"kind", "nbody"},
         {"grid", grid_json(*gamma.grid())},
         {"n", gamma.bodies()},
         {"scheme", gamma.mode() == Mode::multiset ? "multiset" : "dense"},
         {"weights", weights_json(gamma.weights())}};
  return dump(j);
}

std::string to_json(const Mixture& nu) {
  json comps = json::array();
  for (std::size_t a = 0; a < nu.size(); ++a) {
    comps.push_back(weights_json(nu.component(a).weights()));
  }
  json j{{"kind", "mixture"},
         {"grid", grid_json(*nu.grid())},
         {"mixing_weights", weights_json(nu.weights())},
         {"components", std::move(comps)}};
  return dump(j);
}

std::string to_json(const SolveReport& report) {
  json j{{"kind", "solve_report"},
         {"n", report.bodies},
         {"formulation", report.formulation == Formulation::direct ? "direct" : "reduced"},
         {"value_per_pair", num(report.value_per_pair)},
         {"total_cost", num(report.total_cost)},
         {"infinite", report.infinite},
         {"lp",
          {{"rows", report.lp_stats.rows},
           {"cols", report.lp_stats.cols},
           {"iterations", report.lp_stats.iterations},
           {"status", lp::to_string(report.lp_stats.status)}}}};
  if (report.optimal_pair) j["optimal_pair"] = json::parse(to_json(*report.optimal_pair));
  if (report.optimal_nbody) j["optimal_nbody"] = json::parse(to_json(*report.optimal_nbody));
  return dump(j);
}

std::string to_json(const RepresentabilityAnswer& answer) {
  json j{{"kind", "representability"},
         {"n", answer.bodies},
         {"feasible", answer.feasible}};
  if (answer.witness) {
    j["witness"] = json::parse(to_json(*answer.witness));
  } else {
    j["farkas"] = weights_json(answer.farkas);
    j["farkas_margin"] = num(answer.farkas_margin);
    j["numerically_marginal"] = answer.numerically_marginal;
  }
  return dump(j);
}

std::string to_json(const ClassifyResult& result) {
  json j{{"kind", "spectrum_classification"},
         {"verdict", to_string(result.verdict)},
         {"grid_relative", true},
         {"min_coefficient", num(result.min_coefficient)},
         {"spectrum", weights_json(result.spectrum)}};
  return dump(j);
}

std::string to_json(const fourier::VarianceDecomposition& d) {
  json j{{"kind", "variance_decomposition"},
         {"mean_field", num(d.mean_field)},
         {"variance_term", num(d.variance_term)},
         {"c_infinity", num(d.c_infinity)},
         {"identity_error", num(d.identity_error)},
         {"mean_field_spectral", num(d.mean_field_spectral)}};
  return dump(j);
}

DiscreteMeasure discrete_from_json(const std::string& text) {
  const json j = parse(text, "discrete measure");
  expect_keys(j, {"kind", "grid", "scheme", "weights"}, "discrete measure");
  if (j.at("kind") != "discrete") throw ConfigError("expected kind 'discrete'");
  return DiscreteMeasure(grid_from(j.at("grid")), weights_from(j.at("weights")));
}

PairMeasure pair_from_json(const std::string& text) {
  const json j = parse(text, "pair measure");
  expect_keys(j, {"kind", "grid", "scheme", "weights"}, "pair measure");
  if (j.at("kind") != "pair") throw ConfigError("expected kind 'pair'");
  return PairMeasure(grid_from(j.at("grid")), weights_from(j.at("weights")));
}

NBodyMeasure nbody_from_json(const std::string& text) {
  const json j = parse(text, "nbody measure");
  expect_keys(j, {"kind", "grid", "n", "scheme", "weights"}, "nbody measure");
  if (j.at("kind") != "nbody") throw ConfigError("expected kind 'nbody'");
  const auto scheme = j.at("scheme").get<std::string>();
  if (scheme != "multiset" && scheme != "dense") {
    throw ConfigError("nbody measure: scheme must be 'multiset' or 'dense'");
  }
  return NBodyMeasure(grid_from(j.at("grid")), j.at("n").get<int>(),
                      scheme == "multiset" ? Mode::multiset : Mode::dense,
                      weights_from(j.at("weights")));
}

Mixture mixture_from_json(const std::string& text) {
  const json j = parse(text, "mixture");
  expect_keys(j, {"kind", "grid", "mixing_weights", "components"}, "mixture");
  if (j.at("kind") != "mixture") throw ConfigError("expected kind 'mixture'");
  const auto grid = grid_from(j.at("grid"));
  std::vector<DiscreteMeasure> comps;
  for (const auto& c : j.at("components")) comps.emplace_back(grid, weights_from(c));
  return Mixture(std::move(comps), weights_from(j.at("mixing_weights")));
}

std::string spectrum_to_csv(const fourier::TorusSpectrum& spectrum) {
  std::string out = io::csv_row({"index", "real", "imag"});
  for (std::size_t i = 0; i < spectrum.values().size(); ++i) {
    out += io::csv_row({std::to_string(i), io::format_double(spectrum.values()[i].real()),
                        io::format_double(spectrum.values()[i].imag())});
  }
  return out;
}

}  // namespace mmot::serialize
