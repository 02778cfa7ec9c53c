#include "mmot/cost.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "mmot/errors.hpp"
#include "mmot/fourier.hpp"
#include "mmot/multiset.hpp"

namespace mmot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(std::span<const double> z) {
  double s = 0.0;
  for (const double c : z) s += c * c;
  return s;
}

}  // namespace

CostFunction::CostFunction(std::string name, Evaluator ell, Flags flags,
                           std::map<std::string, double> parameters)
    : name_(std::move(name)), ell_(std::move(ell)), flags_(flags),
      parameters_(std::move(parameters)) {
  if (!ell_) throw DomainError("CostFunction: null evaluator");
}

double CostFunction::pair_value(const SupportGrid& grid, std::size_t i, std::size_t j) const {
  const auto z = grid.difference(i, j);
  return ell_(z);
}

double CostFunction::sup_on_grid(const SupportGrid& grid) const {
  double best = 0.0;
  const std::size_t m = grid.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) best = std::max(best, pair_value(grid, i, j));
  }
  return best;
}

CostFunction CostFunction::coulomb() {
  return CostFunction(
      "coulomb",
      [](std::span<const double> z) {
        const double r = std::sqrt(norm2(z));
        return r == 0.0 ? kInf : 1.0 / r;
      },
      Flags{.bounded = false, .singular_at_zero = true, .claims_positive_definite = true});
}

CostFunction CostFunction::coulomb_regularized(double eps) {
  if (!(eps > 0.0)) throw DomainError("coulomb_regularized: eps must be positive");
  return CostFunction(
      "coulomb_regularized",
      [eps](std::span<const double> z) { return 1.0 / std::max(std::sqrt(norm2(z)), eps); },
      Flags{.bounded = true, .singular_at_zero = false, .claims_positive_definite = false},
      {{"eps", eps}});
}

CostFunction CostFunction::gaussian(double s) {
  if (!(s > 0.0)) throw DomainError("gaussian: s must be positive");
  const double inv = 1.0 / (2.0 * s * s);
  return CostFunction(
      "gaussian", [inv](std::span<const double> z) { return std::exp(-norm2(z) * inv); },
      Flags{.bounded = true, .singular_at_zero = false, .claims_positive_definite = true},
      {{"s", s}});
}

CostFunction CostFunction::truncated_quadratic(double sigma) {
  if (!(sigma > 1.0)) throw DomainError("truncated_quadratic: sigma must exceed 1");
  const double a = 1.0 / (2.0 * sigma * sigma);
  const double b = sigma * sigma / 2.0;
  return CostFunction(
      "truncated_quadratic",
      [a, b](std::span<const double> z) {
        const double r2 = norm2(z);
        return std::exp(-r2 * a) - std::exp(-r2 * b);
      },
      Flags{.bounded = true, .singular_at_zero = false, .claims_positive_definite = false},
      {{"sigma", sigma}});
}

CostFunction CostFunction::quadratic() {
  return CostFunction(
      "quadratic", [](std::span<const double> z) { return norm2(z); },
      Flags{.bounded = false, .singular_at_zero = false, .claims_positive_definite = false});
}

CostFunction CostFunction::tabulated(std::vector<std::pair<std::vector<double>, double>> table) {
  if (table.empty()) throw DomainError("tabulated cost: empty table");
  auto match = [](std::span<const double> a, std::span<const double> b, double sign) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i] - sign * b[i]) > 1e-12) return false;
    }
    return true;
  };
  auto shared = std::make_shared<std::vector<std::pair<std::vector<double>, double>>>(std::move(table));
  for (const auto& [z, v] : *shared) {
    if (!(v >= 0.0)) throw DomainError("tabulated cost: negative value");
    (void)z;
  }
  return CostFunction(
      "tabulated",
      [shared, match](std::span<const double> z) {
        for (const auto& [key, value] : *shared) {
          if (match(z, key, 1.0) || match(z, key, -1.0)) return value;
        }
        throw DomainError("tabulated cost: difference vector not in table");
      },
      Flags{.bounded = true, .singular_at_zero = false, .claims_positive_definite = false});
}

CostFunction CostFunction::tabulated_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("tabulated cost: cannot open " + path);
  std::vector<std::pair<std::vector<double>, double>> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::vector<double> fields;
    std::string cell;
    while (std::getline(ss, cell, ',')) fields.push_back(std::stod(cell));
    if (fields.size() < 2) throw ConfigError("tabulated cost: row needs difference and value");
    const double value = fields.back();
    fields.pop_back();
    table.emplace_back(std::move(fields), value);
  }
  return tabulated(std::move(table));
}

CostFunction CostFunction::parse(const std::string& text) {
  std::string name = text;
  std::map<std::string, double> params;
  std::string file;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    std::stringstream ss(text.substr(colon + 1));
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("cost parameter needs key=value: " + kv);
      const std::string key = kv.substr(0, eq);
      const std::string val = kv.substr(eq + 1);
      if (key == "file") {
        file = val;
      } else {
        try {
          params[key] = std::stod(val);
        } catch (const std::exception&) {
          throw ConfigError("cost parameter is not a number: " + kv);
        }
      }
    }
  }
  auto want = [&](const char* key) {
    const auto it = params.find(key);
    if (it == params.end()) throw ConfigError("cost '" + name + "' needs parameter " + key);
    const double value = it->second;
    params.erase(it);
    return value;
  };
  CostFunction out = [&]() -> CostFunction {
    if (name == "coulomb") return coulomb();
    if (name == "coulomb_regularized") return coulomb_regularized(want("eps"));
    if (name == "gaussian") return gaussian(want("s"));
    if (name == "truncated_quadratic") return truncated_quadratic(want("sigma"));
    if (name == "quadratic") return quadratic();
    if (name == "tabulated") {
      if (file.empty()) throw ConfigError("tabulated cost needs file=path");
      return tabulated_from_csv(file);
    }
    throw ConfigError("unknown cost '" + name + "'");
  }();
  if (!params.empty()) {
    throw ConfigError("unknown parameter '" + params.begin()->first + "' for cost " + name);
  }
  return out;
}

double pair_cost_integral(const CostFunction& c, const PairMeasure& mu2) {
  const auto& grid = *mu2.grid();
  const std::size_t m = mu2.points();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double w = mu2(i, j);
      if (w == 0.0) continue;  // inf * 0 = 0
      const double v = c.pair_value(grid, i, j);
      if (std::isinf(v)) return kInf;
      total += v * w;
    }
  }
  return total;
}

double multiset_pair_cost(const CostFunction& c, const SupportGrid& grid,
                          std::span<const int> counts) {
  double total = 0.0;
  const std::size_t m = counts.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (counts[i] == 0) continue;
    if (counts[i] >= 2) {
      const double same = c.pair_value(grid, i, i);
      if (std::isinf(same)) return kInf;
      total += same * (counts[i] * (counts[i] - 1.0) / 2.0);
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      if (counts[j] == 0) continue;
      const double v = c.pair_value(grid, i, j);
      if (std::isinf(v)) return kInf;
      total += v * counts[i] * counts[j];
    }
  }
  return total;
}

double nbody_cost(const CostFunction& c, const NBodyMeasure& gamma) {
  const auto& grid = *gamma.grid();
  const std::size_t m = grid.size();
  double total = 0.0;
  if (gamma.mode() == Mode::multiset) {
    std::vector<int> counts(m);
    multiset::first(counts, gamma.bodies());
    std::uint64_t idx = 0;
    do {
      const double w = gamma.weights()[idx++];
      if (w == 0.0) continue;
      const double v = multiset_pair_cost(c, grid, counts);
      if (std::isinf(v)) return kInf;
      total += v * w;
    } while (multiset::next(counts));
    return total;
  }
  const int n = gamma.bodies();
  std::vector<int> tuple(n);
  const std::size_t count = gamma.weights().size();
  for (std::size_t idx = 0; idx < count; ++idx) {
    const double w = gamma.weights()[idx];
    if (w == 0.0) continue;
    std::size_t rest = idx;
    for (int p = n - 1; p >= 0; --p) {
      tuple[p] = static_cast<int>(rest % m);
      rest /= m;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double v = c.pair_value(grid, tuple[p], tuple[q]);
        if (std::isinf(v)) return kInf;
        total += v * w;
      }
    }
  }
  return total;
}

const char* to_string(SpectrumClass c) {
  switch (c) {
    case SpectrumClass::strictly_positive: return "strictly_positive";
    case SpectrumClass::positive: return "positive";
    case SpectrumClass::indefinite: return "indefinite";
  }
  return "?";
}

ClassifyResult classify_positive_definite(const CostFunction& c, const SupportGrid& torus,
                                          double tol) {
  if (!torus.is_uniform_torus()) {
    throw DomainError("classify_positive_definite: grid must be a uniform torus");
  }
  const auto samples = fourier::sample_on_torus(c, torus);
  for (const double v : samples) {
    if (!std::isfinite(v)) {
      throw DomainError("classify_positive_definite: cost is singular on the grid");
    }
  }
  const auto spectrum = fourier::dft(torus, samples);
  std::vector<double> real(spectrum.values().size());
  double min_coeff = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < real.size(); ++i) {
    real[i] = spectrum.values()[i].real();
    min_coeff = std::min(min_coeff, real[i]);
  }
  SpectrumClass verdict = SpectrumClass::indefinite;
  if (min_coeff > tol) {
    verdict = SpectrumClass::strictly_positive;
  } else if (min_coeff >= -tol) {
    verdict = SpectrumClass::positive;
  }
  return ClassifyResult{verdict, std::move(real), min_coeff};
}

}  // namespace mmot
