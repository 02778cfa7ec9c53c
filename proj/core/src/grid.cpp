#include "mmot/grid.hpp"

#include <cmath>
#include <utility>

#include "mmot/errors.hpp"

namespace mmot {

SupportGrid::SupportGrid(int dimension, std::vector<std::vector<double>> points,
                         std::optional<double> period)
    : dimension_(dimension), points_(std::move(points)), period_(period) {
  if (dimension_ < 1) throw DomainError("SupportGrid: dimension must be positive");
  if (points_.empty()) throw DomainError("SupportGrid: at least one point required");
  for (const auto& p : points_) {
    if (static_cast<int>(p.size()) != dimension_) {
      throw DomainError("SupportGrid: point dimension mismatch");
    }
    for (const double c : p) {
      if (!std::isfinite(c)) throw DomainError("SupportGrid: non-finite coordinate");
      if (period_ && (c < 0.0 || c >= *period_)) {
        throw DomainError("SupportGrid: periodic coordinate outside [0, L)");
      }
    }
  }
  if (period_ && !(*period_ > 0.0)) throw DomainError("SupportGrid: period must be positive");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (points_[i] == points_[j]) throw DomainError("SupportGrid: duplicate point");
    }
  }
}

SupportGrid SupportGrid::line(std::vector<double> coords, std::optional<double> period) {
  std::vector<std::vector<double>> pts;
  pts.reserve(coords.size());
  for (const double c : coords) pts.push_back({c});
  return SupportGrid(1, std::move(pts), period);
}

SupportGrid SupportGrid::uniform_torus(int dimension, int points_per_axis, double period) {
  if (points_per_axis < 1) throw DomainError("uniform_torus: need at least one point per axis");
  const double h = period / points_per_axis;
  std::size_t total = 1;
  for (int a = 0; a < dimension; ++a) total *= static_cast<std::size_t>(points_per_axis);
  std::vector<std::vector<double>> pts(total, std::vector<double>(dimension));
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (int a = dimension - 1; a >= 0; --a) {
      pts[i][a] = static_cast<double>(rest % points_per_axis) * h;
      rest /= points_per_axis;
    }
  }
  SupportGrid g(dimension, std::move(pts), period);
  g.uniform_torus_ = true;
  g.points_per_axis_ = points_per_axis;
  return g;
}

double SupportGrid::period() const {
  if (!period_) throw DomainError("SupportGrid: grid is not periodic");
  return *period_;
}

int SupportGrid::points_per_axis() const {
  if (!uniform_torus_) throw DomainError("SupportGrid: not a uniform torus");
  return points_per_axis_;
}

std::vector<double> SupportGrid::wrap(std::span<const double> z) const {
  std::vector<double> out(z.begin(), z.end());
  if (!period_) return out;
  const double L = *period_;
  for (double& c : out) {
    c -= L * std::floor(c / L);
    if (c >= L / 2) c -= L;
  }
  return out;
}

std::vector<double> SupportGrid::difference(std::size_t i, std::size_t j) const {
  std::vector<double> z(dimension_);
  for (int a = 0; a < dimension_; ++a) z[a] = points_[i][a] - points_[j][a];
  if (period_) return wrap(z);
  return z;
}

bool SupportGrid::operator==(const SupportGrid& other) const {
  return dimension_ == other.dimension_ && points_ == other.points_ &&
         period_ == other.period_;
}

GridPtr make_grid(int dimension, std::vector<std::vector<double>> points,
                  std::optional<double> period) {
  return std::make_shared<const SupportGrid>(dimension, std::move(points), period);
}

GridPtr make_line_grid(std::vector<double> coords, std::optional<double> period) {
  return std::make_shared<const SupportGrid>(SupportGrid::line(std::move(coords), period));
}

GridPtr make_torus_grid(int dimension, int points_per_axis, double period) {
  return std::make_shared<const SupportGrid>(
      SupportGrid::uniform_torus(dimension, points_per_axis, period));
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace mmot
