#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace mmot {

// Finite point set in R^d on which all measures live. Immutable after
// construction. The optional period L turns the grid into a torus with the
// same period on every axis; periodic coordinates must lie in [0, L).
class SupportGrid {
 public:
  SupportGrid(int dimension, std::vector<std::vector<double>> points,
              std::optional<double> period = std::nullopt);

  // 1-d grid from a coordinate list.
  static SupportGrid line(std::vector<double> coords,
                          std::optional<double> period = std::nullopt);

  // Regular lattice with points_per_axis points on each axis of a torus of
  // period L: coordinates n*(L/M) for n = 0..M-1, row-major point order.
  static SupportGrid uniform_torus(int dimension, int points_per_axis, double period);

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::span<const double> point(std::size_t i) const { return points_[i]; }

  bool periodic() const noexcept { return period_.has_value(); }
  double period() const;

  // True when the grid is the regular lattice produced by uniform_torus.
  bool is_uniform_torus() const noexcept { return uniform_torus_; }
  int points_per_axis() const;

  // x_i - x_j, wrapped to [-L/2, L/2) per axis on periodic grids
  // (minimum-image convention).
  std::vector<double> difference(std::size_t i, std::size_t j) const;

  // Wraps an arbitrary displacement to the minimum image.
  std::vector<double> wrap(std::span<const double> z) const;

  bool operator==(const SupportGrid& other) const;

 private:
  int dimension_;
  std::vector<std::vector<double>> points_;
  std::optional<double> period_;
  bool uniform_torus_ = false;
  int points_per_axis_ = 0;
};

using GridPtr = std::shared_ptr<const SupportGrid>;

GridPtr make_grid(int dimension, std::vector<std::vector<double>> points,
                  std::optional<double> period = std::nullopt);
GridPtr make_line_grid(std::vector<double> coords,
                       std::optional<double> period = std::nullopt);
GridPtr make_torus_grid(int dimension, int points_per_axis, double period);

// Same object or structurally equal.
bool same_grid(const GridPtr& a, const GridPtr& b);

}  // namespace mmot
