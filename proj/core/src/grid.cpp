#include "archam/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace archam {

namespace {
constexpr double kUniformSpacingTol = 1e-12;
}

Grid::Grid(GridKind kind, std::vector<double> points, double cell_width, double min, double max)
    : kind_(kind), points_(std::move(points)), cell_width_(cell_width), min_(min), max_(max) {}

std::shared_ptr<const Grid> Grid::uniform(double min, double max, std::size_t n) {
  if (!std::isfinite(min) || !std::isfinite(max)) {
    throw std::invalid_argument("uniform grid: bounds must be finite");
  }
  if (n == 0) throw std::invalid_argument("uniform grid: n must be positive");
  if (!(min < max)) throw std::invalid_argument("uniform grid: min must be below max");

  const double dtheta = (max - min) / static_cast<double>(n);
  std::vector<double> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = min + static_cast<double>(i) * dtheta;
  }
  // spacing invariant: |theta_{i+1} - theta_i - dtheta| <= 1e-12
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::fabs(pts[i + 1] - pts[i] - dtheta) > kUniformSpacingTol) {
      throw std::runtime_error("uniform grid: spacing invariant violated");
    }
  }
  return std::shared_ptr<const Grid>(new Grid(GridKind::Uniform1d, std::move(pts), dtheta, min, max));
}

std::shared_ptr<const Grid> Grid::labels(std::vector<double> points) {
  if (points.empty()) throw std::invalid_argument("label grid: need at least one point");
  for (double p : points) {
    if (!std::isfinite(p)) throw std::invalid_argument("label grid: points must be finite");
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] < points[i + 1])) {
      throw std::invalid_argument("label grid: points must be strictly increasing");
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return std::shared_ptr<const Grid>(new Grid(GridKind::FiniteLabels, std::move(points), 1.0, nan, nan));
}

bool Grid::same_layout(const Grid& other) const {
  if (kind_ != other.kind_ || points_.size() != other.points_.size()) return false;
  if (cell_width_ != other.cell_width_) return false;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] != other.points_[i]) return false;
  }
  return true;
}

GridPtr build_uniform_grid(double min, double max, std::size_t n) { return Grid::uniform(min, max, n); }

GridPtr build_label_grid(std::vector<double> points) { return Grid::labels(std::move(points)); }

bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return a != nullptr;
  if (!a || !b) return false;
  return a->same_layout(*b);
}

WeightFn::WeightFn(double exponent) : exponent_(exponent) {
  if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
    throw std::invalid_argument("weight function: exponent must be finite and >= 0");
  }
}

}  // namespace archam
