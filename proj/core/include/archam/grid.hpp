#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

namespace archam {

enum class GridKind { FiniteLabels, Uniform1d };

// Discretisation of the parameter space: either a finite set of labels
// (arbitrary distinct reals, cell width 1 so weights equal point masses) or a
// uniform left-endpoint 1-D grid theta_i = min + i*dtheta, i = 0..n-1.
// Immutable after construction; shared by reference between potentials and
// measures living on it.
class Grid {
 public:
  static std::shared_ptr<const Grid> uniform(double min, double max, std::size_t n);
  static std::shared_ptr<const Grid> labels(std::vector<double> points);

  GridKind kind() const { return kind_; }
  std::size_t size() const { return points_.size(); }
  double point(std::size_t i) const { return points_[i]; }
  const std::vector<double>& points() const { return points_; }
  double cell_width() const { return cell_width_; }

  // uniform grids only; NaN for label grids
  double min() const { return min_; }
  double max() const { return max_; }

  bool same_layout(const Grid& other) const;

 private:
  Grid(GridKind kind, std::vector<double> points, double cell_width, double min, double max);

  GridKind kind_;
  std::vector<double> points_;
  double cell_width_;
  double min_;
  double max_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Left-endpoint grid over [min, max): theta_i = min + i*(max-min)/n. The right
// endpoint is excluded. Throws on non-finite bounds, min >= max or n = 0.
GridPtr build_uniform_grid(double min, double max, std::size_t n);

// Finite label set; points must be finite, strictly increasing and non-empty.
GridPtr build_label_grid(std::vector<double> points);

// True when two handles refer to one grid or to structurally identical grids.
bool same_grid(const GridPtr& a, const GridPtr& b);

// Polynomial-growth weight w(theta) = 1 + |theta|^p for p > 0. Exponent zero
// selects the unweighted case w = 1. By construction w >= 1 everywhere, so
// log_w >= 0.
class WeightFn {
 public:
  explicit WeightFn(double exponent);

  double exponent() const { return exponent_; }
  double operator()(double theta) const {
    return exponent_ == 0.0 ? 1.0 : 1.0 + std::pow(std::fabs(theta), exponent_);
  }
  double log_w(double theta) const { return exponent_ == 0.0 ? 0.0 : std::log((*this)(theta)); }

 private:
  double exponent_;
};

}  // namespace archam
