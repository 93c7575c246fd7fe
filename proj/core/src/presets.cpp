#include "archam/presets.hpp"

#include <cmath>
#include <numbers>

#include "archam/free_energy.hpp"

namespace archam {
namespace presets {

namespace {

double standard_normal_density(double theta) {
  return std::exp(-theta * theta / 2.0) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

GridPtr default_flow_grid() { return build_uniform_grid(-10.0, 10.0, 2000); }

State normal_location_state(const GridPtr& grid, double datum) {
  std::vector<double> f(grid->size());
  const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double theta = grid->point(i);
    f[i] = (datum - theta) * (datum - theta) / 2.0 + log_norm;
  }
  return State(Potential(grid, std::move(f)), discretize_density(grid, standard_normal_density));
}

State cauchy_location_state(const GridPtr& grid, double datum) {
  std::vector<double> f(grid->size());
  const double log_pi = std::log(std::numbers::pi);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double theta = grid->point(i);
    f[i] = std::log1p((datum - theta) * (datum - theta)) + log_pi;
  }
  return State(Potential(grid, std::move(f)), discretize_density(grid, standard_normal_density));
}

State three_label_state() {
  GridPtr grid = build_label_grid({1.0, 2.0, 3.0});
  Potential f(grid, {2.0, 1.0, 0.5});
  return State(std::move(f), Measure::uniform_probability(grid));
}

GridPtr scalar_grid() { return build_label_grid({1.0}); }

double scalar_free_energy(double f, double mass) {
  static const GridPtr grid = scalar_grid();
  Potential pot(grid, {f});
  Measure p = Measure::from_log_weights(grid, {std::log(mass)});
  return minimum_free_energy(pot, p, /*allow_nonprobability=*/true);
}

PendulumState default_pendulum_state() { return PendulumState{1.0, 0.0, kStandardGravity}; }

}  // namespace presets
}  // namespace archam
