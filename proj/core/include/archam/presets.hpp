#pragma once

#include "archam/measure.hpp"
#include "archam/pendulum.hpp"

namespace archam {
namespace presets {

// Default discretisation for the location-model flows: 2000 left-endpoint
// cells over [-10, 10).
GridPtr default_flow_grid();

// Normal location model N(theta, 1) observed at x = 5:
// f0(theta) = (5 - theta)^2 / 2 + log(2 pi) / 2, prior density standard normal.
State normal_location_state(const GridPtr& grid, double datum = 5.0);

// Cauchy location model C(theta, 1) observed at x = 5:
// f0(theta) = log(1 + (5 - theta)^2) + log(pi), same prior.
State cauchy_location_state(const GridPtr& grid, double datum = 5.0);

// Three-label system: f0 = (2.0, 1.0, 0.5) on labels {1, 2, 3}, uniform P0.
State three_label_state();

// Single-atom grid {1} for the scalar visualisation of H over (0,inf)^2.
GridPtr scalar_grid();

// H extended to a positive scalar mass on the single-atom grid.
double scalar_free_energy(double f, double mass);

// Pendulum released at angle 1 rad with zero momentum.
PendulumState default_pendulum_state();

}  // namespace presets
}  // namespace archam
