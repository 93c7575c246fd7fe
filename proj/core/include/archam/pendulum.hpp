#pragma once

#include <span>
#include <utility>
#include <vector>

#include "archam/arc_flow.hpp"

namespace archam {

// Standard acceleration of gravity; the pendulum's rod length and mass are 1.
inline constexpr double kStandardGravity = 9.80665;

struct PendulumState {
  double angle = 0.0;     // radians, unwrapped
  double momentum = 0.0;
  double gravity = kStandardGravity;
};

struct PendulumTrajectory {
  std::vector<std::pair<double, PendulumState>> snapshots;
  std::vector<std::pair<double, double>> energy_series;  // (t, H)
  IntegratorConfig config;
};

// H(x, z) = z^2 / 2 - g^2 cos(x)
double pendulum_energy(const PendulumState& s);

// Hamilton's equations: (dx/dt, dz/dt) = (z, -g^2 sin x)
std::pair<double, double> pendulum_field(const PendulumState& s);

PendulumState pendulum_step(const PendulumState& s, double delta);

// Same explicit first-order scheme as the measure-space flow, so the
// classical system exercises the identical numerical contract. The angle is
// never wrapped during integration.
PendulumTrajectory integrate_pendulum(const PendulumState& s0, const IntegratorConfig& cfg);

// log-log drift slope across a delta ladder at fixed horizon
double pendulum_convergence_order(const PendulumState& s0, std::span<const double> deltas,
                                  double t_max);

}  // namespace archam
