#include "archam/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "archam/numerics.hpp"

namespace archam {

namespace {

// sin with the angle reduced modulo the representable pi, so that integer
// multiples of pi are exact zeros and both equilibria stay exactly
// stationary under the discrete map. remquo's remainder is exact and the
// quotient parity restores the sign.
double reduced_sin(double x) {
  int quadrant = 0;
  const double r = std::remquo(x, std::numbers::pi, &quadrant);
  const double s = std::sin(r);
  return (quadrant & 1) != 0 ? -s : s;
}

}  // namespace

double pendulum_energy(const PendulumState& s) {
  return s.momentum * s.momentum / 2.0 - s.gravity * s.gravity * std::cos(s.angle);
}

std::pair<double, double> pendulum_field(const PendulumState& s) {
  return {s.momentum, -s.gravity * s.gravity * reduced_sin(s.angle)};
}

PendulumState pendulum_step(const PendulumState& s, double delta) {
  const auto [dx, dz] = pendulum_field(s);
  return {s.angle + delta * dx, s.momentum + delta * dz, s.gravity};
}

PendulumTrajectory integrate_pendulum(const PendulumState& s0, const IntegratorConfig& cfg) {
  cfg.validate();

  PendulumTrajectory traj;
  traj.config = cfg;

  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.delta));
  std::vector<std::size_t> snaps;
  snaps.reserve(cfg.snapshot_times.size());
  for (double t : cfg.snapshot_times) {
    snaps.push_back(std::min(static_cast<std::size_t>(std::llround(t / cfg.delta)), n_steps));
  }
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
  std::size_t next_snap = 0;

  PendulumState state = s0;
  for (std::size_t step = 0; step <= n_steps; ++step) {
    if (!std::isfinite(state.angle) || !std::isfinite(state.momentum)) {
      throw FlowAbort("pendulum: non-finite state", step);
    }
    const double t = static_cast<double>(step) * cfg.delta;
    if (next_snap < snaps.size() && snaps[next_snap] == step) {
      traj.snapshots.emplace_back(t, state);
      ++next_snap;
    }
    if (step % cfg.record_energy_every == 0 || step == n_steps) {
      traj.energy_series.emplace_back(t, pendulum_energy(state));
    }
    if (step == n_steps) break;
    state = pendulum_step(state, cfg.delta);
  }
  return traj;
}

double pendulum_convergence_order(const PendulumState& s0, std::span<const double> deltas,
                                  double t_max) {
  if (deltas.size() < 2) throw std::invalid_argument("pendulum_convergence_order: need >= 2 deltas");
  std::vector<double> log_delta, log_drift;
  for (double d : deltas) {
    IntegratorConfig cfg;
    cfg.delta = d;
    cfg.t_max = t_max;
    cfg.snapshot_times = {};
    cfg.record_energy_every = 1;
    const double drift = energy_drift(integrate_pendulum(s0, cfg).energy_series);
    if (drift == 0.0) return kInf;
    log_delta.push_back(std::log(d));
    log_drift.push_back(std::log(drift));
  }
  return least_squares_slope(log_delta, log_drift);
}

}  // namespace archam
