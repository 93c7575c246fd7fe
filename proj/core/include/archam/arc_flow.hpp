#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "archam/free_energy.hpp"
#include "archam/measure.hpp"

namespace archam {

// Step-size and recording policy for the first-order scheme. Time is tracked
// by an integer step counter; a snapshot time t maps to step round(t/delta)
// and the echoed time is step*delta.
struct IntegratorConfig {
  double delta = 0.001;
  double t_max = 3.0;
  std::vector<double> snapshot_times = {0.0, 1.0, 2.0, 3.0};
  std::size_t record_energy_every = 1;
  double weight_p = 2.0;
  DomainMode domain_mode = DomainMode::Warn;

  void validate() const;
};

struct Trajectory {
  std::vector<std::pair<double, State>> snapshots;
  std::vector<std::pair<double, double>> energy_series;  // (t, H)
  IntegratorConfig config;
  GridPtr grid;
  DomainReport initial_domain;
};

// Raised when a state component degenerates mid-run; carries the step index.
class FlowAbort : public std::runtime_error {
 public:
  FlowAbort(const std::string& message, std::size_t step)
      : std::runtime_error(message + " at step " + std::to_string(step)), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// Hamiltonian arc field Phi_s(f, P) = ((1+s) f + s f*, (1-s) P + s P*). The
// measure component moves along the mixture geodesic, combined in log space
// so weights stay non-negative by construction. Requires s in [0, 1].
State arc_field(const State& s, double step);

// Same point reached through the raw symplectic variation,
// (f, P) + s (f* + f, P* - P), combined in linear space. Algebraically
// identical to arc_field; kept as a cross-check of the rewrite.
State arc_field_generic(const State& s, double step);

// One step of the first-order discretisation; identical to arc_field(s, delta).
State euler_step(const State& s, double delta);

using FlowObserver = std::function<void(std::size_t step, const State& state)>;

// Iterates euler_step from t=0 to t_max, recording snapshots at the
// configured times and H at the configured cadence. Total mass is
// renormalised when it drifts beyond 1e-12 and the run aborts beyond 1e-9.
// The observer, when set, sees every state including the initial one.
Trajectory integrate_flow(const State& s0, const IntegratorConfig& cfg,
                          const FlowObserver& observer = nullptr);

// max_t |H(t) - H(0)| over a recorded energy series
double energy_drift(const std::vector<std::pair<double, double>>& energy_series);
double energy_drift(const Trajectory& traj);

struct ResidualPoint {
  double s = 0.0;
  double residual_over_s = 0.0;
};

// drift at or below this level counts as exact conservation (roundoff only)
inline constexpr double kDriftNoiseFloor = 1e-13;

// Probes the defining limit of the flow: for each s, integrates a reference
// state to time s with a much finer step and reports
// d(reference, Phi_s(s0)) / s under the product metric. A ref_delta of zero
// selects the default policy ref_delta = s / 100.
std::vector<ResidualPoint> arc_residual(const State& s0, std::span<const double> s_values,
                                        const WeightFn& w, double ref_delta = 0.0);

// Empirical order of the scheme: least-squares slope of log drift against
// log delta at a fixed horizon. Returns +inf when any drift is exactly zero.
double convergence_order(const State& s0, std::span<const double> deltas, double t_max);

}  // namespace archam
