#include "archam/arc_flow.hpp"

#include <algorithm>
#include <cmath>

#include "archam/numerics.hpp"

namespace archam {

namespace {

constexpr double kRenormaliseTol = 1e-12;
constexpr double kAbortTol = 1e-9;

void check_state_finite(const State& s, std::size_t step) {
  for (double v : s.f().values()) {
    if (!std::isfinite(v)) throw FlowAbort("flow: non-finite potential value", step);
  }
  for (double lw : s.p().log_weights()) {
    // -inf is legitimate zero mass; NaN and +inf are not
    if (std::isnan(lw) || lw == kInf) throw FlowAbort("flow: degenerate log-weight", step);
  }
}

// Enforces the mass policy on a freshly combined measure: renormalise when
// the total drifts past 1e-12, abort past 1e-9.
Measure settle_mass(Measure m, std::size_t step) {
  const double dev = std::fabs(m.total_mass() - 1.0);
  if (dev > kAbortTol) throw FlowAbort("flow: probability mass drifted beyond 1e-9", step);
  if (dev > kRenormaliseTol) return m.normalised();
  return m;
}

std::vector<std::size_t> snapshot_steps(const IntegratorConfig& cfg, std::size_t n_steps) {
  std::vector<std::size_t> steps;
  steps.reserve(cfg.snapshot_times.size());
  for (double t : cfg.snapshot_times) {
    auto k = static_cast<std::size_t>(std::llround(t / cfg.delta));
    steps.push_back(std::min(k, n_steps));
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(delta > 0.0) || delta > 1.0) {
    throw std::invalid_argument("integrator config: delta must lie in (0, 1]");
  }
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("integrator config: t_max must be finite and >= 0");
  }
  if (record_energy_every == 0) {
    throw std::invalid_argument("integrator config: record_energy_every must be positive");
  }
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    const double t = snapshot_times[i];
    if (t < 0.0 || t > t_max) {
      throw std::invalid_argument("integrator config: snapshot times must lie in [0, t_max]");
    }
    if (i > 0 && snapshot_times[i - 1] > t) {
      throw std::invalid_argument("integrator config: snapshot times must be sorted");
    }
  }
}

State arc_field(const State& s, double step) {
  if (!(step >= 0.0) || step > 1.0) {
    throw std::invalid_argument("arc_field: step must lie in [0, 1]");
  }
  const double log_z = log_partition(s.f(), s.p());

  std::vector<double> f_new(s.f().size());
  std::vector<double> lw_new(s.p().size());

  const double log_keep = step < 1.0 ? std::log1p(-step) : kNegInf;
  const double log_move = step > 0.0 ? std::log(step) : kNegInf;

  for (std::size_t i = 0; i < f_new.size(); ++i) {
    const double fi = s.f().value(i);
    const double f_star = std::exp(-fi - log_z);
    f_new[i] = (1.0 + step) * fi + step * f_star;

    const double lw = s.p().log_weight(i);
    const double lw_star = lw == kNegInf ? kNegInf : lw - fi - log_z;
    lw_new[i] = log_sum_exp2(log_keep == kNegInf ? kNegInf : log_keep + lw,
                             log_move == kNegInf ? kNegInf : log_move + lw_star);
  }

  return State(Potential(s.grid(), std::move(f_new)),
               Measure::from_log_weights(s.grid(), std::move(lw_new)));
}

State arc_field_generic(const State& s, double step) {
  if (!(step >= 0.0) || step > 1.0) {
    throw std::invalid_argument("arc_field_generic: step must lie in [0, 1]");
  }
  const SymplecticVariation var = symplectic_variation(s);

  std::vector<double> f_new(s.f().size());
  std::vector<double> w_new = s.p().weights();
  for (std::size_t i = 0; i < f_new.size(); ++i) {
    f_new[i] = s.f().value(i) + step * var.f_dir.value(i);
    w_new[i] += step * var.p_dir[i];
  }

  return State(Potential(s.grid(), std::move(f_new)), Measure::from_weights(s.grid(), w_new));
}

State euler_step(const State& s, double delta) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw std::invalid_argument("euler_step: delta must lie in (0, 1]");
  }
  return arc_field(s, delta);
}

Trajectory integrate_flow(const State& s0, const IntegratorConfig& cfg,
                          const FlowObserver& observer) {
  cfg.validate();

  Trajectory traj;
  traj.config = cfg;
  traj.grid = s0.grid();
  traj.initial_domain = domain_check(s0, WeightFn(cfg.weight_p), cfg.domain_mode);

  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.delta));
  const std::vector<std::size_t> snaps = snapshot_steps(cfg, n_steps);
  std::size_t next_snap = 0;

  State state = s0;
  check_state_finite(state, 0);

  for (std::size_t step = 0; step <= n_steps; ++step) {
    const double t = static_cast<double>(step) * cfg.delta;

    if (observer) observer(step, state);
    if (next_snap < snaps.size() && snaps[next_snap] == step) {
      traj.snapshots.emplace_back(t, state);
      ++next_snap;
    }
    if (step % cfg.record_energy_every == 0 || step == n_steps) {
      const double h = minimum_free_energy(state.f(), state.p());
      if (!std::isfinite(h)) throw FlowAbort("flow: non-finite energy", step);
      traj.energy_series.emplace_back(t, h);
    }

    if (step == n_steps) break;

    // overflow inside the step surfaces as a construction failure; convert it
    // so the abort always carries the step index
    try {
      State next = euler_step(state, cfg.delta);
      check_state_finite(next, step + 1);
      Measure settled = settle_mass(next.p(), step + 1);
      state = State(next.f(), std::move(settled));
    } catch (const FlowAbort&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw FlowAbort(std::string("flow: state degenerated (") + e.what() + ")", step + 1);
    }
  }

  return traj;
}

double energy_drift(const std::vector<std::pair<double, double>>& energy_series) {
  if (energy_series.empty()) throw std::invalid_argument("energy_drift: empty series");
  const double h0 = energy_series.front().second;
  double drift = 0.0;
  for (const auto& [t, h] : energy_series) {
    drift = std::max(drift, std::fabs(h - h0));
  }
  return drift;
}

double energy_drift(const Trajectory& traj) { return energy_drift(traj.energy_series); }

std::vector<ResidualPoint> arc_residual(const State& s0, std::span<const double> s_values,
                                        const WeightFn& w, double ref_delta) {
  std::vector<ResidualPoint> out;
  out.reserve(s_values.size());
  for (double s : s_values) {
    if (!(s > 0.0) || s > 1.0) {
      throw std::invalid_argument("arc_residual: s values must lie in (0, 1]");
    }
    const double fine = ref_delta > 0.0 ? ref_delta : s / 100.0;
    const auto n = static_cast<std::size_t>(std::llround(s / fine));

    State reference = s0;
    for (std::size_t k = 0; k < n; ++k) reference = euler_step(reference, fine);

    const State coarse = arc_field(s0, s);
    out.push_back({s, product_metric(reference, coarse, w) / s});
  }
  return out;
}

double convergence_order(const State& s0, std::span<const double> deltas, double t_max) {
  if (deltas.size() < 2) throw std::invalid_argument("convergence_order: need >= 2 deltas");
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] < deltas[i - 1])) {
      throw std::invalid_argument("convergence_order: deltas must decrease");
    }
  }

  std::vector<double> log_delta, log_drift;
  for (double d : deltas) {
    IntegratorConfig cfg;
    cfg.delta = d;
    cfg.t_max = t_max;
    cfg.snapshot_times = {};
    cfg.record_energy_every = 1;
    const double drift = energy_drift(integrate_flow(s0, cfg));
    // drift at roundoff level means the scheme conserves exactly here;
    // a log-log slope over pure noise would be meaningless
    if (drift <= kDriftNoiseFloor) return kInf;
    log_delta.push_back(std::log(d));
    log_drift.push_back(std::log(drift));
  }
  return least_squares_slope(log_delta, log_drift);
}

}  // namespace archam
