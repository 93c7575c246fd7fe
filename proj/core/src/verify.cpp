#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "archam/arc_flow.hpp"
#include "archam/free_energy.hpp"
#include "archam/numerics.hpp"
#include "archam/pendulum.hpp"
#include "archam/presets.hpp"
#include "archam/runner.hpp"
#include "archam/variation_oracle.hpp"

namespace archam {

namespace {

constexpr double kDeltaLadder[] = {0.004, 0.002, 0.001};

struct DriftLadder {
  std::vector<double> deltas;
  std::vector<double> drifts;

  double slope() const {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (drifts[i] == 0.0) return kInf;
      lx.push_back(std::log(deltas[i]));
      ly.push_back(std::log(drifts[i]));
    }
    return least_squares_slope(lx, ly);
  }
};

DriftLadder flow_drift_ladder(const State& s0, double t_max) {
  DriftLadder ladder;
  for (double d : kDeltaLadder) {
    IntegratorConfig cfg;
    cfg.delta = d;
    cfg.t_max = t_max;
    cfg.snapshot_times = {};
    cfg.record_energy_every = 1;
    ladder.deltas.push_back(d);
    ladder.drifts.push_back(energy_drift(integrate_flow(s0, cfg)));
  }
  return ladder;
}

DriftLadder pendulum_drift_ladder(const PendulumState& s0, double t_max) {
  DriftLadder ladder;
  for (double d : kDeltaLadder) {
    IntegratorConfig cfg;
    cfg.delta = d;
    cfg.t_max = t_max;
    cfg.snapshot_times = {};
    cfg.record_energy_every = 1;
    ladder.deltas.push_back(d);
    ladder.drifts.push_back(energy_drift(integrate_pendulum(s0, cfg).energy_series));
  }
  return ladder;
}

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(6);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out << ", ";
    out << v[i];
  }
  return out.str();
}

// random probability-plus-potential pair on the three-label grid
State random_three_label_state(Rng& rng, const GridPtr& grid) {
  std::vector<double> f(3);
  for (double& x : f) x = rng.uniform(0.0, 3.0);
  return State(Potential(grid, std::move(f)), Measure::from_weights(grid, rng.dirichlet(3)));
}

CheckResult domain_report_check(const std::string& name, const State& s, const WeightFn& w) {
  const DomainReport report = domain_check(s, w, DomainMode::Warn);
  double f_min = kInf;
  for (double v : s.f().values()) f_min = std::min(f_min, v);
  CheckResult result;
  result.name = name;
  result.tolerance = 0.0;
  result.observed = static_cast<double>(report.violations.size());
  result.passed = report.probability_ok && f_min >= 0.0;
  std::ostringstream details;
  details << "probability mass " << report.total_mass << ", min f " << f_min << ", "
          << report.violations.size() << " pointwise f<log w sites (informational, warn mode)";
  result.details = details.str();
  return result;
}

}  // namespace

VerifyReport verify_suite(const RunConfig& cfg) {
  const double scale = cfg.tolerance_scale;
  const std::uint64_t seed = cfg.seed;
  const WeightFn weight(cfg.weight_p);

  const GridPtr flow_grid = build_uniform_grid(cfg.grid_min, cfg.grid_max, cfg.grid_n);
  const GridPtr desk_grid = build_uniform_grid(cfg.grid_min, cfg.grid_max, 200);

  std::vector<std::function<CheckResult()>> checks;

  // -- domain checks ---------------------------------------------------------
  checks.push_back([=] {
    return domain_report_check("domain.flow_normal", presets::normal_location_state(flow_grid),
                               weight);
  });
  checks.push_back([=] {
    return domain_report_check("domain.flow_cauchy", presets::cauchy_location_state(flow_grid),
                               weight);
  });
  checks.push_back(
      [=] { return domain_report_check("domain.simplex3", presets::three_label_state(), weight); });

  // -- first-variation verification ------------------------------------------
  checks.push_back([=] {
    const double tol = 1e-5 * scale;
    const VariationReport report =
        verify_first_variations(presets::three_label_state(), 50, tol, seed);
    return CheckResult{"first_variation.simplex3", report.passed, tol,
                       std::max(report.max_error_potential, report.max_error_measure),
                       report.coverage()};
  });
  checks.push_back([=] {
    const double tol = 1e-4 * scale;
    const VariationReport report =
        verify_first_variations(presets::normal_location_state(desk_grid), 50, tol, seed);
    return CheckResult{"first_variation.normal200", report.passed, tol,
                       std::max(report.max_error_potential, report.max_error_measure),
                       report.coverage()};
  });

  // -- saddle inequalities ----------------------------------------------------
  checks.push_back([=] {
    const double slack = 1e-9 * scale;
    const GridPtr grid = build_label_grid({1.0, 2.0, 3.0});
    Rng rng(seed, 101);
    std::size_t violations = 0;
    std::size_t performed = 0;
    const double alphas[] = {0.25, 0.5, 0.75};
    for (std::size_t k = 0; k < 1000; ++k) {
      const State a = random_three_label_state(rng, grid);
      const State b = random_three_label_state(rng, grid);
      const SaddleReport report =
          saddle_midpoint_check(a.f(), b.f(), a.p(), b.p(), alphas, slack);
      violations += report.violations.size();
      performed += report.checks;
    }
    return CheckResult{"saddle.simplex3_randomized", violations == 0, slack,
                       static_cast<double>(violations),
                       std::to_string(performed) + " midpoint inequalities"};
  });

  // -- Donsker-Varadhan residuals ----------------------------------------------
  checks.push_back([=] {
    const double tol = 1e-9 * scale;
    const double residual = donsker_varadhan_residual(presets::three_label_state());
    return CheckResult{"donsker_varadhan.simplex3", residual <= tol, tol, residual, ""};
  });
  checks.push_back([=] {
    const double tol = 1e-9 * scale;
    const double residual = donsker_varadhan_residual(presets::normal_location_state(flow_grid));
    return CheckResult{"donsker_varadhan.flow_normal", residual <= tol, tol, residual, ""};
  });

  // -- compatibility sweep -----------------------------------------------------
  checks.push_back([=] {
    const double tol = 1e-12 * scale;
    const State s = presets::three_label_state();
    const SymplecticVariation var = symplectic_variation(s);
    double worst_mass = 0.0;
    bool ok = true;
    for (int step = 0; step <= 10; ++step) {
      const double t = static_cast<double>(step) / 10.0;
      double mass = 0.0;
      for (std::size_t i = 0; i < var.p_dir.size(); ++i) {
        const double w = s.p().weight(i) + t * var.p_dir[i];
        if (w < 0.0) ok = false;
        mass += w;
        if (s.f().value(i) + t * var.f_dir.value(i) < s.f().value(i)) ok = false;
      }
      worst_mass = std::max(worst_mass, std::fabs(mass - 1.0));
    }
    return CheckResult{"compatibility.simplex3", ok && worst_mass <= tol, tol, worst_mass,
                       "s in {0, 0.1, ..., 1.0}"};
  });

  // -- flow domain preservation -------------------------------------------------
  auto preservation_check = [=](const std::string& name, const State& s0) {
    return [=]() -> CheckResult {
      const double tol = 1e-9 * scale;
      IntegratorConfig icfg;
      icfg.delta = 0.001;
      icfg.t_max = cfg.t_max;
      icfg.snapshot_times = {};
      icfg.record_energy_every = 1;
      icfg.weight_p = cfg.weight_p;
      icfg.domain_mode = cfg.domain_mode;

      double worst_mass = 0.0;
      bool monotone = true;
      bool nonneg = true;
      std::vector<double> prev_f;
      const FlowObserver observer = [&](std::size_t, const State& state) {
        worst_mass = std::max(worst_mass, std::fabs(state.p().total_mass() - 1.0));
        for (std::size_t i = 0; i < state.p().size(); ++i) {
          if (!(state.p().weight(i) >= 0.0)) nonneg = false;
        }
        if (!prev_f.empty()) {
          for (std::size_t i = 0; i < prev_f.size(); ++i) {
            if (state.f().value(i) < prev_f[i]) monotone = false;
          }
        }
        prev_f = state.f().values();
      };
      integrate_flow(s0, icfg, observer);
      return CheckResult{name, monotone && nonneg && worst_mass <= tol, tol, worst_mass,
                         "mass deviation, pointwise f growth and weight sign along the run"};
    };
  };
  checks.push_back(
      preservation_check("flow.preservation.normal", presets::normal_location_state(flow_grid)));
  checks.push_back(
      preservation_check("flow.preservation.cauchy", presets::cauchy_location_state(flow_grid)));

  // -- convergence order + drift halving ----------------------------------------
  auto order_window = [scale](double slope) {
    return slope >= 1.0 - 0.2 * scale && slope <= 1.0 + 0.2 * scale;
  };
  auto ratio_window = [scale](double r) {
    return r >= 2.0 - 0.3 * scale && r <= 2.0 + 0.3 * scale;
  };

  // delta-halving ladders: the log-log drift slope must sit near 1
  // everywhere; each halving must roughly halve the drift on the measure-space
  // flows, while the pendulum drift only needs to shrink monotonically
  // (explicit Euler spirals outward too fast there for a clean factor of 2)
  auto ladder_check = [=](const std::string& tag, const DriftLadder& ladder, bool check_ratios) {
    const double slope = ladder.slope();
    bool ok = order_window(slope);
    std::vector<double> ratios;
    for (std::size_t i = 0; i + 1 < ladder.drifts.size(); ++i) {
      const double r = ladder.drifts[i] / ladder.drifts[i + 1];
      ratios.push_back(r);
      if (check_ratios && !ratio_window(r)) ok = false;
      if (!check_ratios && !(r > 1.0)) ok = false;
    }
    return CheckResult{"convergence." + tag, ok, 0.2 * scale, slope,
                       "drifts: " + join_doubles(ladder.drifts) +
                           "; halving ratios: " + join_doubles(ratios)};
  };

  checks.push_back([=] {
    return ladder_check("pendulum",
                        pendulum_drift_ladder(presets::default_pendulum_state(), cfg.t_max),
                        false);
  });
  checks.push_back([=] {
    return ladder_check("flow_normal",
                        flow_drift_ladder(presets::normal_location_state(flow_grid), cfg.t_max),
                        true);
  });
  checks.push_back([=] {
    return ladder_check("flow_cauchy",
                        flow_drift_ladder(presets::cauchy_location_state(flow_grid), cfg.t_max),
                        true);
  });

  // -- arc-residual decay ---------------------------------------------------------
  checks.push_back([=]() -> CheckResult {
    const double s_values[] = {0.1, 0.05, 0.025};
    const auto residuals = arc_residual(presets::three_label_state(), s_values, weight);
    bool decreasing = true;
    std::vector<double> values;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      values.push_back(residuals[i].residual_over_s);
      if (i > 0 && !(residuals[i].residual_over_s < residuals[i - 1].residual_over_s)) {
        decreasing = false;
      }
    }
    return CheckResult{"arc_residual.simplex3", decreasing, 0.0, values.back(),
                       "residual/s: " + join_doubles(values)};
  });

  // -- constant-shift invariance ----------------------------------------------------
  checks.push_back([=]() -> CheckResult {
    const double tol_h = 1e-9 * scale;
    const double tol_w = 1e-12 * scale;
    const State s = presets::three_label_state();
    const double h0 = minimum_free_energy(s.f(), s.p());
    const Measure g0 = gibbs_posterior(s.f(), s.p());
    double worst = 0.0;
    bool ok = true;
    for (double c : {-10.0, 1.0, 100.0}) {
      const Potential shifted = s.f().shifted(c);
      const double dh = std::fabs(minimum_free_energy(shifted, s.p()) - h0);
      if (dh > tol_h) ok = false;
      const Measure g = gibbs_posterior(shifted, s.p());
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double dw = std::fabs(g.weight(i) - g0.weight(i));
        worst = std::max(worst, dw);
        if (dw > tol_w) ok = false;
      }
      worst = std::max(worst, dh);
    }
    return CheckResult{"constant_shift.simplex3", ok, tol_h, worst, "C in {-10, 1, 100}"};
  });

  // -- Jensen lower bound on the partition function ------------------------------------
  checks.push_back([=]() -> CheckResult {
    const double tol = 1e-9 * scale;
    const GridPtr grid = build_label_grid({1.0, 2.0, 3.0});
    Rng rng(seed, 202);
    double worst = -kInf;
    bool ok = true;
    for (std::size_t k = 0; k < 200; ++k) {
      const State s = random_three_label_state(rng, grid);
      const double gap = -integrate(s.f(), s.p()) - log_partition(s.f(), s.p());
      worst = std::max(worst, gap);
      if (gap > tol) ok = false;
    }
    return CheckResult{"jensen_bound.randomized", ok, tol, worst,
                       "log Z >= -<f,P> on 200 random states"};
  });

  // -- Gibbs variational principle -----------------------------------------------------
  checks.push_back([=]() -> CheckResult {
    const double tol = 1e-9 * scale;
    const GridPtr grid = build_label_grid({1.0, 2.0, 3.0});
    Rng rng(seed, 303);
    double worst = -kInf;
    bool ok = true;
    for (std::size_t k = 0; k < 200; ++k) {
      const State s = random_three_label_state(rng, grid);
      const double h = minimum_free_energy(s.f(), s.p());
      const Measure q = Measure::from_weights(grid, rng.dirichlet(3));
      const double gap = h - free_energy_functional(q, s.f(), s.p(), /*centered=*/true);
      worst = std::max(worst, gap);
      if (gap > tol) ok = false;
      const Measure p_star = gibbs_posterior(s.f(), s.p());
      const double at_min =
          std::fabs(free_energy_functional(p_star, s.f(), s.p(), /*centered=*/true) - h);
      if (at_min > tol) ok = false;
    }
    return CheckResult{"gibbs_variational.randomized", ok, tol, worst,
                       "F(Q) >= H with equality at P* on 200 random states"};
  });

  // -- local Lipschitz diagnostic for the symplectic variation ---------------------------
  checks.push_back([=]() -> CheckResult {
    const double k_hat = lipschitz_probe(presets::three_label_state(), weight, 0.1, 100, seed);
    return CheckResult{"lipschitz_probe.simplex3", std::isfinite(k_hat) && k_hat > 0.0, 0.0,
                       k_hat, "max d*(dH(a),dH(b))/d(a,b) over 100 pairs in a 0.1-ball"};
  });

  // -- byte determinism of a short run ----------------------------------------------------
  checks.push_back([=]() -> CheckResult {
    IntegratorConfig icfg;
    icfg.delta = 0.01;
    icfg.t_max = 0.5;
    icfg.snapshot_times = {0.0, 0.5};
    icfg.record_energy_every = 1;
    const State s0 = presets::normal_location_state(desk_grid);
    const Trajectory a = integrate_flow(s0, icfg);
    const Trajectory b = integrate_flow(s0, icfg);
    bool identical = a.energy_series.size() == b.energy_series.size();
    if (identical) {
      for (std::size_t i = 0; i < a.energy_series.size(); ++i) {
        if (a.energy_series[i] != b.energy_series[i]) identical = false;
      }
    }
    for (std::size_t si = 0; identical && si < a.snapshots.size(); ++si) {
      const auto& [ta, sa] = a.snapshots[si];
      const auto& [tb, sb] = b.snapshots[si];
      if (ta != tb || sa.f().values() != sb.f().values() ||
          sa.p().log_weights() != sb.p().log_weights()) {
        identical = false;
      }
    }
    return CheckResult{"determinism.flow_repeat", identical, 0.0,
                       identical ? 0.0 : 1.0, "two identical runs compared bitwise"};
  });

  // execute, optionally in parallel; aggregation order is the listing order either way
  VerifyReport report;
  report.seed = seed;
  report.checks.resize(checks.size());
  if (cfg.parallel) {
    std::vector<std::future<CheckResult>> futures;
    futures.reserve(checks.size());
    for (auto& check : checks) {
      futures.push_back(std::async(std::launch::async, check));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) report.checks[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < checks.size(); ++i) report.checks[i] = checks[i]();
  }

  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const CheckResult& c) { return c.passed; });
  return report;
}

RunArtifacts emit_verify_report(const VerifyReport& report, const RunConfig& cfg) {
  JsonValue checks_json = JsonValue::array();
  for (const auto& check : report.checks) {
    JsonValue j = JsonValue::object();
    j.set("name", check.name);
    j.set("passed", check.passed);
    j.set("tolerance", check.tolerance);
    j.set("observed", check.observed);
    if (!check.details.empty()) j.set("details", check.details);
    checks_json.push_back(std::move(j));
  }

  JsonValue report_doc = JsonValue::object();
  report_doc.set("passed", report.passed);
  report_doc.set("seed", report.seed);
  report_doc.set("checks", checks_json);

  OutputData data;
  data.documents.emplace_back("report", report_doc);

  JsonValue summary = JsonValue::object();
  summary.set("passed", report.passed);
  summary.set("n_checks", report.checks.size());

  RunArtifacts artifacts = emit_outputs(data, cfg.formats, cfg.out_dir, cfg.echo(), summary);
  artifacts.exit_code = report.passed ? 0 : 1;
  return artifacts;
}

RunArtifacts run_verify_suite(const RunConfig& cfg) {
  return emit_verify_report(verify_suite(cfg), cfg);
}

}  // namespace archam
