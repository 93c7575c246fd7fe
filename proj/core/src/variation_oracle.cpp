#include "archam/variation_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "archam/numerics.hpp"

namespace archam {

namespace {

// mixes P toward a target probability in log space: (1-eps) P + eps Q
Measure mix_measures(const Measure& p, const Measure& q, double eps) {
  const double log_keep = eps < 1.0 ? std::log1p(-eps) : kNegInf;
  const double log_move = eps > 0.0 ? std::log(eps) : kNegInf;
  std::vector<double> lw(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p.log_weight(i) == kNegInf || log_keep == kNegInf
                         ? kNegInf
                         : log_keep + p.log_weight(i);
    const double b = q.log_weight(i) == kNegInf || log_move == kNegInf
                         ? kNegInf
                         : log_move + q.log_weight(i);
    lw[i] = log_sum_exp2(a, b);
  }
  return Measure::from_log_weights(p.grid(), std::move(lw));
}

State displaced(const State& s, const DirectionSpec& dir, double eps) {
  if (dir.kind == DirectionSpec::Kind::PotentialDirection) {
    std::vector<double> v(s.f().size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = s.f().value(i) + eps * dir.g->value(i);
    }
    return State(Potential(s.grid(), std::move(v)), s.p());
  }
  return State(s.f(), mix_measures(s.p(), *dir.target_q, eps));
}

void require_admissible(const State& s, const DirectionSpec& dir) {
  if (dir.kind == DirectionSpec::Kind::PotentialDirection) {
    if (!same_grid(dir.g->grid(), s.grid())) {
      throw std::invalid_argument("direction: potential lives on a different grid");
    }
    // f + g must stay in the (relaxed) domain: finite and non-negative
    for (std::size_t i = 0; i < s.f().size(); ++i) {
      const double v = s.f().value(i) + dir.g->value(i);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("direction: f + g leaves the domain");
      }
    }
  } else {
    if (!same_grid(dir.target_q->grid(), s.grid())) {
      throw std::invalid_argument("direction: target lives on a different grid");
    }
    if (!dir.target_q->is_probability()) {
      throw std::invalid_argument("direction: target is not a probability measure");
    }
  }
}

// analytic pairing of the direction with the corresponding first variation
double analytic_derivative(const State& s, const SymplecticVariation& var,
                           const DirectionSpec& dir) {
  if (dir.kind == DirectionSpec::Kind::PotentialDirection) {
    double acc = 0.0;  // <g, P* - P>
    for (std::size_t i = 0; i < var.p_dir.size(); ++i) {
      acc += dir.g->value(i) * var.p_dir[i];
    }
    return acc;
  }
  double acc = 0.0;  // <-f* - f, Q - P>
  for (std::size_t i = 0; i < var.f_dir.size(); ++i) {
    acc += -var.f_dir.value(i) * (dir.target_q->weight(i) - s.p().weight(i));
  }
  return acc;
}

}  // namespace

DirectionSpec DirectionSpec::potential(Potential g) {
  return DirectionSpec{Kind::PotentialDirection, std::move(g), std::nullopt};
}

DirectionSpec DirectionSpec::measure(Measure target_q) {
  return DirectionSpec{Kind::MeasureDirection, std::nullopt, std::move(target_q)};
}

double fd_directional_derivative(const State& s, const DirectionSpec& dir,
                                 std::span<const double> epsilons) {
  if (epsilons.empty()) throw std::invalid_argument("fd: need at least one epsilon");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw std::invalid_argument("fd: epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw std::invalid_argument("fd: epsilons must decrease");
    }
  }
  require_admissible(s, dir);

  const double h0 = minimum_free_energy(s.f(), s.p());
  const std::size_t n = epsilons.size();
  std::vector<double> quotients(n);
  for (std::size_t i = 0; i < n; ++i) {
    const State moved = displaced(s, dir, epsilons[i]);
    quotients[i] = (minimum_free_energy(moved.f(), moved.p()) - h0) / epsilons[i];
  }

  // Richardson table in Neville form: the quotient error expands as a power
  // series starting at first order, so polynomial extrapolation to eps = 0
  // removes one term per level, exactly for any decreasing ladder.
  std::vector<std::vector<double>> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    table[i].resize(i + 1);
    table[i][0] = quotients[i];
    for (std::size_t k = 1; k <= i; ++k) {
      const double eps_hi = epsilons[i - k];
      const double eps_lo = epsilons[i];
      table[i][k] =
          (eps_hi * table[i][k - 1] - eps_lo * table[i - 1][k - 1]) / (eps_hi - eps_lo);
    }
  }
  return table[n - 1][n - 1];
}

std::string VariationReport::coverage() const {
  return std::to_string(n_directions) +
         " random admissible directions per kind (seed " + std::to_string(seed) +
         "); a finite sample, not an exhaustive check of C(x)";
}

VariationReport verify_first_variations(const State& s, std::size_t n_directions,
                                        double tolerance, std::uint64_t seed) {
  VariationReport report;
  report.tolerance = tolerance;
  report.n_directions = n_directions;
  report.seed = seed;

  const SymplecticVariation var = symplectic_variation(s);
  const std::size_t n = s.grid()->size();

  for (std::size_t k = 0; k < n_directions; ++k) {
    // potential direction: non-negative bump, admissible since f >= 0
    {
      Rng rng(seed, 2 * k);
      std::vector<double> bump(n);
      for (double& b : bump) b = rng.uniform();
      DirectionSpec dir = DirectionSpec::potential(Potential(s.grid(), std::move(bump)));

      VariationSample sample;
      sample.kind = DirectionSpec::Kind::PotentialDirection;
      sample.fd = fd_directional_derivative(s, dir);
      sample.analytic = analytic_derivative(s, var, dir);
      sample.abs_error = std::fabs(sample.fd - sample.analytic);
      report.max_error_potential = std::max(report.max_error_potential, sample.abs_error);
      report.samples.push_back(sample);
    }
    // measure direction: flat Dirichlet target damped toward P, so the
    // quotient stays well inside the Richardson regime on fine grids
    {
      Rng rng(seed, 2 * k + 1);
      Measure dirichlet = Measure::from_weights(s.grid(), rng.dirichlet(n));
      Measure target = mix_measures(s.p(), dirichlet, 0.05);
      DirectionSpec dir = DirectionSpec::measure(std::move(target));

      VariationSample sample;
      sample.kind = DirectionSpec::Kind::MeasureDirection;
      sample.fd = fd_directional_derivative(s, dir);
      sample.analytic = analytic_derivative(s, var, dir);
      sample.abs_error = std::fabs(sample.fd - sample.analytic);
      report.max_error_measure = std::max(report.max_error_measure, sample.abs_error);
      report.samples.push_back(sample);
    }
  }

  report.passed = std::max(report.max_error_potential, report.max_error_measure) <= tolerance;
  return report;
}

SaddleReport saddle_midpoint_check(const Potential& f, const Potential& g, const Measure& p,
                                   const Measure& q, std::span<const double> alphas,
                                   double slack) {
  SaddleReport report;
  report.slack = slack;

  const double h_fp = minimum_free_energy(f, p);
  const double h_gp = minimum_free_energy(g, p);
  const double h_fq = minimum_free_energy(f, q);

  for (double alpha : alphas) {
    if (alpha < 0.0 || alpha > 1.0) {
      throw std::invalid_argument("saddle check: alpha must lie in [0, 1]");
    }

    // concavity in the potential: H(a f + (1-a) g, P) >= a H(f,P) + (1-a) H(g,P)
    std::vector<double> blend(f.size());
    for (std::size_t i = 0; i < blend.size(); ++i) {
      blend[i] = alpha * f.value(i) + (1.0 - alpha) * g.value(i);
    }
    const double lhs_f = minimum_free_energy(Potential(f.grid(), std::move(blend)), p);
    const double rhs_f = alpha * h_fp + (1.0 - alpha) * h_gp;
    ++report.checks;
    if (lhs_f < rhs_f - slack) {
      report.violations.push_back({alpha, true, rhs_f - lhs_f});
    }

    // convexity in the measure: H(f, a P + (1-a) Q) <= a H(f,P) + (1-a) H(f,Q)
    const Measure mixed = mix_measures(p, q, 1.0 - alpha);
    const double lhs_p = minimum_free_energy(f, mixed);
    const double rhs_p = alpha * h_fp + (1.0 - alpha) * h_fq;
    ++report.checks;
    if (lhs_p > rhs_p + slack) {
      report.violations.push_back({alpha, false, lhs_p - rhs_p});
    }
  }
  return report;
}

double lipschitz_probe(const State& center, const WeightFn& w, double radius,
                       std::size_t n_pairs, std::uint64_t seed) {
  if (!(radius > 0.0)) throw std::invalid_argument("lipschitz probe: radius must be positive");

  const std::size_t n = center.grid()->size();

  auto perturb = [&](Rng& rng) -> State {
    // potential: bounded bump scaled by w so the rho-ball radius is radius/2;
    // resampled until f stays non-negative
    std::vector<double> f_new(n);
    for (int attempt = 0;; ++attempt) {
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        const double theta = center.grid()->point(i);
        f_new[i] = center.f().value(i) + (rng.uniform() - 0.5) * radius * w(theta);
        if (f_new[i] < 0.0) ok = false;
      }
      if (ok) break;
      if (attempt > 256) {
        throw std::runtime_error("lipschitz probe: cannot keep f non-negative at this radius");
      }
    }
    // measure: mixture toward a Dirichlet draw, gamma-distance bounded by the
    // mixing coefficient times the weighted diameter
    double diameter = 0.0;
    for (std::size_t i = 0; i < n; ++i) diameter += 2.0 * w(center.grid()->point(i));
    const double mix = std::min(0.5, radius / (2.0 * diameter)) * rng.uniform();
    Measure target = Measure::from_weights(center.grid(), rng.dirichlet(n));
    Measure p_new = mix_measures(center.p(), target, mix);
    return State(Potential(center.grid(), std::move(f_new)), std::move(p_new));
  };

  // d* on symplectic variations: same product metric applied componentwise
  auto variation_distance = [&](const SymplecticVariation& va, const SymplecticVariation& vb) {
    return weighted_sup_metric(va.f_dir, vb.f_dir, w) +
           weighted_tv_signed(va.p_dir, vb.p_dir, *center.grid(), w);
  };

  double max_ratio = 0.0;
  for (std::size_t k = 0; k < n_pairs; ++k) {
    Rng rng(seed, k);
    const State a = perturb(rng);
    const State b = perturb(rng);
    const double dist = product_metric(a, b, w);
    if (dist == 0.0) continue;  // degenerate pair, skipped rather than divided
    const double num = variation_distance(symplectic_variation(a), symplectic_variation(b));
    max_ratio = std::max(max_ratio, num / dist);
  }
  return max_ratio;
}

}  // namespace archam
