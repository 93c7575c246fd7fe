#include "archam/measure.hpp"

#include <cmath>
#include <stdexcept>

#include "archam/numerics.hpp"

namespace archam {

namespace {

constexpr double kProbabilityTol = 1e-9;

void require_shared_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  if (!same_grid(a, b)) {
    throw std::invalid_argument(std::string(what) + ": operands live on different grids");
  }
}

}  // namespace

Potential::Potential(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("potential: null grid");
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("potential: value count does not match grid size");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("potential: values must be finite");
  }
}

Potential Potential::shifted(double c) const {
  std::vector<double> v = values_;
  for (double& x : v) x += c;
  return Potential(grid_, std::move(v));
}

Measure::Measure(GridPtr grid, std::vector<double> log_weights)
    : grid_(std::move(grid)), log_weights_(std::move(log_weights)) {
  if (!grid_) throw std::invalid_argument("measure: null grid");
  if (log_weights_.size() != grid_->size()) {
    throw std::invalid_argument("measure: weight count does not match grid size");
  }
  for (double lw : log_weights_) {
    if (std::isnan(lw) || lw == kInf) {
      throw std::invalid_argument("measure: log-weights must be finite or -inf");
    }
  }
  log_total_mass_ = log_sum_exp(log_weights_);
  total_mass_ = std::exp(log_total_mass_);
}

Measure Measure::from_log_weights(GridPtr grid, std::vector<double> log_weights) {
  return Measure(std::move(grid), std::move(log_weights));
}

Measure Measure::from_weights(GridPtr grid, const std::vector<double>& weights, double clip_tol) {
  std::vector<double> lw(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double wi = weights[i];
    if (std::isnan(wi)) throw std::invalid_argument("measure: NaN weight");
    if (wi < 0.0) {
      if (wi < -clip_tol) {
        throw std::invalid_argument("measure: negative weight beyond clip tolerance");
      }
      wi = 0.0;  // floating-error clip
    }
    lw[i] = wi == 0.0 ? kNegInf : std::log(wi);
  }
  return Measure(std::move(grid), std::move(lw));
}

Measure Measure::uniform_probability(GridPtr grid) {
  const std::size_t n = grid->size();
  std::vector<double> lw(n, -std::log(static_cast<double>(n)));
  return Measure(std::move(grid), std::move(lw));
}

Measure Measure::point_mass(GridPtr grid, std::size_t index) {
  if (index >= grid->size()) throw std::invalid_argument("point mass: index out of range");
  std::vector<double> lw(grid->size(), kNegInf);
  lw[index] = 0.0;
  return Measure(std::move(grid), std::move(lw));
}

double Measure::weight(std::size_t i) const { return std::exp(log_weights_[i]); }

std::vector<double> Measure::weights() const {
  std::vector<double> w(log_weights_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights_[i]);
  return w;
}

bool Measure::is_probability() const { return std::fabs(total_mass_ - 1.0) <= kProbabilityTol; }

Measure Measure::normalised() const {
  if (log_total_mass_ == kNegInf) throw std::runtime_error("measure: cannot normalise zero mass");
  std::vector<double> lw = log_weights_;
  for (double& x : lw) x -= log_total_mass_;
  return Measure(grid_, std::move(lw));
}

State::State(Potential f, Measure p) : f_(std::move(f)), p_(std::move(p)) {
  require_shared_grid(f_.grid(), p_.grid(), "state");
  if (!p_.is_probability()) {
    throw std::invalid_argument("state: P is not a probability measure");
  }
}

double integrate(const Potential& f, const Measure& p) {
  require_shared_grid(f.grid(), p.grid(), "integrate");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double lw = p.log_weight(i);
    if (lw != kNegInf) acc += f.value(i) * std::exp(lw);
  }
  return acc;
}

Measure discretize_density(const GridPtr& grid, const std::function<double(double)>& density) {
  if (!grid) throw std::invalid_argument("discretize_density: null grid");
  const double log_cell = std::log(grid->cell_width());
  std::vector<double> lw(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double d = density(grid->point(i));
    if (std::isnan(d) || d < 0.0) {
      throw std::invalid_argument("discretize_density: density must be >= 0 on grid points");
    }
    lw[i] = d == 0.0 ? kNegInf : std::log(d) + log_cell;
  }
  return Measure::from_log_weights(grid, std::move(lw));
}

double weighted_sup_metric(const Potential& f, const Potential& g, const WeightFn& w) {
  require_shared_grid(f.grid(), g.grid(), "weighted_sup_metric");
  double sup = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = std::fabs(f.value(i) - g.value(i)) / w(f.grid()->point(i));
    if (v > sup) sup = v;
  }
  return sup;
}

double weighted_tv_metric(const Measure& p, const Measure& q, const WeightFn& w) {
  require_shared_grid(p.grid(), q.grid(), "weighted_tv_metric");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += w(p.grid()->point(i)) * std::fabs(p.weight(i) - q.weight(i));
  }
  return acc;
}

double weighted_tv_signed(const std::vector<double>& a, const std::vector<double>& b,
                          const Grid& grid, const WeightFn& w) {
  if (a.size() != grid.size() || b.size() != grid.size()) {
    throw std::invalid_argument("weighted_tv_signed: vector length does not match grid");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    acc += w(grid.point(i)) * std::fabs(a[i] - b[i]);
  }
  return acc;
}

double product_metric(const State& a, const State& b, const WeightFn& w) {
  return weighted_sup_metric(a.f(), b.f(), w) + weighted_tv_metric(a.p(), b.p(), w);
}

DomainReport domain_check(const Potential& f, const Measure& p, const WeightFn& w, DomainMode mode) {
  require_shared_grid(f.grid(), p.grid(), "domain_check");

  DomainReport report;
  report.mode = mode;
  report.total_mass = p.total_mass();
  report.probability_ok = p.is_probability();
  if (!report.probability_ok) {
    throw std::invalid_argument("domain_check: P is not a probability measure");
  }

  if (mode != DomainMode::Off) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double bound = w.log_w(f.grid()->point(i));
      if (f.value(i) < bound) {
        report.violations.push_back(i);
        report.worst_gap = std::max(report.worst_gap, bound - f.value(i));
      }
    }
    if (mode == DomainMode::Strict && !report.violations.empty()) {
      throw std::runtime_error("domain_check: f < log w at " +
                               std::to_string(report.violations.size()) +
                               " grid points (strict mode)");
    }
  }
  return report;
}

DomainReport domain_check(const State& s, const WeightFn& w, DomainMode mode) {
  return domain_check(s.f(), s.p(), w, mode);
}

std::string to_string(DomainMode mode) {
  switch (mode) {
    case DomainMode::Strict: return "strict";
    case DomainMode::Warn: return "warn";
    case DomainMode::Off: return "off";
  }
  return "warn";
}

DomainMode domain_mode_from_string(const std::string& name) {
  if (name == "strict") return DomainMode::Strict;
  if (name == "warn") return DomainMode::Warn;
  if (name == "off") return DomainMode::Off;
  throw std::invalid_argument("unknown domain mode: " + name);
}

}  // namespace archam
