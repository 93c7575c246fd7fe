#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "archam/grid.hpp"

namespace archam {

// Negative log-likelihood (or any potential) as values on a grid.
class Potential {
 public:
  Potential(GridPtr grid, std::vector<double> values);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double value(std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  Potential shifted(double c) const;  // f + c pointwise

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

// Non-negative measure as point masses on a grid. Log-weights are the source
// of truth (-inf marks zero mass); linear-space weights are derived views.
// Total mass is cached at construction via log-sum-exp.
class Measure {
 public:
  static Measure from_log_weights(GridPtr grid, std::vector<double> log_weights);

  // Linear-space ingestion. Weights must be >= 0 after the clip rule: values
  // in [-clip_tol, 0) are clipped to zero mass, anything lower throws.
  static Measure from_weights(GridPtr grid, const std::vector<double>& weights,
                              double clip_tol = 1e-15);

  static Measure uniform_probability(GridPtr grid);
  static Measure point_mass(GridPtr grid, std::size_t index);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return log_weights_.size(); }
  double log_weight(std::size_t i) const { return log_weights_[i]; }
  const std::vector<double>& log_weights() const { return log_weights_; }
  double weight(std::size_t i) const;
  std::vector<double> weights() const;

  double total_mass() const { return total_mass_; }
  double log_total_mass() const { return log_total_mass_; }
  // |total_mass - 1| <= 1e-9
  bool is_probability() const;

  // weights scaled so total mass is exactly renormalised to 1 in log space
  Measure normalised() const;

 private:
  Measure(GridPtr grid, std::vector<double> log_weights);

  GridPtr grid_;
  std::vector<double> log_weights_;
  double log_total_mass_;
  double total_mass_;
};

// One point (f, P) of the metric space. The constructor enforces a shared
// grid and that P is a probability measure.
class State {
 public:
  State(Potential f, Measure p);

  const Potential& f() const { return f_; }
  const Measure& p() const { return p_; }
  const GridPtr& grid() const { return f_.grid(); }

 private:
  Potential f_;
  Measure p_;
};

// Duality integral <f, P> = sum_i f(theta_i) * weight_i. For measures built
// by discretize_density the weights already include the cell width, so this
// is the left-endpoint quadrature.
double integrate(const Potential& f, const Measure& p);

// Ingests a density by the left-endpoint rule: log_weight_i =
// log(density(theta_i)) + log(cell_width). Total mass is reported as-is,
// never silently renormalised. Throws on negative density values.
Measure discretize_density(const GridPtr& grid, const std::function<double(double)>& density);

// rho(f, g) = sup_i |f - g| / w
double weighted_sup_metric(const Potential& f, const Potential& g, const WeightFn& w);

// gamma(P, Q) = sum_i w(theta_i) |weight_P,i - weight_Q,i|
double weighted_tv_metric(const Measure& p, const Measure& q, const WeightFn& w);

// same weighted total variation applied to raw signed weight vectors
double weighted_tv_signed(const std::vector<double>& a, const std::vector<double>& b,
                          const Grid& grid, const WeightFn& w);

// d((f,P),(g,Q)) = rho(f,g) + gamma(P,Q)
double product_metric(const State& a, const State& b, const WeightFn& w);

enum class DomainMode { Strict, Warn, Off };

struct DomainReport {
  std::vector<std::size_t> violations;  // grid indices where f < log w
  double worst_gap = 0.0;               // max of log w - f over violations
  bool probability_ok = true;
  double total_mass = 0.0;
  DomainMode mode = DomainMode::Warn;

  bool clean() const { return violations.empty() && probability_ok; }
};

// Checks the domain condition f >= log w pointwise and that P is a
// probability measure. The f-check is fatal in strict mode, annotated in warn
// mode and skipped in off mode; a non-probability P throws in every mode.
DomainReport domain_check(const Potential& f, const Measure& p, const WeightFn& w, DomainMode mode);
DomainReport domain_check(const State& s, const WeightFn& w, DomainMode mode);

std::string to_string(DomainMode mode);
DomainMode domain_mode_from_string(const std::string& name);

}  // namespace archam
