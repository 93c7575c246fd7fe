#include "archam/free_energy.hpp"

#include <cmath>
#include <stdexcept>

#include "archam/numerics.hpp"

namespace archam {

namespace {

void require_shared_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  if (!same_grid(a, b)) {
    throw std::invalid_argument(std::string(what) + ": operands live on different grids");
  }
}

void require_mass(const Measure& p, const char* what) {
  if (p.log_total_mass() == kNegInf) {
    throw std::invalid_argument(std::string(what) + ": measure carries no mass");
  }
}

}  // namespace

double log_partition(const Potential& f, const Measure& p) {
  require_shared_grid(f.grid(), p.grid(), "log_partition");
  require_mass(p, "log_partition");
  std::vector<double> terms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lw = p.log_weight(i);
    terms[i] = lw == kNegInf ? kNegInf : lw - f.value(i);
  }
  return log_sum_exp(terms);
}

double minimum_free_energy(const Potential& f, const Measure& p, bool allow_nonprobability) {
  require_shared_grid(f.grid(), p.grid(), "minimum_free_energy");
  require_mass(p, "minimum_free_energy");
  if (!allow_nonprobability && !p.is_probability()) {
    throw std::invalid_argument("minimum_free_energy: P is not a probability measure");
  }
  return -integrate(f, p) - log_partition(f, p);
}

Measure gibbs_posterior(const Potential& f, const Measure& p) {
  require_shared_grid(f.grid(), p.grid(), "gibbs_posterior");
  require_mass(p, "gibbs_posterior");
  const double log_z = log_partition(f, p);
  std::vector<double> lw(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double l = p.log_weight(i);
    lw[i] = l == kNegInf ? kNegInf : l - f.value(i) - log_z;
  }
  return Measure::from_log_weights(p.grid(), std::move(lw));
}

Potential conjugate_potential(const Potential& f, const Measure& p) {
  require_shared_grid(f.grid(), p.grid(), "conjugate_potential");
  require_mass(p, "conjugate_potential");
  const double log_z = log_partition(f, p);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    v[i] = std::exp(-f.value(i) - log_z);
  }
  return Potential(f.grid(), std::move(v));
}

SymplecticVariation symplectic_variation(const State& s) {
  const double log_z = log_partition(s.f(), s.p());

  std::vector<double> star_lw(s.p().size());
  std::vector<double> f_star_v(s.f().size());
  std::vector<double> f_dir_v(s.f().size());
  std::vector<double> p_dir(s.p().size());

  for (std::size_t i = 0; i < s.p().size(); ++i) {
    const double fi = s.f().value(i);
    const double lw = s.p().log_weight(i);
    star_lw[i] = lw == kNegInf ? kNegInf : lw - fi - log_z;
    f_star_v[i] = std::exp(-fi - log_z);
    f_dir_v[i] = f_star_v[i] + fi;
    p_dir[i] = std::exp(star_lw[i]) - std::exp(lw);
  }

  return SymplecticVariation{
      Potential(s.grid(), std::move(f_dir_v)),
      std::move(p_dir),
      Potential(s.grid(), std::move(f_star_v)),
      Measure::from_log_weights(s.grid(), std::move(star_lw)),
  };
}

double kl_divergence(const Measure& q, const Measure& p) {
  require_shared_grid(q.grid(), p.grid(), "kl_divergence");
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double lq = q.log_weight(i);
    if (lq == kNegInf) continue;  // 0 log 0 = 0
    const double lp = p.log_weight(i);
    if (lp == kNegInf) {
      throw std::invalid_argument("kl_divergence: Q is not absolutely continuous w.r.t. P");
    }
    acc += std::exp(lq) * (lq - lp);
  }
  return acc;
}

double free_energy_functional(const Measure& q, const Potential& f, const Measure& p,
                              bool centered) {
  require_shared_grid(q.grid(), p.grid(), "free_energy_functional");
  double linear = integrate(f, q);
  if (centered) linear -= integrate(f, p) * q.total_mass();
  return linear + kl_divergence(q, p);
}

double donsker_varadhan_residual(const State& s) {
  const double h = minimum_free_energy(s.f(), s.p());
  const Measure p_star = gibbs_posterior(s.f(), s.p());
  const double functional = free_energy_functional(p_star, s.f(), s.p(), /*centered=*/true);
  return std::fabs(h - functional);
}

}  // namespace archam
