#pragma once

#include <vector>

#include "archam/measure.hpp"

namespace archam {

// The pair (-d2 H, d1 H) = (f* + f, P* - P) evaluated at one state, together
// with the Gibbs posterior and conjugate potential it is assembled from.
// P_dir is a signed weight vector (difference of two probabilities), so its
// entries sum to zero.
struct SymplecticVariation {
  Potential f_dir;             // f* + f
  std::vector<double> p_dir;   // weights(P*) - weights(P)
  Potential f_star;
  Measure p_star;
};

// log Z(f, P) with Z = sum_i exp(log_weight_i - f_i). Never materialises Z in
// linear space. Throws when P carries no mass.
double log_partition(const Potential& f, const Measure& p);

// Minimum free energy H(f, P) = -<f, P> - log Z(f, P). The stable form equals
// the defining centered expression for probability P and extends verbatim to
// positive non-probability P, which callers must opt into.
double minimum_free_energy(const Potential& f, const Measure& p, bool allow_nonprobability = false);

// Gibbs posterior: log_weight*_i = log_weight_i - f_i - log Z. Output is a
// probability measure.
Measure gibbs_posterior(const Potential& f, const Measure& p);

// Conjugate potential f*(theta) = exp(-f(theta) - log Z).
Potential conjugate_potential(const Potential& f, const Measure& p);

SymplecticVariation symplectic_variation(const State& s);

// KL(Q, P) = sum_i q_i (log q_i - log p_i) with 0 log 0 = 0. Throws when Q
// puts mass where P has none.
double kl_divergence(const Measure& q, const Measure& p);

// F(Q) = <f, Q> + KL(Q, P); the centered flag replaces f by f - <f, P>.
double free_energy_functional(const Measure& q, const Potential& f, const Measure& p,
                              bool centered = false);

// |H(f, P) - F(P*)| for the centered potential; zero in exact arithmetic.
double donsker_varadhan_residual(const State& s);

}  // namespace archam
