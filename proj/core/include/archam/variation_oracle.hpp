#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archam/free_energy.hpp"
#include "archam/measure.hpp"

namespace archam {

// An admissible direction along which H can be probed one-sidedly: either a
// potential increment g with f + g still in the domain, or a target
// probability Q whose induced direction is Q - P.
struct DirectionSpec {
  enum class Kind { PotentialDirection, MeasureDirection };

  static DirectionSpec potential(Potential g);
  static DirectionSpec measure(Measure target_q);

  Kind kind;
  std::optional<Potential> g;
  std::optional<Measure> target_q;
};

// Default one-sided epsilon ladder; overridable per call.
inline constexpr double kDefaultEpsilons[] = {1e-3, 5e-4, 2.5e-4};

// One-sided difference quotients (H(s + eps*dir) - H(s)) / eps over the
// ladder, extrapolated through a Richardson table that removes the first-order
// error term and its successors. Probes H directly and never touches the
// analytic variation, so it stays an independent oracle.
double fd_directional_derivative(const State& s, const DirectionSpec& dir,
                                 std::span<const double> epsilons = kDefaultEpsilons);

struct VariationSample {
  DirectionSpec::Kind kind;
  double fd = 0.0;
  double analytic = 0.0;
  double abs_error = 0.0;
};

struct VariationReport {
  std::vector<VariationSample> samples;
  double max_error_potential = 0.0;
  double max_error_measure = 0.0;
  double tolerance = 0.0;
  std::size_t n_directions = 0;
  std::uint64_t seed = 0;
  bool passed = false;

  // finite direction samples are a spot check, never an exhaustive proof
  std::string coverage() const;
};

// Draws n admissible random directions of each kind and compares the
// finite-difference quotient with the analytic pairings <g, P* - P> and
// <-f* - f, Q - P>. Potential directions are non-negative bump vectors;
// measure targets are flat Dirichlet draws damped toward P so the one-sided
// quotients stay in the extrapolation regime.
VariationReport verify_first_variations(const State& s, std::size_t n_directions,
                                        double tolerance, std::uint64_t seed);

struct SaddleViolation {
  double alpha = 0.0;
  bool concavity = false;  // which of the two inequalities failed
  double excess = 0.0;
};

struct SaddleReport {
  std::vector<SaddleViolation> violations;
  std::size_t checks = 0;
  double slack = 0.0;

  bool passed() const { return violations.empty(); }
};

// For each alpha checks concavity of H(., P) and convexity of H(f, .) on the
// given convex combinations, with additive slack.
SaddleReport saddle_midpoint_check(const Potential& f, const Potential& g, const Measure& p,
                                   const Measure& q, std::span<const double> alphas,
                                   double slack = 1e-9);

// Samples state pairs inside the d-ball around the center and returns the
// largest observed ratio d*(dH(a), dH(b)) / d(a, b), the empirical local
// Lipschitz constant of the symplectic variation. Zero-distance pairs are
// skipped; perturbations leaving the domain are rejection-resampled.
double lipschitz_probe(const State& center, const WeightFn& w, double radius,
                       std::size_t n_pairs, std::uint64_t seed);

}  // namespace archam
