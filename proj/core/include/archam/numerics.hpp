#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace archam {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(sum_i exp(args[i])), shifted by the maximum so that large negative
// arguments never underflow the sum. -inf entries contribute zero mass.
// Returns -inf when every entry is -inf (empty sum).
inline double log_sum_exp(std::span<const double> args) {
  double max_arg = kNegInf;
  for (double a : args) {
    if (std::isnan(a)) return a;
    if (a > max_arg) max_arg = a;
  }
  if (max_arg == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double a : args) {
    if (a != kNegInf) sum += std::exp(a - max_arg);
  }
  return max_arg + std::log(sum);
}

// Two-argument log-sum-exp; exact when one side carries no mass.
inline double log_sum_exp2(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = a > b ? a : b;
  double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// Least-squares slope of y against x.
inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("least_squares_slope: need >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares_slope: degenerate abscissae");
  return sxy / sxx;
}

// Deterministic random source. Doubles are extracted from the top 53 bits of
// mt19937_64 output, so identical seeds reproduce identical draws on every
// platform; std::uniform_real_distribution makes no such guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent deterministic substream, e.g. one per direction batch.
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{seed, stream};
    engine_.seed(seq);
  }

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // strictly positive uniform, safe under log()
  double uniform_pos() { return 1.0 - uniform(); }

  // Flat Dirichlet draw: normalised exponential spacings.
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> v(n);
    double total = 0.0;
    for (auto& x : v) {
      x = -std::log(uniform_pos());
      total += x;
    }
    for (auto& x : v) x /= total;
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace archam
