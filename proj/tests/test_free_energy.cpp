#include <cmath>

#include <doctest.h>

#include "archam/free_energy.hpp"
#include "archam/numerics.hpp"
#include "archam/presets.hpp"
#include "oracles.hpp"

using namespace archam;

namespace {

State random_state(Rng& rng, const GridPtr& grid) {
  std::vector<double> f(grid->size());
  for (double& x : f) x = rng.uniform(0.0, 4.0);
  return State(Potential(grid, std::move(f)),
               Measure::from_weights(grid, rng.dirichlet(grid->size())));
}

}  // namespace

TEST_SUITE_BEGIN("free_energy");

TEST_CASE("log partition") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const Measure uniform = Measure::uniform_probability(labels);

  CHECK(log_partition(Potential(labels, {2.5, 2.5, 2.5}), uniform) ==
        doctest::Approx(-2.5).epsilon(1e-14));

  // frozen from the direct-summation oracle for f0 = (2.0, 1.0, 0.5)
  const Potential f0(labels, {2.0, 1.0, 0.5});
  const double expected = oracles::log_partition_direct({2.0, 1.0, 0.5},
                                                        {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(expected == doctest::Approx(-0.99448168333138142).epsilon(1e-15));
  CHECK(log_partition(f0, uniform) == doctest::Approx(expected).epsilon(1e-14));

  const Measure mass2 = Measure::from_weights(labels, {1.0, 0.5, 0.5});
  CHECK(log_partition(Potential(labels, {0.0, 0.0, 0.0}), mass2) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));

  std::vector<double> empty_lw(3, kNegInf);
  CHECK_THROWS_AS(log_partition(f0, Measure::from_log_weights(labels, empty_lw)),
                  std::invalid_argument);
}

TEST_CASE("minimum free energy") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const Measure uniform = Measure::uniform_probability(labels);

  CHECK(minimum_free_energy(Potential(labels, {4.2, 4.2, 4.2}), uniform) ==
        doctest::Approx(0.0).epsilon(1e-13));

  const double expected = oracles::minimum_free_energy_direct({2.0, 1.0, 0.5},
                                                              {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(expected == doctest::Approx(-0.17218498333528525).epsilon(1e-15));
  CHECK(minimum_free_energy(Potential(labels, {2.0, 1.0, 0.5}), uniform) ==
        doctest::Approx(expected).epsilon(1e-13));

  // single atom: H(f=1, P=1) = 0, and the extension accepts positive mass
  const GridPtr atom = presets::scalar_grid();
  CHECK(minimum_free_energy(Potential(atom, {1.0}),
                            Measure::from_weights(atom, {1.0})) == doctest::Approx(0.0));
  const Measure heavy = Measure::from_weights(atom, {2.0});
  CHECK_THROWS_AS(minimum_free_energy(Potential(atom, {1.0}), heavy), std::invalid_argument);
  CHECK(minimum_free_energy(Potential(atom, {1.0}), heavy, true) ==
        doctest::Approx(-1.0 - std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("gibbs posterior matches the direct oracle") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const Measure uniform = Measure::uniform_probability(labels);

  const Measure same = gibbs_posterior(Potential(labels, {1.3, 1.3, 1.3}), uniform);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(same.weight(i) == doctest::Approx(uniform.weight(i)).epsilon(1e-14));
  }

  const auto expected = oracles::gibbs_direct({2.0, 1.0, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(expected[0] == doctest::Approx(0.12195165230972886).epsilon(1e-15));
  CHECK(expected[1] == doctest::Approx(0.33149896042409151).epsilon(1e-15));
  CHECK(expected[2] == doctest::Approx(0.54654938726617964).epsilon(1e-15));

  const Measure posterior = gibbs_posterior(Potential(labels, {2.0, 1.0, 0.5}), uniform);
  CHECK(posterior.is_probability());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::fabs(posterior.weight(i) - expected[i]) < 1e-12);
  }

  const Measure point = Measure::point_mass(labels, 1);
  const Measure post_point = gibbs_posterior(Potential(labels, {9.0, 4.0, 2.0}), point);
  CHECK(post_point.weight(1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(post_point.weight(0) == 0.0);
}

TEST_CASE("conjugate potential") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const Measure uniform = Measure::uniform_probability(labels);

  const Potential const_star = conjugate_potential(Potential(labels, {7.0, 7.0, 7.0}), uniform);
  for (double v : const_star.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));

  const Potential star = conjugate_potential(Potential(labels, {2.0, 1.0, 0.5}), uniform);
  CHECK(star.value(0) == doctest::Approx(0.36585495692918657).epsilon(1e-13));
  CHECK(star.value(1) == doctest::Approx(0.99449688127227452).epsilon(1e-13));
  CHECK(star.value(2) == doctest::Approx(1.6396481617985389).epsilon(1e-13));
  for (double v : star.values()) CHECK(v > 0.0);

  const GridPtr atom = presets::scalar_grid();
  CHECK(conjugate_potential(Potential(atom, {2.0}), Measure::from_weights(atom, {1.0})).value(0) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("symplectic variation assembles the pair (f*+f, P*-P)") {
  const State s = presets::three_label_state();
  const SymplecticVariation var = symplectic_variation(s);

  CHECK(var.f_dir.value(0) == doctest::Approx(2.3658549569291866).epsilon(1e-13));
  CHECK(var.f_dir.value(1) == doctest::Approx(1.9944968812722745).epsilon(1e-13));
  CHECK(var.f_dir.value(2) == doctest::Approx(2.1396481617985389).epsilon(1e-13));
  CHECK(var.p_dir[0] == doctest::Approx(-0.21138168102360448).epsilon(1e-12));
  CHECK(var.p_dir[1] == doctest::Approx(-0.0018343729092418282).epsilon(1e-9));
  CHECK(var.p_dir[2] == doctest::Approx(0.21321605393284630).epsilon(1e-12));

  double sum = 0.0;
  for (double v : var.p_dir) sum += v;
  CHECK(std::fabs(sum) <= 1e-12);
  CHECK(var.p_star.is_probability());

  // constant potential: P direction vanishes, f direction is 1 + c
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const State flat(Potential(labels, {3.0, 3.0, 3.0}), Measure::uniform_probability(labels));
  const SymplecticVariation fv = symplectic_variation(flat);
  for (double v : fv.p_dir) CHECK(std::fabs(v) < 1e-15);
  for (double v : fv.f_dir.values()) CHECK(v == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("kl divergence") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const Measure uniform = Measure::uniform_probability(labels);
  CHECK(kl_divergence(uniform, uniform) == doctest::Approx(0.0));

  const State s = presets::three_label_state();
  const Measure p_star = gibbs_posterior(s.f(), s.p());
  const double expected =
      oracles::kl_direct(p_star.weights(), {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(expected == doctest::Approx(0.14580472465474238).epsilon(1e-12));
  CHECK(kl_divergence(p_star, uniform) == doctest::Approx(expected).epsilon(1e-12));

  CHECK(kl_divergence(Measure::point_mass(labels, 0), uniform) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-14));

  // absolute continuity is enforced, not mapped to +inf
  CHECK_THROWS_AS(kl_divergence(uniform, Measure::point_mass(labels, 0)),
                  std::invalid_argument);
}

TEST_CASE("free energy functional and Donsker-Varadhan") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const Measure uniform = Measure::uniform_probability(labels);
  CHECK(free_energy_functional(uniform, Potential(labels, {0.0, 0.0, 0.0}), uniform) ==
        doctest::Approx(0.0));

  const State s = presets::three_label_state();
  const Measure p_star = gibbs_posterior(s.f(), s.p());
  const double h = minimum_free_energy(s.f(), s.p());
  CHECK(free_energy_functional(p_star, s.f(), s.p(), true) == doctest::Approx(h).epsilon(1e-12));
  CHECK(free_energy_functional(s.p(), s.f(), s.p(), true) == doctest::Approx(0.0));
  CHECK(free_energy_functional(s.p(), s.f(), s.p(), true) >= h);

  CHECK(donsker_varadhan_residual(s) <= 1e-9);
  const GridPtr flat_grid = build_label_grid({1.0, 2.0});
  const State flat(Potential(flat_grid, {2.0, 2.0}), Measure::uniform_probability(flat_grid));
  CHECK(donsker_varadhan_residual(flat) == doctest::Approx(0.0));

  // the full-size flow state keeps the identity within 1e-9 as well
  const State normal = presets::normal_location_state(presets::default_flow_grid());
  CHECK(donsker_varadhan_residual(normal) <= 1e-9);
}

TEST_CASE("gibbs posterior is shift invariant") {
  const State s = presets::three_label_state();
  const double h0 = minimum_free_energy(s.f(), s.p());
  const Measure g0 = gibbs_posterior(s.f(), s.p());
  for (double c : {-10.0, 1.0, 100.0}) {
    const Potential shifted = s.f().shifted(c);
    CHECK(std::fabs(minimum_free_energy(shifted, s.p()) - h0) <= 1e-9);
    const Measure g = gibbs_posterior(shifted, s.p());
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::fabs(g.weight(i) - g0.weight(i)) <= 1e-12);
    }
  }
}

TEST_CASE("gibbs variational principle on random measures") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  Rng rng(21);
  for (int rep = 0; rep < 300; ++rep) {
    const State s = random_state(rng, labels);
    if (s.p().weight(0) == 0.0 || s.p().weight(1) == 0.0 || s.p().weight(2) == 0.0) continue;
    const double h = minimum_free_energy(s.f(), s.p());
    const Measure q = Measure::from_weights(labels, rng.dirichlet(3));
    CHECK(free_energy_functional(q, s.f(), s.p(), true) >= h - 1e-9);
  }
}

TEST_CASE("saddle structure on random convex combinations") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  Rng rng(22);
  for (int rep = 0; rep < 200; ++rep) {
    const State a = random_state(rng, labels);
    const State b = random_state(rng, labels);
    const double alpha = rng.uniform();

    std::vector<double> blend(3);
    for (std::size_t i = 0; i < 3; ++i) {
      blend[i] = alpha * a.f().value(i) + (1.0 - alpha) * b.f().value(i);
    }
    const double concave_lhs = minimum_free_energy(Potential(labels, blend), a.p());
    const double concave_rhs = alpha * minimum_free_energy(a.f(), a.p()) +
                               (1.0 - alpha) * minimum_free_energy(b.f(), a.p());
    CHECK(concave_lhs >= concave_rhs - 1e-9);

    std::vector<double> mix(3);
    for (std::size_t i = 0; i < 3; ++i) {
      mix[i] = alpha * a.p().weight(i) + (1.0 - alpha) * b.p().weight(i);
    }
    const double convex_lhs = minimum_free_energy(a.f(), Measure::from_weights(labels, mix));
    const double convex_rhs = alpha * minimum_free_energy(a.f(), a.p()) +
                              (1.0 - alpha) * minimum_free_energy(a.f(), b.p());
    CHECK(convex_lhs <= convex_rhs + 1e-9);
  }
}

TEST_CASE("jensen lower bound on the partition function") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  Rng rng(23);
  for (int rep = 0; rep < 300; ++rep) {
    const State s = random_state(rng, labels);
    CHECK(log_partition(s.f(), s.p()) >= -integrate(s.f(), s.p()) - 1e-9);
  }
}

TEST_CASE("compatibility: the symplectic step stays in the domain") {
  const State s = presets::three_label_state();
  const SymplecticVariation var = symplectic_variation(s);
  for (int k = 0; k <= 10; ++k) {
    const double t = k / 10.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double w = s.p().weight(i) + t * var.p_dir[i];
      CHECK(w >= 0.0);
      mass += w;
      CHECK(s.f().value(i) + t * var.f_dir.value(i) >= s.f().value(i));
    }
    CHECK(std::fabs(mass - 1.0) <= 1e-12);
  }
}

TEST_SUITE_END();
