#include <cmath>
#include <numbers>

#include <doctest.h>

#include "archam/measure.hpp"
#include "archam/numerics.hpp"

using namespace archam;

TEST_SUITE_BEGIN("grid_measure");

TEST_CASE("uniform grid follows the left-endpoint rule") {
  const GridPtr g = build_uniform_grid(-10.0, 10.0, 2000);
  CHECK(g->size() == 2000);
  CHECK(g->cell_width() == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(g->point(0) == -10.0);
  CHECK(g->point(1999) == doctest::Approx(9.99).epsilon(1e-14));

  const GridPtr single = build_uniform_grid(0.0, 1.0, 1);
  CHECK(single->size() == 1);
  CHECK(single->point(0) == 0.0);
  CHECK(single->cell_width() == 1.0);

  const GridPtr four = build_uniform_grid(-1.0, 1.0, 4);
  REQUIRE(four->size() == 4);
  CHECK(four->point(0) == -1.0);
  CHECK(four->point(1) == -0.5);
  CHECK(four->point(2) == 0.0);
  CHECK(four->point(3) == 0.5);
  CHECK(four->cell_width() == 0.5);
}

TEST_CASE("uniform grid rejects bad bounds") {
  CHECK_THROWS_AS(build_uniform_grid(0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_uniform_grid(1.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_uniform_grid(0.0, 0.0, 4), std::invalid_argument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(build_uniform_grid(nan, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_uniform_grid(0.0, kInf, 4), std::invalid_argument);
}

TEST_CASE("label grid requires increasing finite points") {
  const GridPtr g = build_label_grid({1.0, 2.0, 3.0});
  CHECK(g->kind() == GridKind::FiniteLabels);
  CHECK(g->cell_width() == 1.0);
  CHECK_THROWS_AS(build_label_grid({}), std::invalid_argument);
  CHECK_THROWS_AS(build_label_grid({2.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_label_grid({1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("integrate is the duality pairing") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const Measure uniform = Measure::uniform_probability(labels);

  CHECK(integrate(Potential(labels, {3.7, 3.7, 3.7}), uniform) ==
        doctest::Approx(3.7).epsilon(1e-14));

  // f0 = (2.0, 1.0, 0.5) under the uniform probability
  CHECK(integrate(Potential(labels, {2.0, 1.0, 0.5}), uniform) ==
        doctest::Approx(1.1666666666666667).epsilon(1e-14));

  const GridPtr four = build_uniform_grid(-1.0, 1.0, 4);
  const Measure quarter = Measure::from_weights(four, {0.25, 0.25, 0.25, 0.25});
  Potential identity(four, {-1.0, -0.5, 0.0, 0.5});
  CHECK(integrate(identity, quarter) == doctest::Approx(-0.25).epsilon(1e-14));

  CHECK_THROWS_AS(integrate(Potential(labels, {1.0, 1.0, 1.0}), quarter), std::invalid_argument);
}

TEST_CASE("discretize_density applies the cell width") {
  const GridPtr flow = build_uniform_grid(-10.0, 10.0, 2000);
  const Measure normal = discretize_density(flow, [](double theta) {
    return std::exp(-theta * theta / 2.0) / std::sqrt(2.0 * std::numbers::pi);
  });
  CHECK(std::fabs(normal.total_mass() - 1.0) < 1e-6);

  const GridPtr unit = build_uniform_grid(0.0, 1.0, 1);
  const Measure one = discretize_density(unit, [](double) { return 1.0; });
  CHECK(one.weight(0) == doctest::Approx(1.0).epsilon(1e-15));

  const GridPtr two = build_uniform_grid(0.0, 2.0, 2);
  const Measure half = discretize_density(two, [](double) { return 0.5; });
  CHECK(half.weight(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(half.weight(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(half.total_mass() == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(discretize_density(two, [](double) { return -0.1; }), std::invalid_argument);
}

TEST_CASE("weighted sup metric") {
  const WeightFn w2(2.0);
  const GridPtr four = build_uniform_grid(-1.0, 1.0, 4);
  const Potential f(four, {0.3, 1.0, -0.2, 2.0});
  CHECK(weighted_sup_metric(f, f, w2) == 0.0);

  // f - g constant 1 with theta = 0 on the grid: sup of 1/(1+theta^2) is 1
  const Potential g(four, {-0.7, 0.0, -1.2, 1.0});
  CHECK(weighted_sup_metric(f, g, w2) == doctest::Approx(1.0).epsilon(1e-14));

  const GridPtr pair = build_label_grid({0.0, 1.0});
  CHECK(weighted_sup_metric(Potential(pair, {1.0, 2.0}), Potential(pair, {0.0, 0.0}), w2) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weighted tv metric") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const Measure uniform = Measure::uniform_probability(labels);
  const Measure point = Measure::point_mass(labels, 0);
  const WeightFn w0(0.0);
  CHECK(weighted_tv_metric(uniform, uniform, w0) == 0.0);
  CHECK(weighted_tv_metric(uniform, point, w0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

  const GridPtr pair = build_label_grid({0.0, 1.0});
  const WeightFn w2(2.0);
  CHECK(weighted_tv_metric(Measure::point_mass(pair, 0), Measure::point_mass(pair, 1), w2) ==
        doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("product metric splits into components") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const WeightFn w(2.0);
  const State a(Potential(labels, {2.0, 1.0, 0.5}), Measure::uniform_probability(labels));
  const State b(Potential(labels, {1.0, 1.5, 0.25}), Measure::uniform_probability(labels));
  const State c(Potential(labels, {2.0, 1.0, 0.5}), Measure::point_mass(labels, 2));

  CHECK(product_metric(a, a, w) == 0.0);
  CHECK(product_metric(a, b, w) == doctest::Approx(weighted_sup_metric(a.f(), b.f(), w)));
  CHECK(product_metric(a, c, w) == doctest::Approx(weighted_tv_metric(a.p(), c.p(), w)));
}

TEST_CASE("domain check modes") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const Measure uniform = Measure::uniform_probability(labels);

  // boundary equality: f = 0 with w = 1 passes everywhere
  const Potential zero(labels, {0.0, 0.0, 0.0});
  const DomainReport pass = domain_check(zero, uniform, WeightFn(0.0), DomainMode::Strict);
  CHECK(pass.clean());

  // the normal-model potential dips below log w near its minimiser
  const GridPtr flow = build_uniform_grid(-10.0, 10.0, 2000);
  std::vector<double> f(flow->size());
  for (std::size_t i = 0; i < flow->size(); ++i) {
    const double theta = flow->point(i);
    f[i] = (5.0 - theta) * (5.0 - theta) / 2.0 + 0.5 * std::log(2.0 * std::numbers::pi);
  }
  const Potential normal_f(flow, f);
  const Measure flow_uniform = Measure::uniform_probability(flow);
  const WeightFn w2(2.0);

  const DomainReport warn = domain_check(normal_f, flow_uniform, w2, DomainMode::Warn);
  CHECK_FALSE(warn.violations.empty());
  // theta = 5 sits at index 1500 and violates: f = 0.9189... < log 26 = 3.2580...
  const std::size_t at_five = 1500;
  CHECK(flow->point(at_five) == doctest::Approx(5.0).epsilon(1e-14));
  bool found = false;
  for (std::size_t idx : warn.violations) found = found || idx == at_five;
  CHECK(found);
  CHECK(warn.worst_gap > 2.0);

  CHECK_THROWS_AS(domain_check(normal_f, flow_uniform, w2, DomainMode::Strict),
                  std::runtime_error);
  CHECK(domain_check(normal_f, flow_uniform, w2, DomainMode::Off).violations.empty());

  // non-probability mass is an error in every mode
  const Measure half = Measure::from_weights(labels, {1.0 / 6, 1.0 / 6, 1.0 / 6});
  CHECK(half.total_mass() == doctest::Approx(0.5));
  CHECK_THROWS_AS(domain_check(zero, half, WeightFn(0.0), DomainMode::Off),
                  std::invalid_argument);
}

TEST_CASE("state enforces its invariants") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  const GridPtr other = build_label_grid({1.0, 2.0});
  CHECK_THROWS_AS(State(Potential(other, {0.0, 0.0}), Measure::uniform_probability(labels)),
                  std::invalid_argument);
  CHECK_THROWS_AS(State(Potential(labels, {0.0, 0.0, 0.0}),
                        Measure::from_weights(labels, {0.1, 0.1, 0.1})),
                  std::invalid_argument);
}

TEST_CASE("metric axioms on random states") {
  const GridPtr labels = build_label_grid({-1.0, 0.5, 2.0, 4.0});
  Rng rng(7);
  auto random_state = [&] {
    std::vector<double> f(4);
    for (double& x : f) x = rng.uniform(0.0, 5.0);
    return State(Potential(labels, std::move(f)), Measure::from_weights(labels, rng.dirichlet(4)));
  };

  const WeightFn w(2.0);
  for (int rep = 0; rep < 200; ++rep) {
    const State a = random_state();
    const State b = random_state();
    const State c = random_state();
    CHECK(product_metric(a, b, w) == product_metric(b, a, w));  // symmetry, exactly
    CHECK(product_metric(a, c, w) <= product_metric(a, b, w) + product_metric(b, c, w) + 1e-12);
    CHECK(product_metric(a, a, w) == 0.0);
    if (product_metric(a, b, w) == 0.0) {
      CHECK(a.f().values() == b.f().values());
    }
  }
}

TEST_CASE("quadrature consistency and weight lower bound") {
  Rng rng(11);
  const GridPtr grid = build_uniform_grid(-3.0, 3.0, 50);
  for (int rep = 0; rep < 50; ++rep) {
    const Measure p = Measure::from_weights(grid, rng.dirichlet(50));
    const Potential one(grid, std::vector<double>(50, 1.0));
    CHECK(integrate(one, p) == doctest::Approx(p.total_mass()).epsilon(1e-12));

    const WeightFn w(rng.uniform(0.0, 6.0));
    for (std::size_t i = 0; i < grid->size(); ++i) {
      CHECK(w(grid->point(i)) >= 1.0);
    }
  }
}

TEST_CASE("measure mass bookkeeping stays consistent") {
  const GridPtr labels = build_label_grid({1.0, 2.0, 3.0});
  Rng rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> lw(3);
    for (double& x : lw) x = rng.uniform(-700.0, 10.0);
    const Measure m = Measure::from_log_weights(labels, lw);
    double direct = 0.0;
    for (double x : lw) direct += std::exp(x);
    CHECK(m.total_mass() == doctest::Approx(direct).epsilon(1e-12));
  }

  // clip rule: tiny negatives clip to zero, larger ones throw
  const Measure clipped = Measure::from_weights(labels, {0.5, 0.5, -1e-16});
  CHECK(clipped.weight(2) == 0.0);
  CHECK_THROWS_AS(Measure::from_weights(labels, {0.5, 0.5, -1e-3}), std::invalid_argument);
}

TEST_SUITE_END();
