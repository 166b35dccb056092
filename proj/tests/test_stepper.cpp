#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "chfs/energy.hpp"
#include "chfs/errors.hpp"
#include "chfs/grid.hpp"
#include "chfs/initial_conditions.hpp"
#include "chfs/operators.hpp"
#include "chfs/stepper.hpp"
#include "chfs/testing.hpp"

using namespace chfs;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_diff(const GridFunction& a, const GridFunction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}
}  // namespace

TEST_CASE("stabilization predictor") {
  Grid g = make_grid(2, 8, kTwoPi);
  // kappa = max(kappa_min, safety * (3 M^2 - 1)/2) clamped at 0
  CHECK(adapt_kappa(make_grid_function(g, 1.0), nullptr, nullptr, 0.0, 1.0) ==
        Catch::Approx(1.0).epsilon(1e-15));
  CHECK(adapt_kappa(make_grid_function(g, 0.0), nullptr, nullptr, 0.0, 1.0) == 0.0);
  CHECK(adapt_kappa(make_grid_function(g, 0.0), nullptr, nullptr, 0.25, 1.1) == 0.25);
  CHECK(adapt_kappa(make_grid_function(g, 2.0), nullptr, nullptr, 0.0, 1.1) ==
        Catch::Approx(6.05).epsilon(1e-15));

  // the sup ranges over every state handed in
  GridFunction big = make_grid_function(g, 2.0);
  GridFunction small = make_grid_function(g, 0.5);
  CHECK(adapt_kappa(small, &big, nullptr, 0.0, 1.0) == Catch::Approx(5.5).epsilon(1e-14));
}

TEST_CASE("configuration validation") {
  Grid g = make_grid(2, 8, kTwoPi);
  OperatorContext ctx = make_operator_context(g, 0.5, 0.0);
  GridFunction u = make_grid_function(g, 0.1);

  StepperConfig cfg;
  cfg.tau = 0.0;
  CHECK_THROWS_AS(step(ctx, u, cfg), std::invalid_argument);
  cfg.tau = 0.1;
  cfg.kappa_policy = fixed_kappa(1.0);
  cfg.kappa_policy.kappa = -1.0;
  CHECK_THROWS_AS(step(ctx, u, cfg), std::invalid_argument);
  cfg.kappa_policy = adaptive_kappa(0.0, 0.5);  // safety < 1
  CHECK_THROWS_AS(step(ctx, u, cfg), std::invalid_argument);
  cfg.kappa_policy = adaptive_kappa(0.0, 1.1, 0);  // no retries allowed
  CHECK_THROWS_AS(step(ctx, u, cfg), std::invalid_argument);
}

TEST_CASE("pure phase states are fixed points") {
  Grid g = make_grid(2, 16, kTwoPi);
  OperatorContext ctx = make_operator_context(g, 0.5, 0.0);
  for (double c : {0.0, 1.0, -1.0}) {
    GridFunction u = make_grid_function(g, c);
    StepperConfig cfg;
    cfg.tau = 0.5;
    cfg.kappa_policy = adaptive_kappa();
    StepResult r = step(ctx, u, cfg);
    for (double v : r.u_next.values) CHECK(std::abs(v - c) <= 1e-13);
    for (double v : r.u_stage.values) CHECK(std::abs(v - c) <= 1e-13);
    CHECK(r.mass_drift <= 1e-13 * (1.0 + g.volume()));
  }
}

TEST_CASE("first stage alone") {
  Grid g = make_grid(2, 16, kTwoPi);
  OperatorContext ctx = make_operator_context(g, 0.5, 0.0);
  CHECK(norm_linf(stage1(ctx, make_grid_function(g, 0.0), 0.3)) <= 1e-14);

  GridFunction u = testing::random_smooth_field(g, 3, -1, 0.3);
  double m0 = mass(u);
  GridFunction s = stage1(ctx, u, 0.3);
  CHECK(std::abs(mass(s) - m0) <= 1e-11 * (1.0 + std::abs(m0)));

  // with the nonlinearity switched off the stage is the phi0 propagator
  Grid g1 = make_grid(1, 16, kTwoPi);
  OperatorContext cx = make_operator_context(g1, 1.0, 0.0);
  GridFunction f = make_grid_function(g1);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::cos(i * g1.h);
  GridFunction hook = stage1(cx, f, 0.5, true);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    CHECK(std::abs(hook.values[i] - std::exp(-0.5) * f.values[i]) <= 1e-13);
}

TEST_CASE("linear dynamics are integrated exactly") {
  Grid g = make_grid(2, 16, kTwoPi);
  OperatorContext ctx = make_operator_context(g, 0.7, 1.0);
  GridFunction u0 = testing::random_smooth_field(g, 5);

  StepperConfig cfg;
  cfg.tau = 0.3;
  cfg.kappa_policy = fixed_kappa(1.0);
  cfg.linear_only = true;

  GridFunction u = u0;
  const int n_steps = 12;
  for (int n = 0; n < n_steps; ++n) u = step(ctx, u, cfg).u_next;
  GridFunction exact = apply_phi(ctx, 0, n_steps * cfg.tau, u0);
  CHECK(max_diff(u, exact) <= n_steps * 1e-14 * norm_linf(u0));

  SECTION("semigroup property") {
    StepperConfig dbl = cfg;
    dbl.tau = 0.6;
    GridFunction two = step(ctx, step(ctx, u0, cfg).u_next, cfg).u_next;
    GridFunction once = step(ctx, u0, dbl).u_next;
    CHECK(max_diff(two, once) <= 1e-13 * (1.0 + norm_linf(u0)));
  }
}

TEST_CASE("energy decays for every step size under adaptive stabilization") {
  Grid g = make_grid(2, 16, kTwoPi);
  OperatorContext ctx = make_operator_context(g, 0.5, 0.0);
  for (double tau : {0.01, 0.1, 1.0, 10.0}) {
    GridFunction u = make_initial_condition(g, spinodal_ic(0.05, 42), true, 0);
    double m0 = mass(u);
    StepperConfig cfg;
    cfg.tau = tau;
    cfg.kappa_policy = adaptive_kappa();
    for (int n = 0; n < 15; ++n) {
      StepResult r = step(ctx, u, cfg);
      double slack = 1e-10 * (1.0 + std::abs(r.energy_before));
      CHECK(r.energy_after <= r.energy_before + slack);
      OperatorContext used = with_kappa(ctx, r.kappa_used);
      CHECK(discrete_energy(used, r.u_stage).energy <= r.energy_before + slack);
      CHECK(r.mass_drift <= 1e-11 * (1.0 + std::abs(m0)));
      CHECK(r.retries <= 8);
      u = std::move(r.u_next);
    }
  }
}

TEST_CASE("fixed stabilization reports the configured kappa") {
  Grid g = make_grid(2, 16, kTwoPi);
  OperatorContext ctx = make_operator_context(g, 0.5, 0.0);
  GridFunction u = make_initial_condition(g, spinodal_ic(0.05, 1), true, 0);
  StepperConfig cfg;
  cfg.tau = 0.1;
  cfg.kappa_policy = fixed_kappa(2.0);
  StepResult r = step(ctx, u, cfg);
  CHECK(r.kappa_used == 2.0);
  CHECK(r.retries == 0);
  CHECK(r.energy_before > r.energy_after);  // spinodal data relaxes immediately
}

TEST_CASE("one-step recast residuals") {
  Grid g = make_grid(2, 16, kTwoPi);
  OperatorContext ctx = make_operator_context(g, 0.5, 0.0);
  GridFunction u = testing::random_smooth_field(g, 17, -1, 0.4);
  StepperConfig cfg;
  cfg.tau = 0.2;
  cfg.kappa_policy = adaptive_kappa();
  StepResult r = step(ctx, u, cfg);
  OperatorContext used = with_kappa(ctx, r.kappa_used);

  auto [r1, r2] = equivalent_form_residual(used, u, r.u_stage, r.u_next, cfg.tau);
  CHECK(r1 <= 1e-10 * (1.0 + norm_l2(u)));
  CHECK(r2 <= 1e-10 * (1.0 + norm_l2(u)));

  SECTION("a perturbed stage is detected at its own magnitude") {
    GridFunction bumped = r.u_stage;
    for (double& v : bumped.values) v += 1e-3;
    auto [p1, p2] = equivalent_form_residual(used, u, bumped, r.u_next, cfg.tau);
    double expected = 1e-3 * std::sqrt(g.volume());
    CHECK(p1 >= 0.1 * expected);
    CHECK(p1 <= 10.0 * expected);
    CHECK(p2 > 0.0);  // enters the second form through N(u_stage)
  }

  SECTION("zero fields give exactly zero residuals") {
    GridFunction z = make_grid_function(g, 0.0);
    auto [z1, z2] = equivalent_form_residual(ctx, z, z, z, cfg.tau);
    CHECK(z1 == 0.0);
    CHECK(z2 == 0.0);
  }
}

TEST_CASE("divergence guard") {
  Grid g = make_grid(2, 8, kTwoPi);
  OperatorContext ctx = make_operator_context(g, 0.5, 0.0);
  StepperConfig cfg;
  cfg.tau = 0.1;
  cfg.kappa_policy = adaptive_kappa();
  CHECK_THROWS_AS(step(ctx, make_grid_function(g, 2000.0), cfg), divergence_error);

  cfg.divergence_linf = 0.5;
  CHECK_THROWS_AS(step(ctx, make_grid_function(g, 0.9), cfg), divergence_error);
}
