#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "chfs/dft.hpp"
#include "chfs/energy.hpp"
#include "chfs/grid.hpp"
#include "chfs/operators.hpp"
#include "chfs/testing.hpp"

using namespace chfs;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("double-well potential and its derivative") {
  CHECK(potential(1.0) == 0.0);
  CHECK(potential(-1.0) == 0.0);
  CHECK(potential(0.0) == 0.25);
  CHECK(potential_derivative(0.0) == 0.0);
  CHECK(potential_derivative(1.0) == 0.0);
  CHECK(potential_derivative(-1.0) == 0.0);

  for (double u : {-2.0, 0.3, 1.7}) {
    double d = 1e-5;
    double fd = (potential(u + d) - potential(u - d)) / (2.0 * d);
    CHECK(std::abs(fd - potential_derivative(u)) <= 1e-8);
  }
}

TEST_CASE("energy of reference states on the 2 pi cube") {
  Grid g = make_grid(3, 8, kTwoPi);
  OperatorContext ctx = make_operator_context(g, 1.0, 0.0);
  double vol = g.volume();

  CHECK(std::abs(discrete_energy(ctx, make_grid_function(g, 1.0)).energy) <= 1e-14 * vol);
  CHECK(std::abs(discrete_energy(ctx, make_grid_function(g, -1.0)).energy) <= 1e-14 * vol);
  CHECK(discrete_energy(ctx, make_grid_function(g, 0.0)).energy ==
        Catch::Approx(vol / 4.0).epsilon(1e-14));

  // u = sin(x): gradient part |Omega|/4, potential part 3|Omega|/32
  GridFunction s = make_grid_function(g);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = std::sin(g.unravel(i)[0] * g.h);
  CHECK(discrete_energy(ctx, s).energy == Catch::Approx(vol * 11.0 / 32.0).epsilon(1e-13));
}

TEST_CASE("energy report decomposition") {
  Grid g = make_grid(2, 16, 4.0);
  OperatorContext ctx = make_operator_context(g, 0.3, 7.0);  // kappa must not enter the energy
  GridFunction f = testing::random_field(g, 12, 1.4);
  EnergyReport r = discrete_energy(ctx, f);
  CHECK(r.energy == Catch::Approx(0.5 * 0.09 * r.gradient_seminorm_sq + r.potential_integral)
                        .epsilon(1e-14));
  CHECK(r.potential_integral >= 0.0);

  // the gradient seminorm is the spectral sum |Omega| sum lambda |f_k|^2
  CHECK(r.gradient_seminorm_sq ==
        Catch::Approx(spectral_seminorm_sq(f, 1)).epsilon(1e-12));
}

TEST_CASE("spectral seminorms match assembled derivatives") {
  Grid g = make_grid(2, 16, kTwoPi);
  OperatorContext ctx = make_operator_context(g, 1.0, 0.0);
  GridFunction f = testing::random_smooth_field(g, 8);

  double h1 = spectral_seminorm_sq(f, 1);
  double direct = 0.0;
  for (const GridFunction& d : gradient(ctx, f)) direct += norm_l2(d) * norm_l2(d);
  CHECK(h1 == Catch::Approx(direct).epsilon(1e-11));

  double h2 = spectral_seminorm_sq(f, 2);
  GridFunction lap = laplacian(ctx, f);
  CHECK(h2 == Catch::Approx(norm_l2(lap) * norm_l2(lap)).epsilon(1e-11));
}

TEST_CASE("uniform bound from the initial energy") {
  CHECK(h1_bound_from_energy(0.0, 0.5) == 0.0);
  CHECK(h1_bound_from_energy(2.0, 1.0) == Catch::Approx(2.0).epsilon(1e-15));
  CHECK(h1_bound_from_energy(0.5, 0.1) == Catch::Approx(10.0).epsilon(1e-14));
  CHECK_THROWS_AS(h1_bound_from_energy(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(h1_bound_from_energy(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("sup-norm interpolation bound") {
  Grid g = make_grid(3, 8, kTwoPi);

  SECTION("constants saturate the mass term") {
    CHECK(sobolev_linf_bound(make_grid_function(g, 0.8)) ==
          Catch::Approx(std::sqrt(3.0) * 0.8).epsilon(1e-13));
    CHECK(sobolev_linf_bound(make_grid_function(g, 0.0)) == 0.0);
  }

  SECTION("random fields on the unit cube stay below the bound") {
    for (int rep = 0; rep < 30; ++rep) {
      GridFunction f = testing::random_field(g, 700 + rep);
      CHECK(norm_linf(f) <= sobolev_linf_bound(f));
    }
  }

  SECTION("component form agrees with the field form") {
    GridFunction f = testing::random_field(g, 4);
    SpectralField F = forward_dft(f);
    double direct = sobolev_linf_bound(mass(f), std::sqrt(spectral_seminorm_sq(F, 1)),
                                       std::sqrt(spectral_seminorm_sq(F, 2)), g.volume());
    CHECK(sobolev_linf_bound(f) == Catch::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("product rules with explicit constants") {
  // band-limited factors: the pointwise product is exactly resolved, so the
  // collocation derivatives see the true product
  for (int dim : {1, 2}) {
    Grid g = make_grid(dim, 16, kTwoPi);
    for (int rep = 0; rep < 10; ++rep) {
      GridFunction f = testing::random_smooth_field(g, 40 + rep, 4);
      GridFunction h = testing::random_smooth_field(g, 80 + rep, 4);
      GridFunction p = make_grid_function(g);
      for (std::size_t i = 0; i < p.values.size(); ++i)
        p.values[i] = f.values[i] * h.values[i];
      double fi = norm_linf(f), hi = norm_linf(h);

      CHECK(spectral_seminorm_sq(p, 2) <=
            8.0 * (hi * hi * spectral_seminorm_sq(f, 2) + fi * fi * spectral_seminorm_sq(h, 2)));
      CHECK(spectral_seminorm_sq(p, 1) <=
            2.0 * (hi * hi * spectral_seminorm_sq(f, 1) + fi * fi * spectral_seminorm_sq(h, 1)));
    }
  }
}
