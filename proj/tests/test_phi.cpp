#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "chfs/phi.hpp"

using namespace chfs;

TEST_CASE("values at zero and the golden point") {
  CHECK(phi0(0.0) == 1.0);
  CHECK(phi1(0.0) == 1.0);
  CHECK(phi1_recip(0.0) == 1.0);
  CHECK(s1(0.0) == 1.0);
  CHECK(s2(0.0) == 2.0);

  CHECK(phi1(1.0) == Catch::Approx(0.6321205588285577).epsilon(1e-15));
  CHECK(phi0(1.0) == Catch::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("agreement with the extended-precision forms") {
  // reference values through long double expm1, including the cancellation
  // region near zero and the overflow region
  for (double z : {1e-12, 1e-8, 1e-4, 0.1, 1.0, 10.0, 300.0, 1e4, 1e6}) {
    long double zl = z;
    CHECK(phi0(z) == Catch::Approx(static_cast<double>(std::exp(-zl))).epsilon(1e-14));
    CHECK(phi1(z) ==
          Catch::Approx(static_cast<double>(-std::expm1(-zl) / zl)).epsilon(1e-14));
    CHECK(phi1_recip(z) ==
          Catch::Approx(static_cast<double>(zl / -std::expm1(-zl))).epsilon(1e-14));
    long double e = std::expm1(zl);
    double s1_ref = std::isinf(static_cast<double>(e)) ? 0.0 : static_cast<double>(zl / e);
    if (s1_ref == 0.0)
      CHECK(s1(z) == 0.0);
    else
      CHECK(s1(z) == Catch::Approx(s1_ref).epsilon(1e-14));
    CHECK(s2(z) == z + 2.0 * s1(z));
  }
}

TEST_CASE("bounds and estimates on the nonnegative axis") {
  double prev0 = 1.0, prev1 = 1.0;
  for (int i = 0; i <= 4000; ++i) {
    double z = std::pow(10.0, -8.0 + 14.0 * i / 4000.0);
    double p0 = phi0(z), p1 = phi1(z), pr = phi1_recip(z);
    CHECK(p0 >= 0.0);
    CHECK(p0 <= prev0);
    CHECK(p1 > 0.0);
    CHECK(p1 <= prev1);
    CHECK(p1 <= 1.0);
    CHECK(pr >= 1.0);
    CHECK(pr <= (1.0 + z) * (1.0 + 1e-15));
    CHECK(p1 * pr == Catch::Approx(1.0).epsilon(1e-14));
    double v1 = s1(z), v2 = s2(z);
    CHECK(v1 >= 0.0);
    CHECK(v1 <= 1.0);
    CHECK(v2 >= 2.0 * (1.0 - 1e-15));
    CHECK(v2 - 0.5 * v1 >= 0.0);
    prev0 = p0;
    prev1 = p1;
  }
}

TEST_CASE("reciprocal dominates the identity on both half-axes") {
  for (int i = 0; i <= 2000; ++i) {
    double z = -50.0 + 100.0 * i / 2000.0;
    CHECK(phi1_recip(z) >= z);
  }
  // and it stays a true reciprocal for negative arguments
  CHECK(phi1_recip(-1.0) ==
        Catch::Approx(-1.0 / -std::expm1(1.0)).epsilon(1e-14));
}

TEST_CASE("index dispatchers and domain errors") {
  CHECK(phi(0, 2.0) == phi0(2.0));
  CHECK(phi(1, 2.0) == phi1(2.0));
  CHECK(s_fn(1, 2.0) == s1(2.0));
  CHECK(s_fn(2, 2.0) == s2(2.0));
  CHECK_THROWS_AS(phi(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(s_fn(0, 1.0), std::invalid_argument);

  CHECK_THROWS_AS(phi0(-1e-12), std::domain_error);
  CHECK_THROWS_AS(phi1(-1.0), std::domain_error);
  CHECK_THROWS_AS(s1(-0.5), std::domain_error);
  CHECK_THROWS_AS(s2(-2.0), std::domain_error);
}
