#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "errors.hpp"
#include "grid.hpp"
#include "rng.hpp"

namespace chfs {

/// Initial-condition catalog. Forms:
///   constant(c)             u = c
///   single_mode(k, a)       u = a cos(mu k x_1)
///   two_mode                u = 0.1 cos(mu k1.x) + 0.05 cos(mu k2.x),
///                           k1 = (1,0,0), k2 = (2,1,1) truncated to dim
///   spinodal(a[, seed])     node-iid uniform in [-a, a] from the counter
///                           hash, mean-subtracted when zero_mean is set
struct InitialCondition {
  enum class Kind { constant, single_mode, two_mode, spinodal };
  Kind kind = Kind::spinodal;
  double value = 0.05;  // constant c, mode amplitude, or spinodal amplitude
  int mode = 1;         // single_mode wavenumber
  std::uint64_t seed = 0;
  bool seed_explicit = false;  // spinodal(a, seed) vs config-level seed
};

inline InitialCondition constant_ic(double c) {
  return InitialCondition{InitialCondition::Kind::constant, c, 0, 0, false};
}

inline InitialCondition single_mode_ic(int k, double amplitude) {
  return InitialCondition{InitialCondition::Kind::single_mode, amplitude, k, 0, false};
}

inline InitialCondition two_mode_ic() {
  return InitialCondition{InitialCondition::Kind::two_mode, 0.0, 0, 0, false};
}

inline InitialCondition spinodal_ic(double amplitude) {
  return InitialCondition{InitialCondition::Kind::spinodal, amplitude, 0, 0, false};
}

inline InitialCondition spinodal_ic(double amplitude, std::uint64_t seed) {
  return InitialCondition{InitialCondition::Kind::spinodal, amplitude, 0, seed, true};
}

/// Realize the initial condition on a grid. `default_seed` is the
/// config-level seed, used by spinodal forms that did not pin their own.
/// Mean subtraction applies to the random form only; the analytic forms keep
/// their exact mean (the cosine modes are already mean-free, a constant
/// keeps its mass).
inline GridFunction make_initial_condition(const Grid& grid, const InitialCondition& ic,
                                           bool zero_mean = true,
                                           std::uint64_t default_seed = 0) {
  GridFunction u = make_grid_function(grid);
  switch (ic.kind) {
    case InitialCondition::Kind::constant: {
      for (double& v : u.values) v = ic.value;
      return u;
    }
    case InitialCondition::Kind::single_mode: {
      int k = ic.mode;
      if (std::abs(k) < 1 || std::abs(k) > grid.n / 2 - 1)
        throw config_error("single_mode: k must satisfy 1 <= |k| <= N/2 - 1");
      for (std::size_t i = 0; i < u.values.size(); ++i) {
        auto p = grid.unravel(i);
        u.values[i] = ic.value * std::cos(grid.mu * k * (p[0] * grid.h));
      }
      return u;
    }
    case InitialCondition::Kind::two_mode: {
      const int k1[3] = {1, 0, 0};
      const int k2[3] = {2, 1, 1};
      if (grid.n / 2 - 1 < 2) throw config_error("two_mode: N must be >= 6");
      for (std::size_t i = 0; i < u.values.size(); ++i) {
        auto p = grid.unravel(i);
        double a1 = 0.0, a2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
          a1 += k1[a] * (p[a] * grid.h);
          a2 += k2[a] * (p[a] * grid.h);
        }
        u.values[i] = 0.1 * std::cos(grid.mu * a1) + 0.05 * std::cos(grid.mu * a2);
      }
      return u;
    }
    case InitialCondition::Kind::spinodal: {
      if (!(ic.value > 0.0 && ic.value <= 0.2))
        throw config_error("spinodal: amplitude must lie in (0, 0.2]");
      std::uint64_t seed = ic.seed_explicit ? ic.seed : default_seed;
      for (std::size_t i = 0; i < u.values.size(); ++i)
        u.values[i] = ic.value * symmetric_unit(seed, i);
      if (zero_mean) {
        double mean = 0.0;
        for (double v : u.values) mean += v;
        mean /= static_cast<double>(u.values.size());
        for (double& v : u.values) v -= mean;
      }
      return u;
    }
  }
  throw std::logic_error("make_initial_condition: unreachable");
}

}  // namespace chfs
