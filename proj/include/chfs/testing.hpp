#pragma once

// Test support: the naive DFT oracle and deterministic random-field
// generators. Used by the unit tests and the selftest subcommand only;
// nothing here sits on a production code path.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "rng.hpp"

namespace chfs::testing {

/// Direct nested-sum evaluation of the forward DFT definition,
///   fhat_k = N^(-dim) * sum_p f_p exp(+i mu k.x_p),
/// written without any FFT machinery so it can serve as an independent
/// oracle. O(size^2); grids above N = 8 per axis are rejected.
inline SpectralField naive_dft_oracle(const GridFunction& f) {
  const Grid& g = f.grid;
  if (g.n > 8) throw std::invalid_argument("naive_dft_oracle: grid too large (N > 8)");
  std::size_t size = g.size();
  SpectralField out{g, std::vector<std::complex<double>>(size)};
  const double two_pi_over_n = 2.0 * std::numbers::pi / g.n;
  for (std::size_t ki = 0; ki < size; ++ki) {
    std::array<int, 3> kb = g.unravel(ki);
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t pi_ = 0; pi_ < size; ++pi_) {
      std::array<int, 3> pb = g.unravel(pi_);
      long phase_units = 0;  // k.p summed over axes; mu*k.x_p = 2*pi*(k.p)/N
      for (int a = 0; a < g.dim; ++a)
        phase_units += static_cast<long>(g.wavenumber(kb[a])) * pb[a];
      double angle = two_pi_over_n * static_cast<double>(phase_units);
      acc += f.values[pi_] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out.coeffs[ki] = acc / static_cast<double>(size);
  }
  return out;
}

/// Node-iid random field, values uniform in [-scale, scale). Full spectral
/// content including the Nyquist modes.
inline GridFunction random_field(const Grid& grid, std::uint64_t seed, double scale = 1.0) {
  GridFunction f = make_grid_function(grid);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = scale * symmetric_unit(seed, i);
  return f;
}

/// Random trigonometric polynomial with per-axis wavenumbers capped at
/// max_mode (default keeps it off the Nyquist band): a sum of a few cosine
/// modes with hashed amplitudes and phases. Smooth, mean-zero.
inline GridFunction random_smooth_field(const Grid& grid, std::uint64_t seed,
                                        int max_mode = -1, double scale = 1.0) {
  if (max_mode < 0) max_mode = grid.n / 2 - 1;
  if (max_mode > grid.n / 2 - 1) max_mode = grid.n / 2 - 1;
  GridFunction f = make_grid_function(grid);
  const int n_modes = 6;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int m = 0; m < n_modes; ++m) {
    std::array<int, 3> k{0, 0, 0};
    bool nonzero = false;
    for (int a = 0; a < grid.dim; ++a) {
      std::uint64_t bits = counter_hash(seed, 16 * m + 4 + a);
      k[a] = static_cast<int>(bits % (2 * static_cast<std::uint64_t>(max_mode) + 1)) - max_mode;
      nonzero = nonzero || k[a] != 0;
    }
    if (!nonzero) k[0] = 1;
    double amp = scale * (0.2 + 0.8 * unit_real(counter_hash(seed, 16 * m + 1))) / n_modes;
    double phase = two_pi * unit_real(counter_hash(seed, 16 * m + 2));
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      std::array<int, 3> p = grid.unravel(i);
      double arg = phase;
      for (int a = 0; a < grid.dim; ++a)
        arg += two_pi * static_cast<double>(k[a]) * p[a] / grid.n;
      f.values[i] += amp * std::cos(arg);
    }
  }
  return f;
}

/// Subtract the discrete mean in place (mass becomes 0 up to rounding).
inline void subtract_mean(GridFunction& f) {
  double m = 0.0;
  for (double v : f.values) m += v;
  m /= static_cast<double>(f.values.size());
  for (double& v : f.values) v -= m;
}

}  // namespace chfs::testing
