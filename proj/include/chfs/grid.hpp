#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace chfs {

/// Uniform periodic grid on [0, L)^dim with N collocation nodes per axis.
///
/// Physical nodes are x_p = p*h with p in [0, N)^dim; fields over the grid
/// are stored row-major with the x index fastest, then y, then z.
/// Spectral modes run over [-N/2, N/2-1] per axis and are kept in wrap-around
/// bin order: bin j holds wavenumber j for j < N/2 and j - N otherwise.
struct Grid {
  int dim = 0;     // 1, 2 or 3
  int n = 0;       // nodes (= modes) per axis, even
  double length = 0.0;  // box edge L
  double h = 0.0;       // mesh size L/N
  double mu = 0.0;      // fundamental wavenumber 2*pi/L

  /// Total node count N^dim.
  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n);
    return s;
  }

  /// Box volume L^dim.
  double volume() const { return std::pow(length, dim); }

  /// Wavenumber held by spectral bin j in [0, N).
  int wavenumber(int bin) const { return bin < n / 2 ? bin : bin - n; }

  /// Per-axis bins of a linear index (unused axes stay 0). x is fastest.
  std::array<int, 3> unravel(std::size_t idx) const {
    std::array<int, 3> b{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      b[a] = static_cast<int>(idx % static_cast<std::size_t>(n));
      idx /= static_cast<std::size_t>(n);
    }
    return b;
  }

  /// Linear index of per-axis bins (inverse of unravel).
  std::size_t ravel(const std::array<int, 3>& b) const {
    std::size_t idx = 0;
    for (int a = dim - 1; a >= 0; --a)
      idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(b[a]);
    return idx;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim == b.dim && a.n == b.n && a.length == b.length;
  }
};

/// Validated grid constructor. N must be even (the spectral index set
/// [-N/2, N/2-1] needs it) and at least 4; dim in {1,2,3}; L > 0.
inline Grid make_grid(int dim, int n, double length) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("make_grid: dim must be 1, 2 or 3, got " + std::to_string(dim));
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("make_grid: N must be even and >= 4, got " + std::to_string(n));
  if (!(length > 0.0))
    throw std::invalid_argument("make_grid: L must be positive");
  Grid g;
  g.dim = dim;
  g.n = n;
  g.length = length;
  g.h = length / n;
  g.mu = 2.0 * std::numbers::pi / length;
  return g;
}

/// Real field sampled at the grid nodes, row-major, x fastest.
struct GridFunction {
  Grid grid;
  std::vector<double> values;
};

/// Complex Fourier coefficients in wrap-around bin order (same layout as the
/// physical tensor). Represents a real field iff coeff(-k) = conj(coeff(k)).
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coeffs;
};

inline GridFunction make_grid_function(const Grid& grid, double fill = 0.0) {
  return GridFunction{grid, std::vector<double>(grid.size(), fill)};
}

inline SpectralField make_spectral_field(const Grid& grid) {
  return SpectralField{grid, std::vector<std::complex<double>>(grid.size())};
}

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

/// Discrete mass <f, 1> = h^dim * sum f.
inline double mass(const GridFunction& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return std::pow(f.grid.h, f.grid.dim) * s;
}

/// Discrete l2 inner product h^dim * sum f*g.
inline double inner_product(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid, g.grid, "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * g.values[i];
  return std::pow(f.grid.h, f.grid.dim) * s;
}

inline double norm_l2(const GridFunction& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(std::pow(f.grid.h, f.grid.dim) * s);
}

inline double norm_linf(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

/// l^s norm (h^dim * sum |f|^s)^(1/s), 1 <= s < inf.
inline double norm_ls(const GridFunction& f, double s) {
  if (!(s >= 1.0) || !std::isfinite(s))
    throw std::invalid_argument("norm_ls: s must satisfy 1 <= s < inf");
  double acc = 0.0;
  for (double v : f.values) acc += std::pow(std::abs(v), s);
  return std::pow(std::pow(f.grid.h, f.grid.dim) * acc, 1.0 / s);
}

}  // namespace chfs
