#pragma once

#include <cassert>
#include <cmath>
#include <numbers>

#include "dft.hpp"
#include "grid.hpp"
#include "operators.hpp"

namespace chfs {

/// Double-well potential F(u) = (u^2 - 1)^2 / 4.
inline double potential(double u) {
  double d = u * u - 1.0;
  return 0.25 * d * d;
}

/// f(u) = F'(u) = u^3 - u.
inline double potential_derivative(double u) { return u * u * u - u; }

/// |Omega| * sum_k lambda_k^p |fhat_k|^2 over the full mode set. This is the
/// spectral (Parseval) form of the seminorms: p = 1 gives |grad_N f|_2^2,
/// p = 2 gives |Delta_N f|_2^2, p = 3 gives |Delta_N grad_N f|_2^2, and so on.
inline double spectral_seminorm_sq(const SpectralField& F, int p) {
  const Grid& g = F.grid;
  const double mu2 = g.mu * g.mu;
  double s = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    std::array<int, 3> b = g.unravel(i);
    double ksq = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      double k = static_cast<double>(g.wavenumber(b[a]));
      ksq += k * k;
    }
    double w = 1.0;
    double l = mu2 * ksq;
    for (int q = 0; q < p; ++q) w *= l;
    s += w * std::norm(F.coeffs[i]);
  }
  return g.volume() * s;
}

inline double spectral_seminorm_sq(const GridFunction& f, int p) {
  return spectral_seminorm_sq(forward_dft(f), p);
}

/// E_N split into its two contributions.
struct EnergyReport {
  double energy = 0.0;                // E_N(u)
  double gradient_seminorm_sq = 0.0;  // |grad_N u|_2^2
  double potential_integral = 0.0;    // <F(u), 1>
};

/// Discrete Ginzburg-Landau energy
///   E_N(u) = eps^2/2 |grad_N u|_2^2 + <F(u), 1>,
/// gradient term in spectral form, potential term by collocation quadrature
/// (exactly the inner product the scheme dissipates).
inline EnergyReport discrete_energy(const OperatorContext& ctx, const GridFunction& u) {
  require_same_grid(ctx.grid, u.grid, "discrete_energy");
  EnergyReport r;
  r.gradient_seminorm_sq = spectral_seminorm_sq(u, 1);
  double s = 0.0;
  for (double v : u.values) s += potential(v);
  r.potential_integral = std::pow(ctx.grid.h, ctx.grid.dim) * s;
  r.energy = 0.5 * ctx.epsilon * ctx.epsilon * r.gradient_seminorm_sq + r.potential_integral;
  assert(r.potential_integral >= 0.0);
  assert(r.energy >= 0.5 * ctx.epsilon * ctx.epsilon * r.gradient_seminorm_sq -
                         1e-12 * (1.0 + std::abs(r.energy)));
  return r;
}

/// Uniform-in-time H1 bound sqrt(2 E0)/eps implied by energy dissipation:
/// eps^2/2 |grad u|^2 <= E_N(u) <= E0.
inline double h1_bound_from_energy(double e0, double epsilon) {
  if (!(e0 >= 0.0)) throw std::invalid_argument("h1_bound_from_energy: E0 must be >= 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("h1_bound_from_energy: epsilon must be > 0");
  return std::sqrt(2.0 * e0) / epsilon;
}

/// Explicit-constant Sobolev right side
///   sqrt( 3 |Omega|^{-2} mass^2 + 3/(8 pi^3) * |grad_N f|_2 |Delta_N f|_2 )
/// from precomputed ingredients (as found in a diagnostics trace).
inline double sobolev_linf_bound(double mass_value, double h1_seminorm, double h2_seminorm,
                                 double volume) {
  const double c = 3.0 / (8.0 * std::pow(std::numbers::pi, 3));
  double mean_term = 3.0 * (mass_value / volume) * (mass_value / volume);
  return std::sqrt(mean_term + c * h1_seminorm * h2_seminorm);
}

/// Same bound computed directly from a field; callers assert |f|_inf <= this.
inline double sobolev_linf_bound(const GridFunction& f) {
  SpectralField F = forward_dft(f);
  double h1 = std::sqrt(spectral_seminorm_sq(F, 1));
  double h2 = std::sqrt(spectral_seminorm_sq(F, 2));
  return sobolev_linf_bound(mass(f), h1, h2, f.grid.volume());
}

}  // namespace chfs
