#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dft.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "phi.hpp"

namespace chfs {

/// One real multiplier per spectral mode; applying it is a diagonal
/// operation in Fourier space.
struct SymbolMultiplier {
  Grid grid;
  std::vector<double> values;
};

/// Eigenvalues of -Delta_N: lambda_k = mu^2 |k|^2, exactly 0 at k = 0.
/// Even symbol, so the Nyquist mode keeps its full value mu^2 (N/2)^2.
inline SymbolMultiplier laplacian_symbol(const Grid& grid) {
  SymbolMultiplier m{grid, std::vector<double>(grid.size())};
  const double mu2 = grid.mu * grid.mu;
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    std::array<int, 3> b = grid.unravel(i);
    double ksq = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      double k = static_cast<double>(grid.wavenumber(b[a]));
      ksq += k * k;
    }
    m.values[i] = mu2 * ksq;
  }
  return m;
}

/// Eigenvalues of the stabilized operator L_kappa = eps^2 Delta_N^2 - kappa Delta_N:
/// Lambda_k = eps^2 lambda_k^2 + kappa lambda_k >= 0, exactly 0 at k = 0.
inline SymbolMultiplier stabilized_symbol(const SymbolMultiplier& lambda, double epsilon,
                                          double kappa) {
  SymbolMultiplier m{lambda.grid, std::vector<double>(lambda.values.size())};
  const double e2 = epsilon * epsilon;
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    double l = lambda.values[i];
    m.values[i] = e2 * l * l + kappa * l;
  }
  return m;
}

/// Everything the diagonal operator algebra needs: the grid, the model
/// parameters, and the precomputed symbols. Immutable once built; a kappa
/// change produces a new context (epsilon is fixed for its lifetime).
struct OperatorContext {
  Grid grid;
  double epsilon = 0.0;
  double kappa = 0.0;
  SymbolMultiplier lambda;  // eigenvalues of -Delta_N
  SymbolMultiplier Lambda;  // eigenvalues of L_kappa
};

inline OperatorContext make_operator_context(const Grid& grid, double epsilon, double kappa) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("make_operator_context: epsilon must be > 0");
  if (!(kappa >= 0.0)) throw std::invalid_argument("make_operator_context: kappa must be >= 0");
  OperatorContext ctx;
  ctx.grid = grid;
  ctx.epsilon = epsilon;
  ctx.kappa = kappa;
  ctx.lambda = laplacian_symbol(grid);
  ctx.Lambda = stabilized_symbol(ctx.lambda, epsilon, kappa);
  return ctx;
}

/// New context with a different kappa; lambda is reused, Lambda rebuilt.
inline OperatorContext with_kappa(const OperatorContext& ctx, double kappa) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("with_kappa: kappa must be >= 0");
  OperatorContext out;
  out.grid = ctx.grid;
  out.epsilon = ctx.epsilon;
  out.kappa = kappa;
  out.lambda = ctx.lambda;
  out.Lambda = stabilized_symbol(ctx.lambda, ctx.epsilon, kappa);
  return out;
}

/// Multiply each coefficient by the (real) per-mode symbol, then re-project
/// onto the Hermitian subspace so a later synthesis is exactly real.
inline SpectralField apply_multiplier(const SymbolMultiplier& m, const SpectralField& F) {
  require_same_grid(m.grid, F.grid, "apply_multiplier");
  SpectralField out = F;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    if (!std::isfinite(m.values[i]))
      throw std::invalid_argument("apply_multiplier: non-finite multiplier");
    out.coeffs[i] *= m.values[i];
  }
  hermitian_symmetrize(out);
  return out;
}

inline GridFunction apply_multiplier(const SymbolMultiplier& m, const GridFunction& f) {
  return inverse_dft(apply_multiplier(m, forward_dft(f)));
}

/// Delta_N f via the multiplier -lambda.
inline GridFunction laplacian(const OperatorContext& ctx, const GridFunction& f) {
  SymbolMultiplier m{ctx.grid, ctx.lambda.values};
  for (double& v : m.values) v = -v;
  return apply_multiplier(m, f);
}

/// L_kappa f via the multiplier Lambda.
inline GridFunction apply_stabilized(const OperatorContext& ctx, const GridFunction& f) {
  return apply_multiplier(ctx.Lambda, f);
}

namespace detail {

// First-derivative pass along one axis. The synthesis exponent is
// exp(-i mu k.x), so d/dx_a maps to the odd symbol -i mu k_a. The Nyquist
// bin k_a = -N/2 has no symmetric partner and is zeroed to keep the output
// real and the gradient skew-adjoint.
inline SpectralField gradient_component_spectral(const SpectralField& F, int axis) {
  const Grid& g = F.grid;
  if (axis < 0 || axis >= g.dim) throw std::invalid_argument("gradient: axis out of range");
  SpectralField out = F;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    std::array<int, 3> b = g.unravel(i);
    if (b[axis] == g.n / 2) {
      out.coeffs[i] = 0.0;
    } else {
      double k = static_cast<double>(g.wavenumber(b[axis]));
      out.coeffs[i] *= std::complex<double>(0.0, -g.mu * k);
    }
  }
  hermitian_symmetrize(out);
  return out;
}

}  // namespace detail

/// One component of the discrete gradient.
inline GridFunction gradient_component(const GridFunction& f, int axis) {
  return inverse_dft(detail::gradient_component_spectral(forward_dft(f), axis));
}

/// All dim components of nabla_N f.
inline std::vector<GridFunction> gradient(const OperatorContext& ctx, const GridFunction& f) {
  require_same_grid(ctx.grid, f.grid, "gradient");
  std::vector<GridFunction> out;
  out.reserve(ctx.grid.dim);
  SpectralField F = forward_dft(f);
  for (int a = 0; a < ctx.grid.dim; ++a)
    out.push_back(inverse_dft(detail::gradient_component_spectral(F, a)));
  return out;
}

/// nabla_N . v for a vector field given as dim components.
inline GridFunction divergence(const OperatorContext& ctx, const std::vector<GridFunction>& v) {
  if (static_cast<int>(v.size()) != ctx.grid.dim)
    throw std::invalid_argument("divergence: expected one component per axis");
  GridFunction out = make_grid_function(ctx.grid);
  for (int a = 0; a < ctx.grid.dim; ++a) {
    require_same_grid(ctx.grid, v[a].grid, "divergence");
    GridFunction d = inverse_dft(detail::gradient_component_spectral(forward_dft(v[a]), a));
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += d.values[i];
  }
  return out;
}

/// (-Delta_N)^{-1} f on the mean-zero space: symbol 1/lambda away from k = 0,
/// zero mode annihilated. Delta_N applied to the result reproduces -f on the
/// nonzero modes. Input must be mean-zero.
inline GridFunction inv_laplacian(const OperatorContext& ctx, const GridFunction& f) {
  require_same_grid(ctx.grid, f.grid, "inv_laplacian");
  if (std::abs(mass(f)) > 1e-10 * (1.0 + norm_l2(f)))
    throw std::invalid_argument("inv_laplacian: input not mean-zero");
  SymbolMultiplier m{ctx.grid, std::vector<double>(ctx.grid.size())};
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    double l = ctx.lambda.values[i];
    m.values[i] = l == 0.0 ? 0.0 : 1.0 / l;
  }
  return apply_multiplier(m, f);
}

/// phi_i(tau L_kappa) f: per-mode multiplier phi_i(tau Lambda_k). The zero
/// mode gets phi_i(0) = 1, so both phi operators preserve the mean.
inline SymbolMultiplier phi_symbol(const OperatorContext& ctx, int i, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("phi_symbol: tau must be > 0");
  SymbolMultiplier m{ctx.grid, std::vector<double>(ctx.grid.size())};
  for (std::size_t j = 0; j < m.values.size(); ++j)
    m.values[j] = phi(i, tau * ctx.Lambda.values[j]);
  return m;
}

inline GridFunction apply_phi(const OperatorContext& ctx, int i, double tau,
                              const GridFunction& f) {
  return apply_multiplier(phi_symbol(ctx, i, tau), f);
}

/// N_kappa(u) = Delta_N(u^3 - u) - kappa Delta_N u, i.e. the multiplier
/// -lambda applied to the transform of u^3 - (1+kappa) u. The cubic is taken
/// pointwise at the nodes; with dealias set, the 2/3-rule mask zeroes the
/// aliased tail of the cubic's spectrum (the linear part is never masked).
/// Mean-zero by construction (lambda_0 = 0).
inline SpectralField nonlinear_term_spectral(const OperatorContext& ctx, const GridFunction& u,
                                             bool dealias = false) {
  require_same_grid(ctx.grid, u.grid, "nonlinear_term");
  double sup = norm_linf(u);
  if (!(sup <= 1e3)) throw divergence_error(sup);

  const double c1 = 1.0 + ctx.kappa;
  SpectralField W{ctx.grid, {}};
  if (!dealias) {
    GridFunction w = make_grid_function(ctx.grid);
    for (std::size_t i = 0; i < w.values.size(); ++i) {
      double v = u.values[i];
      w.values[i] = v * v * v - c1 * v;
    }
    W = forward_dft(w);
  } else {
    GridFunction cubic = make_grid_function(ctx.grid);
    for (std::size_t i = 0; i < cubic.values.size(); ++i) {
      double v = u.values[i];
      cubic.values[i] = v * v * v;
    }
    W = forward_dft(cubic);
    const Grid& g = ctx.grid;
    for (std::size_t i = 0; i < W.coeffs.size(); ++i) {
      std::array<int, 3> b = g.unravel(i);
      for (int a = 0; a < g.dim; ++a)
        if (3 * std::abs(g.wavenumber(b[a])) > g.n) W.coeffs[i] = 0.0;
    }
    SpectralField U = forward_dft(u);
    for (std::size_t i = 0; i < W.coeffs.size(); ++i) W.coeffs[i] -= c1 * U.coeffs[i];
  }
  for (std::size_t i = 0; i < W.coeffs.size(); ++i) W.coeffs[i] *= -ctx.lambda.values[i];
  hermitian_symmetrize(W);
  return W;
}

inline GridFunction nonlinear_term(const OperatorContext& ctx, const GridFunction& u,
                                   bool dealias = false) {
  return inverse_dft(nonlinear_term_spectral(ctx, u, dealias));
}

/// Diagnostic operators from the stability analysis, all diagonal with
/// nonnegative symbols (square roots of products of lambda, Lambda and
/// phi1(tau Lambda); rounding negatives are clamped to 0):
///   g1           sqrt(phi1(tau Lambda) Lambda lambda)
///   g2           sqrt(phi1(tau Lambda) Lambda lambda^2)
///   g2_tilde     sqrt(Lambda lambda^2)
///   phi_half     sqrt(phi1(tau Lambda))
///   phi_inv_half sqrt(tau Lambda / (1 - exp(-tau Lambda))), value 1 at Lambda = 0
enum class GOperatorKind { g1, g2, g2_tilde, phi_half, phi_inv_half };

inline SymbolMultiplier g_operator_symbol(const OperatorContext& ctx, GOperatorKind kind,
                                          double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("g_operator: tau must be > 0");
  SymbolMultiplier m{ctx.grid, std::vector<double>(ctx.grid.size())};
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    double l = ctx.lambda.values[i];
    double L = ctx.Lambda.values[i];
    double v = 0.0;
    switch (kind) {
      case GOperatorKind::g1: v = phi1(tau * L) * L * l; break;
      case GOperatorKind::g2: v = phi1(tau * L) * L * l * l; break;
      case GOperatorKind::g2_tilde: v = L * l * l; break;
      case GOperatorKind::phi_half: v = phi1(tau * L); break;
      case GOperatorKind::phi_inv_half: v = phi1_recip(tau * L); break;
    }
    m.values[i] = std::sqrt(std::max(0.0, v));
  }
  return m;
}

inline GridFunction g_operator(const OperatorContext& ctx, GOperatorKind kind, double tau,
                               const GridFunction& f) {
  return apply_multiplier(g_operator_symbol(ctx, kind, tau), f);
}

}  // namespace chfs
