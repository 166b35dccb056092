#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "energy.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "operators.hpp"

namespace chfs {

/// Stabilization policy: a fixed kappa, or per-step prediction with
/// a-posteriori validation and retry.
struct KappaPolicy {
  enum class Kind { fixed, adaptive };
  Kind kind = Kind::adaptive;
  double kappa = 0.0;   // fixed value, or the floor kappa_min when adaptive
  double safety = 1.1;  // multiplier on the theoretical requirement
  int max_retries = 8;
};

inline KappaPolicy fixed_kappa(double kappa) {
  return KappaPolicy{KappaPolicy::Kind::fixed, kappa, 1.0, 1};
}

inline KappaPolicy adaptive_kappa(double kappa_min = 0.0, double safety = 1.1,
                                  int max_retries = 8) {
  return KappaPolicy{KappaPolicy::Kind::adaptive, kappa_min, safety, max_retries};
}

struct StepperConfig {
  double tau = 0.0;
  KappaPolicy kappa_policy;
  double divergence_linf = 1e3;  // abort threshold on |u|_inf
  bool linear_only = false;      // test hook: treat N_kappa as identically 0
  bool dealias = false;          // 2/3-rule mask on the cubic
};

struct StepResult {
  GridFunction u_next;
  GridFunction u_stage;
  double kappa_used = 0.0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  double mass_drift = 0.0;
  int retries = 0;
};

/// Stabilization requirement max(kappa_min, safety*(3M^2-1)/2, 0) where M is
/// the largest linf norm among the provided fields (pass null for fields not
/// yet known).
inline double adapt_kappa(const GridFunction& u_n, const GridFunction* u_stage,
                          const GridFunction* u_next, double kappa_min, double safety) {
  double m = norm_linf(u_n);
  if (u_stage != nullptr) m = std::max(m, norm_linf(*u_stage));
  if (u_next != nullptr) m = std::max(m, norm_linf(*u_next));
  double required = 0.5 * (3.0 * m * m - 1.0);
  return std::max(kappa_min, std::max(0.0, safety * required));
}

namespace detail {

inline void validate_stepper_config(const StepperConfig& cfg) {
  if (!(cfg.tau > 0.0)) throw std::invalid_argument("step: tau must be > 0");
  const KappaPolicy& p = cfg.kappa_policy;
  if (p.kind == KappaPolicy::Kind::adaptive) {
    if (!(p.kappa >= 0.0)) throw std::invalid_argument("step: kappa_min must be >= 0");
    if (!(p.safety >= 1.0)) throw std::invalid_argument("step: safety must be >= 1");
    if (p.max_retries < 1) throw std::invalid_argument("step: max_retries must be >= 1");
  } else if (!(p.kappa >= 0.0)) {
    throw std::invalid_argument("step: fixed kappa must be >= 0");
  }
}

inline double checked_linf(const GridFunction& u, double threshold) {
  double m = 0.0;
  for (double v : u.values) {
    if (!std::isfinite(v)) throw divergence_error(std::numeric_limits<double>::infinity());
    m = std::max(m, std::abs(v));
  }
  if (!(m < threshold)) throw divergence_error(m);
  return m;
}

struct Erk2Pair {
  GridFunction u_stage;
  GridFunction u_next;
};

// One pass of the two-stage scheme
//   u_stage = phi0(tau L) u + tau phi1(tau L) N(u)
//   u_next  = phi0(tau L) u + tau/2 phi1(tau L) (N(u) + N(u_stage))
// with L = L_kappa and N = N_kappa from the context. The transform of u and
// of N(u) are each taken once and shared between the two updates.
inline Erk2Pair erk2_apply(const OperatorContext& ctx, const SpectralField& u_hat,
                           const GridFunction& u_n, double tau, bool linear_only, bool dealias) {
  std::size_t size = ctx.grid.size();
  std::vector<double> prop(size), tphi1(size);
  for (std::size_t i = 0; i < size; ++i) {
    double z = tau * ctx.Lambda.values[i];
    prop[i] = phi0(z);
    tphi1[i] = tau * phi1(z);
  }

  Erk2Pair out;
  SpectralField stage_hat{ctx.grid, std::vector<std::complex<double>>(size)};
  if (linear_only) {
    for (std::size_t i = 0; i < size; ++i) stage_hat.coeffs[i] = prop[i] * u_hat.coeffs[i];
    hermitian_symmetrize(stage_hat);
    out.u_stage = inverse_dft(stage_hat);
    out.u_next = out.u_stage;  // both stage contributions vanish
    return out;
  }

  SpectralField n0_hat = nonlinear_term_spectral(ctx, u_n, dealias);
  for (std::size_t i = 0; i < size; ++i)
    stage_hat.coeffs[i] = prop[i] * u_hat.coeffs[i] + tphi1[i] * n0_hat.coeffs[i];
  hermitian_symmetrize(stage_hat);
  out.u_stage = inverse_dft(stage_hat);

  SpectralField n1_hat = nonlinear_term_spectral(ctx, out.u_stage, dealias);
  SpectralField next_hat{ctx.grid, std::vector<std::complex<double>>(size)};
  for (std::size_t i = 0; i < size; ++i)
    next_hat.coeffs[i] = prop[i] * u_hat.coeffs[i] +
                         0.5 * tphi1[i] * (n0_hat.coeffs[i] + n1_hat.coeffs[i]);
  hermitian_symmetrize(next_hat);
  out.u_next = inverse_dft(next_hat);
  return out;
}

}  // namespace detail

/// First stage only (shares its definition with step).
inline GridFunction stage1(const OperatorContext& ctx, const GridFunction& u_n, double tau,
                           bool linear_only = false, bool dealias = false) {
  if (!(tau > 0.0)) throw std::invalid_argument("stage1: tau must be > 0");
  detail::checked_linf(u_n, 1e3);
  return detail::erk2_apply(ctx, forward_dft(u_n), u_n, tau, linear_only, dealias).u_stage;
}

/// Advance one step. The context supplies the grid, epsilon and the symbol
/// tables; kappa comes from the policy (the context is rebuilt internally
/// when the working kappa differs).
///
/// Adaptive policy: kappa is predicted from |u_n|_inf, the step is taken,
/// and the requirement (3M^2-1)/2 is re-checked with M over the full triple
/// {u_n, u_stage, u_next} together with energy decrease of both stage and
/// step. On failure kappa is raised and the step redone, at most max_retries
/// times, after which kappa_exhausted is thrown. Under the fixed policy no
/// validation runs.
inline StepResult step(const OperatorContext& ctx, const GridFunction& u_n,
                       const StepperConfig& cfg) {
  detail::validate_stepper_config(cfg);
  require_same_grid(ctx.grid, u_n.grid, "step");
  const KappaPolicy& policy = cfg.kappa_policy;

  double sup0 = detail::checked_linf(u_n, cfg.divergence_linf);
  double mass0 = mass(u_n);
  double e0 = discrete_energy(ctx, u_n).energy;
  SpectralField u_hat = forward_dft(u_n);

  bool adaptive = policy.kind == KappaPolicy::Kind::adaptive;
  double kappa = adaptive ? adapt_kappa(u_n, nullptr, nullptr, policy.kappa, policy.safety)
                          : policy.kappa;

  StepResult result;
  result.energy_before = e0;
  int retries = 0;
  for (;;) {
    OperatorContext work = ctx.kappa == kappa ? ctx : with_kappa(ctx, kappa);
    detail::Erk2Pair pair =
        detail::erk2_apply(work, u_hat, u_n, cfg.tau, cfg.linear_only, cfg.dealias);
    double sup_stage = detail::checked_linf(pair.u_stage, cfg.divergence_linf);
    double sup_next = detail::checked_linf(pair.u_next, cfg.divergence_linf);
    double e_next = discrete_energy(work, pair.u_next).energy;

    if (adaptive) {
      double m = std::max({sup0, sup_stage, sup_next});
      double required = std::max(0.0, 0.5 * (3.0 * m * m - 1.0));
      double e_stage = discrete_energy(work, pair.u_stage).energy;
      double slack = 1e-10 * (1.0 + std::abs(e0));
      bool ok = kappa >= required && e_stage <= e0 + slack && e_next <= e0 + slack;
      if (!ok) {
        if (retries >= policy.max_retries)
          throw kappa_exhausted_error(kappa, e0, e_next, retries);
        ++retries;
        kappa = std::max({policy.kappa, policy.safety * required, policy.safety * kappa});
        continue;
      }
    }

    result.u_next = std::move(pair.u_next);
    result.u_stage = std::move(pair.u_stage);
    result.kappa_used = kappa;
    result.energy_after = e_next;
    break;
  }
  result.retries = retries;
  result.mass_drift = std::abs(mass(result.u_next) - mass0);
  return result;
}

/// l2 residuals of the two equivalent recast forms
///   u_stage - u_n + tau phi1(tau L) L u_n - tau phi1(tau L) N(u_n)
///   u_next  - u_n + tau phi1(tau L) L u_n - tau/2 phi1(tau L) (N(u_n) + N(u_stage))
/// computed through the public operator path, independently of the fused
/// loops inside step. The context must carry the kappa the step used.
inline std::pair<double, double> equivalent_form_residual(const OperatorContext& ctx,
                                                          const GridFunction& u_n,
                                                          const GridFunction& u_stage,
                                                          const GridFunction& u_next, double tau,
                                                          bool dealias = false) {
  GridFunction phi1_l_u = apply_phi(ctx, 1, tau, apply_stabilized(ctx, u_n));
  GridFunction pn0 = apply_phi(ctx, 1, tau, nonlinear_term(ctx, u_n, dealias));
  GridFunction pn1 = apply_phi(ctx, 1, tau, nonlinear_term(ctx, u_stage, dealias));

  GridFunction r1 = make_grid_function(ctx.grid);
  GridFunction r2 = make_grid_function(ctx.grid);
  for (std::size_t i = 0; i < r1.values.size(); ++i) {
    double common = -u_n.values[i] + tau * phi1_l_u.values[i];
    r1.values[i] = u_stage.values[i] + common - tau * pn0.values[i];
    r2.values[i] = u_next.values[i] + common - 0.5 * tau * (pn0.values[i] + pn1.values[i]);
  }
  return {norm_l2(r1), norm_l2(r2)};
}

}  // namespace chfs
