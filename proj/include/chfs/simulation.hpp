#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "initial_conditions.hpp"
#include "operators.hpp"
#include "stepper.hpp"

namespace chfs {

struct DiagnosticsRecord {
  long step = 0;
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double h1_seminorm = 0.0;  // |grad u|_2
  double h2_seminorm = 0.0;  // |lap u|_2
  double linf = 0.0;
  double kappa = 0.0;
  int retries = 0;
};

struct Trace {
  std::vector<DiagnosticsRecord> records;
  std::string config_fingerprint;
  bool aborted = false;
  std::string abort_reason;
};

struct RunOptions {
  bool linear_only = false;  // test hook, forwarded to the stepper
  // Called for the initial state and every snapshot_every-th step.
  std::function<void(long step, const GridFunction&)> on_snapshot;
};

struct RunResult {
  Trace trace;
  GridFunction final_state;
};

namespace detail {

inline DiagnosticsRecord diagnose(const GridFunction& u, long step, double t, double energy,
                                  double kappa, int retries) {
  DiagnosticsRecord rec;
  rec.step = step;
  rec.t = t;
  rec.mass = mass(u);
  rec.energy = energy;
  SpectralField u_hat = forward_dft(u);
  rec.h1_seminorm = std::sqrt(spectral_seminorm_sq(u_hat, 1));
  rec.h2_seminorm = std::sqrt(spectral_seminorm_sq(u_hat, 2));
  rec.linf = norm_linf(u);
  rec.kappa = kappa;
  rec.retries = retries;
  return rec;
}

}  // namespace detail

/// Advance the configured problem from t=0 to t_final, recording diagnostics
/// at step 0, every diag_every-th step, and the final step. Divergence and
/// stabilization exhaustion abort cleanly: the partial trace is returned
/// with `aborted` set and the reason recorded.
inline RunResult run_simulation(const SimConfig& cfg, const RunOptions& opts = {}) {
  Grid grid = make_grid(cfg.dim, cfg.n, cfg.length);
  OperatorContext ctx = make_operator_context(grid, cfg.epsilon, cfg.kappa);
  GridFunction u = make_initial_condition(grid, cfg.ic, cfg.zero_mean, cfg.seed);

  StepperConfig scfg;
  scfg.tau = cfg.tau;
  scfg.kappa_policy = cfg.kappa_fixed ? fixed_kappa(cfg.kappa) : adaptive_kappa(cfg.kappa, cfg.safety);
  scfg.linear_only = opts.linear_only;
  scfg.dealias = cfg.dealias;

  long n_steps = step_count(cfg);
  RunResult out;
  out.trace.config_fingerprint = config_fingerprint(cfg);

  double kappa0 = cfg.kappa_fixed ? cfg.kappa : adapt_kappa(u, nullptr, nullptr, cfg.kappa, cfg.safety);
  out.trace.records.push_back(
      detail::diagnose(u, 0, 0.0, discrete_energy(ctx, u).energy, kappa0, 0));
  if (opts.on_snapshot && cfg.snapshot_every > 0) opts.on_snapshot(0, u);

  for (long n = 1; n <= n_steps; ++n) {
    StepResult r;
    try {
      r = step(ctx, u, scfg);
    } catch (const divergence_error& e) {
      out.trace.aborted = true;
      out.trace.abort_reason = e.what();
      break;
    } catch (const kappa_exhausted_error& e) {
      out.trace.aborted = true;
      out.trace.abort_reason = e.what();
      break;
    }
    u = std::move(r.u_next);
    if (n % cfg.diag_every == 0 || n == n_steps)
      out.trace.records.push_back(detail::diagnose(u, n, n * cfg.tau, r.energy_after,
                                                   r.kappa_used, r.retries));
    if (opts.on_snapshot && cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0)
      opts.on_snapshot(n, u);
  }
  out.final_state = std::move(u);
  return out;
}

}  // namespace chfs
