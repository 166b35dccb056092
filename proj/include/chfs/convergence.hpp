#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dft.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "simulation.hpp"

namespace chfs {

struct ConvergenceLevel {
  double resolution = 0.0;  // tau for temporal studies, N for spatial
  double error_l2 = 0.0;
  double error_linf = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  std::vector<double> observed_orders;  // between successive levels
  double reference_resolution = 0.0;
  bool exact_regime = false;  // all errors at reference precision
  bool smooth = true;         // spatial ratio test applies only when set
};

/// Zero-padding interpolation onto a finer grid of the same box. The coarse
/// Nyquist coefficient is self-conjugate; it splits evenly onto the +-Nc/2
/// pair of the fine spectrum, which reproduces cos(Nc/2 mu x) exactly.
inline GridFunction spectral_interpolate(const GridFunction& coarse, int n_fine) {
  const Grid& gc = coarse.grid;
  if (n_fine < gc.n) throw std::invalid_argument("spectral_interpolate: target grid is coarser");
  if (n_fine == gc.n) return coarse;
  Grid gf = make_grid(gc.dim, n_fine, gc.length);
  SpectralField c_hat = forward_dft(coarse);
  SpectralField f_hat = make_spectral_field(gf);

  int half = gc.n / 2;
  for (std::size_t idx = 0; idx < c_hat.coeffs.size(); ++idx) {
    std::array<int, 3> bins = gc.unravel(idx);
    // per-axis targets on the fine grid: (bin, weight), two at Nyquist
    int tbin[3][2];
    double tw[3][2];
    int tcount[3];
    for (int a = 0; a < gc.dim; ++a) {
      int j = bins[a];
      if (j == half) {
        tbin[a][0] = half;
        tbin[a][1] = n_fine - half;
        tw[a][0] = tw[a][1] = 0.5;
        tcount[a] = 2;
      } else {
        int k = gc.wavenumber(j);
        tbin[a][0] = k >= 0 ? k : n_fine + k;
        tw[a][0] = 1.0;
        tcount[a] = 1;
      }
    }
    int combos = 1;
    for (int a = 0; a < gc.dim; ++a) combos *= tcount[a];
    for (int m = 0; m < combos; ++m) {
      int rem = m;
      std::array<int, 3> fine_bins = {0, 0, 0};
      double w = 1.0;
      for (int a = 0; a < gc.dim; ++a) {
        int pick = rem % tcount[a];
        rem /= tcount[a];
        fine_bins[a] = tbin[a][pick];
        w *= tw[a][pick];
      }
      f_hat.coeffs[gf.ravel(fine_bins)] += w * c_hat.coeffs[idx];
    }
  }
  hermitian_symmetrize(f_hat);
  return inverse_dft(f_hat);
}

namespace detail {

inline bool divides_final_time(double tau, double t_final) {
  double steps = t_final / tau;
  return std::abs(steps - std::round(steps)) <= 1e-9 * std::max(1.0, steps) &&
         std::round(steps) >= 0.5;
}

inline SimConfig level_config(const SimConfig& base, double tau, int n) {
  SimConfig cfg = base;
  cfg.tau = tau;
  cfg.n = n;
  cfg.diag_every = static_cast<int>(std::min<long>(step_count(cfg), 1000000L));
  cfg.snapshot_every = 0;
  return cfg;
}

inline void error_pair(const GridFunction& a, const GridFunction& b, double& e2, double& einf) {
  GridFunction d = a;
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
  e2 = norm_l2(d);
  einf = norm_linf(d);
}

}  // namespace detail

/// Self-convergence in time: each tau in the (strictly descending) list is
/// run to t_final on the base grid and compared in l2 against a reference
/// run at tau_ref = min(tau)/8. Error levels at reference precision switch
/// the report to the exact regime, where observed orders are meaningless and
/// omitted.
inline ConvergenceReport temporal_convergence(const SimConfig& base,
                                              const std::vector<double>& tau_list,
                                              bool linear_only = false) {
  if (tau_list.empty()) throw std::invalid_argument("temporal_convergence: empty tau list");
  for (std::size_t i = 0; i < tau_list.size(); ++i) {
    if (!(tau_list[i] > 0.0)) throw std::invalid_argument("temporal_convergence: tau must be > 0");
    if (i > 0 && !(tau_list[i] < tau_list[i - 1]))
      throw std::invalid_argument("temporal_convergence: tau list must be strictly descending");
    if (!detail::divides_final_time(tau_list[i], base.t_final))
      throw std::invalid_argument("temporal_convergence: tau does not divide t_final");
  }
  double tau_ref = tau_list.back() / 8.0;

  RunOptions opts;
  opts.linear_only = linear_only;
  RunResult ref = run_simulation(detail::level_config(base, tau_ref, base.n), opts);
  if (ref.trace.aborted)
    throw simulation_aborted_error("temporal_convergence: reference run aborted: " +
                                   ref.trace.abort_reason);

  ConvergenceReport report;
  report.reference_resolution = tau_ref;
  for (double tau : tau_list) {
    RunResult lvl = run_simulation(detail::level_config(base, tau, base.n), opts);
    if (lvl.trace.aborted)
      throw simulation_aborted_error("temporal_convergence: level run aborted: " +
                                     lvl.trace.abort_reason);
    ConvergenceLevel level;
    level.resolution = tau;
    detail::error_pair(lvl.final_state, ref.final_state, level.error_l2, level.error_linf);
    report.levels.push_back(level);
  }

  double max_err = 0.0;
  for (const ConvergenceLevel& l : report.levels) max_err = std::max(max_err, l.error_l2);
  report.exact_regime = max_err <= 1e-12;
  if (!report.exact_regime) {
    for (std::size_t i = 0; i + 1 < report.levels.size(); ++i) {
      double e0 = report.levels[i].error_l2, e1 = report.levels[i + 1].error_l2;
      double r0 = report.levels[i].resolution, r1 = report.levels[i + 1].resolution;
      report.observed_orders.push_back(std::log(e0 / e1) / std::log(r0 / r1));
    }
  }
  return report;
}

/// Self-convergence in space: each N in the (strictly ascending,
/// power-of-two) list except the last is run with the base tau and compared
/// against the finest-N run after zero-padding interpolation. The smooth
/// flag is cleared for random initial data, whose realizations differ per
/// grid and void the ratio test.
inline ConvergenceReport spatial_convergence(const SimConfig& base, const std::vector<int>& n_list) {
  if (n_list.size() < 2)
    throw std::invalid_argument("spatial_convergence: need at least two grid sizes");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    int n = n_list[i];
    if (n < 4 || (n & (n - 1)) != 0)
      throw std::invalid_argument("spatial_convergence: N values must be powers of two >= 4");
    if (i > 0 && n <= n_list[i - 1])
      throw std::invalid_argument("spatial_convergence: N list must be strictly ascending");
  }
  if (!detail::divides_final_time(base.tau, base.t_final))
    throw std::invalid_argument("spatial_convergence: tau does not divide t_final");

  int n_ref = n_list.back();
  RunResult ref = run_simulation(detail::level_config(base, base.tau, n_ref));
  if (ref.trace.aborted)
    throw simulation_aborted_error("spatial_convergence: reference run aborted: " +
                                   ref.trace.abort_reason);

  ConvergenceReport report;
  report.reference_resolution = n_ref;
  report.smooth = base.ic.kind != InitialCondition::Kind::spinodal;
  for (std::size_t i = 0; i + 1 < n_list.size(); ++i) {
    RunResult lvl = run_simulation(detail::level_config(base, base.tau, n_list[i]));
    if (lvl.trace.aborted)
      throw simulation_aborted_error("spatial_convergence: level run aborted: " +
                                     lvl.trace.abort_reason);
    ConvergenceLevel level;
    level.resolution = n_list[i];
    detail::error_pair(spectral_interpolate(lvl.final_state, n_ref), ref.final_state,
                       level.error_l2, level.error_linf);
    report.levels.push_back(level);
  }

  for (std::size_t i = 0; i + 1 < report.levels.size(); ++i) {
    double e0 = report.levels[i].error_l2, e1 = report.levels[i + 1].error_l2;
    double r0 = report.levels[i].resolution, r1 = report.levels[i + 1].resolution;
    if (e0 > 0.0 && e1 > 0.0)
      report.observed_orders.push_back(std::log(e0 / e1) / std::log(r1 / r0));
  }
  return report;
}

/// Spectral-accuracy acceptance test: every doubling must cut the error to
/// one tenth or land below the rounding floor.
inline bool spatial_ratio_ok(const ConvergenceReport& report, double ratio = 0.1,
                             double floor = 1e-11) {
  for (std::size_t i = 0; i + 1 < report.levels.size(); ++i) {
    double e0 = report.levels[i].error_l2, e1 = report.levels[i + 1].error_l2;
    if (e1 > floor && e1 > ratio * e0) return false;
  }
  return true;
}

}  // namespace chfs
