#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "audit.hpp"
#include "config.hpp"
#include "convergence.hpp"
#include "csv.hpp"
#include "dft.hpp"
#include "energy.hpp"
#include "grid.hpp"
#include "initial_conditions.hpp"
#include "operators.hpp"
#include "phi.hpp"
#include "simulation.hpp"
#include "snapshot.hpp"
#include "stepper.hpp"
#include "testing.hpp"

namespace chfs::selftest {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 20260816;
  int z_samples = 10000;      // scalar sweep density for the phi/S checks
  int field_tau_pairs = 100;  // (f, tau) pairs per grid for operator estimates
  int random_fields = 200;    // Sobolev bound sweep size
  int oracle_fields = 50;     // fields per small grid for DFT oracle equivalence
};

namespace detail {

inline std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

inline void add(std::vector<CheckResult>& out, const std::string& name, bool pass,
                const std::string& detail = "") {
  out.push_back(CheckResult{name, pass, detail});
}

template <class Fn>
inline bool throws(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception&) {
    return true;
  }
  return false;
}

// 0 followed by a log-spaced ladder up to 1e6
inline std::vector<double> z_sweep(int count) {
  std::vector<double> z;
  z.push_back(0.0);
  int rest = std::max(count - 1, 2);
  for (int i = 0; i < rest; ++i) {
    double t = static_cast<double>(i) / (rest - 1);
    z.push_back(std::pow(10.0, -10.0 + 16.0 * t));
  }
  return z;
}

inline std::vector<Grid> small_grids() {
  return {make_grid(1, 16, 2.0 * 3.14159265358979323846), make_grid(2, 12, 5.0),
          make_grid(3, 8, 2.0 * 3.14159265358979323846)};
}

// |Omega| sum w_i |F_i|^2 with per-mode weights
inline double weighted_spectrum_sum(const SpectralField& F, const std::vector<double>& w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) acc += w[i] * std::norm(F.coeffs[i]);
  return F.grid.volume() * acc;
}

inline long double phi0_ref(long double z) { return std::exp(-z); }
inline long double phi1_ref(long double z) { return z == 0.0L ? 1.0L : -std::expm1(-z) / z; }
inline long double phi1_recip_ref(long double z) {
  return z == 0.0L ? 1.0L : z / -std::expm1(-z);
}
inline long double s1_ref(long double z) {
  if (z == 0.0L) return 1.0L;
  long double d = std::expm1(z);
  return std::isinf(static_cast<double>(d)) ? 0.0L : z / d;
}
inline long double s2_ref(long double z) { return z + 2.0L * s1_ref(z); }

inline double rel_err(double value, long double ref) {
  long double scale = std::max<long double>(std::abs(ref), 1e-300L);
  return static_cast<double>(std::abs(value - ref) / scale);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// spectral grid: transform round trip, Parseval, linearity, slow-oracle match
// ---------------------------------------------------------------------------
inline std::vector<CheckResult> grid_suite(const Options& opts = {}) {
  using namespace detail;
  std::vector<CheckResult> out;

  double worst_rt = 0.0, worst_par = 0.0, worst_lin = 0.0;
  for (const Grid& g : small_grids()) {
    for (int rep = 0; rep < 5; ++rep) {
      std::uint64_t s = opts.seed + 100 * g.dim + rep;
      GridFunction f = testing::random_field(g, s);
      GridFunction h = testing::random_field(g, s + 50);

      GridFunction back = inverse_dft(forward_dft(f));
      double diff = 0.0;
      for (std::size_t i = 0; i < f.values.size(); ++i)
        diff = std::max(diff, std::abs(back.values[i] - f.values[i]));
      worst_rt = std::max(worst_rt, diff / (1.0 + norm_linf(f)));

      SpectralField F = forward_dft(f);
      double sum = 0.0;
      for (const std::complex<double>& c : F.coeffs) sum += std::norm(c);
      double l2sq = norm_l2(f) * norm_l2(f);
      worst_par = std::max(worst_par, std::abs(l2sq - g.volume() * sum) / l2sq);

      double alpha = 1.375, beta = -0.625;
      GridFunction comb = make_grid_function(g);
      for (std::size_t i = 0; i < comb.values.size(); ++i)
        comb.values[i] = alpha * f.values[i] + beta * h.values[i];
      SpectralField C = forward_dft(comb);
      SpectralField H = forward_dft(h);
      double lin = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < C.coeffs.size(); ++i) {
        lin = std::max(lin, std::abs(C.coeffs[i] - alpha * F.coeffs[i] - beta * H.coeffs[i]));
        scale = std::max(scale, std::abs(C.coeffs[i]));
      }
      worst_lin = std::max(worst_lin, lin / (1.0 + scale));
    }
  }
  add(out, "grid/round_trip", worst_rt <= 1e-13, fmt("max scaled error %.3e", worst_rt));
  add(out, "grid/parseval", worst_par <= 1e-12, fmt("max relative gap %.3e", worst_par));
  add(out, "grid/linearity", worst_lin <= 1e-13, fmt("max scaled error %.3e", worst_lin));

  double worst_oracle = 0.0;
  long fields = 0;
  for (int dim = 1; dim <= 3; ++dim) {
    for (int n : {4, 6, 8}) {
      Grid g = make_grid(dim, n, 2.0 * 3.14159265358979323846);
      for (int rep = 0; rep < opts.oracle_fields; ++rep) {
        GridFunction f = testing::random_field(g, opts.seed + 1000 * dim + 10 * n + rep);
        SpectralField fast = forward_dft(f);
        SpectralField slow = testing::naive_dft_oracle(f);
        for (std::size_t i = 0; i < fast.coeffs.size(); ++i)
          worst_oracle = std::max(worst_oracle, std::abs(fast.coeffs[i] - slow.coeffs[i]));
        ++fields;
      }
    }
  }
  add(out, "grid/dft_oracle", worst_oracle <= 1e-12,
      fmt("max |fast - slow| %.3e over %ld fields, all grids with N <= 8", worst_oracle, fields));
  return out;
}

// ---------------------------------------------------------------------------
// phi and S functions: accuracy, limits, bounds, identities
// ---------------------------------------------------------------------------
inline std::vector<CheckResult> phi_suite(const Options& opts = {}) {
  using namespace detail;
  std::vector<CheckResult> out;
  std::vector<double> zs = z_sweep(opts.z_samples);

  double worst = 0.0;
  for (double z : zs) {
    worst = std::max(worst, rel_err(phi0(z), phi0_ref(z)));
    worst = std::max(worst, rel_err(phi1(z), phi1_ref(z)));
    worst = std::max(worst, rel_err(phi1_recip(z), phi1_recip_ref(z)));
    worst = std::max(worst, rel_err(s1(z), s1_ref(z)));
    worst = std::max(worst, rel_err(s2(z), s2_ref(z)));
  }
  add(out, "phi/accuracy", worst <= 1e-14,
      fmt("max relative error %.3e over %zu samples in [0, 1e6]", worst, zs.size()));

  bool limits = phi0(0.0) == 1.0 && phi1(0.0) == 1.0 && phi1_recip(0.0) == 1.0 &&
                s1(0.0) == 1.0 && s2(0.0) == 2.0;
  add(out, "phi/limits_at_zero", limits, "phi0=phi1=1/phi1=S1=1, S2=2 at z=0");
  add(out, "phi/golden_phi1_at_1", std::abs(phi1(1.0) - 0.6321205588285577) <= 1e-15,
      fmt("phi1(1) = %.16f", phi1(1.0)));

  long bound_bad = 0, mono_bad = 0, est_bad = 0, ident_bad = 0, sign_bad = 0;
  double prev0 = 2.0, prev1 = 2.0;
  for (double z : zs) {
    double p0 = phi0(z), p1 = phi1(z), pr = phi1_recip(z), v1 = s1(z), v2 = s2(z);
    if (!(p0 >= 0.0 && p0 <= 1.0 && p1 > 0.0 && p1 <= 1.0)) ++bound_bad;
    if (!(v1 >= 0.0 && v1 <= 1.0 && v2 >= 2.0 * (1.0 - 1e-15))) ++bound_bad;
    if (p0 > prev0 || p1 > prev1) ++mono_bad;
    prev0 = p0;
    prev1 = p1;
    if (!(pr >= 1.0 && pr <= (1.0 + z) * (1.0 + 1e-15))) ++est_bad;
    if (v2 != z + 2.0 * v1) ++ident_bad;
    if (std::abs(p1 * pr - 1.0) > 1e-14) ++ident_bad;
    if (!(v2 - 0.5 * v1 >= 0.0)) ++sign_bad;
  }
  add(out, "phi/bounds", bound_bad == 0,
      fmt("0<phi0<=1, 0<phi1<=1, 0<=S1<=1, S2>=2: %ld violations", bound_bad));
  add(out, "phi/monotone_decay", mono_bad == 0, fmt("%ld violations", mono_bad));
  add(out, "phi/reciprocal_estimate", est_bad == 0,
      fmt("1 <= 1/phi1 <= 1+z on z>=0: %ld violations", est_bad));
  add(out, "phi/identities", ident_bad == 0,
      fmt("S2 = z+2 S1 and phi1*(1/phi1) = 1: %ld violations", ident_bad));
  add(out, "phi/s2_s1_sign", sign_bad == 0, fmt("S2 - S1/2 >= 0: %ld violations", sign_bad));

  long ext_bad = 0;
  for (int i = 0; i <= 10000; ++i) {
    double z = -50.0 + 100.0 * i / 10000.0;
    if (!(phi1_recip(z) >= z)) ++ext_bad;
  }
  add(out, "phi/reciprocal_dominates_z", ext_bad == 0,
      fmt("1/phi1(z) >= z on [-50, 50]: %ld violations", ext_bad));

  bool rejects = throws([] { return phi0(-1.0); }) && throws([] { return phi1(-0.5); }) &&
                 throws([] { return s1(-1e-9); }) && throws([] { return s2(-2.0); });
  add(out, "phi/negative_rejected", rejects, "phi and S functions reject z < 0");
  return out;
}

// ---------------------------------------------------------------------------
// operator calculus: eigenfunctions, identities, estimates, splits
// ---------------------------------------------------------------------------
inline std::vector<CheckResult> operator_suite(const Options& opts = {}) {
  using namespace detail;
  std::vector<CheckResult> out;
  const double pi = 3.14159265358979323846;

  {
    Grid g3 = make_grid(3, 8, 2.0 * pi);
    OperatorContext ctx = make_operator_context(g3, 1.0, 0.0);
    GridFunction f = make_grid_function(g3);
    for (std::size_t i = 0; i < f.values.size(); ++i)
      f.values[i] = std::cos(g3.mu * (g3.unravel(i)[0] * g3.h));
    GridFunction lap = laplacian(ctx, f);
    double diff = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      diff = std::max(diff, std::abs(lap.values[i] + f.values[i]));
    add(out, "ops/cos_eigenfunction", diff <= 1e-13,
        fmt("|lap cos(x) + cos(x)|_inf = %.3e on the 2pi cube", diff));
  }
  {
    Grid g1 = make_grid(1, 16, 5.0);
    OperatorContext ctx = make_operator_context(g1, 1.0, 0.0);
    GridFunction f = make_grid_function(g1);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::sin(g1.mu * (i * g1.h));
    GridFunction lap = laplacian(ctx, f);
    double diff = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      diff = std::max(diff, std::abs(lap.values[i] + g1.mu * g1.mu * f.values[i]));
    add(out, "ops/sin_eigenfunction", diff <= 1e-12,
        fmt("|lap sin + mu^2 sin|_inf = %.3e, L = 5", diff));
  }

  double const_diff = 0.0, divgrad_worst = 0.0;
  for (const Grid& g : small_grids()) {
    OperatorContext ctx = make_operator_context(g, 0.7, 0.3);
    GridFunction c = make_grid_function(g, 2.5);
    GridFunction lc = laplacian(ctx, c);
    const_diff = std::max(const_diff, norm_linf(lc) / 2.5);
    for (int a = 0; a < g.dim; ++a)
      const_diff = std::max(const_diff, norm_linf(gradient_component(c, a)) / 2.5);

    GridFunction f = testing::random_smooth_field(g, opts.seed + g.dim);
    GridFunction dg = divergence(ctx, gradient(ctx, f));
    GridFunction lf = laplacian(ctx, f);
    double diff = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      diff = std::max(diff, std::abs(dg.values[i] - lf.values[i]));
    divgrad_worst = std::max(divgrad_worst, diff / (1e-30 + norm_linf(lf)));
  }
  add(out, "ops/derivatives_kill_constants", const_diff <= 1e-13,
      fmt("max |grad c|, |lap c| = %.3e (scaled)", const_diff));
  add(out, "ops/div_grad_is_laplacian", divgrad_worst <= 1e-11,
      fmt("max relative mismatch %.3e on band-limited fields", divgrad_worst));

  {
    Grid g1 = make_grid(1, 16, 2.0 * pi);
    OperatorContext ctx = make_operator_context(g1, 1.0, 0.0);
    GridFunction f = make_grid_function(g1);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::cos(i * g1.h);
    GridFunction inv = inv_laplacian(ctx, f);
    double diff = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      diff = std::max(diff, std::abs(inv.values[i] - f.values[i]));
    bool eigen_ok = diff <= 1e-13;

    GridFunction r = testing::random_field(g1, opts.seed + 11);
    testing::subtract_mean(r);
    GridFunction round = laplacian(ctx, inv_laplacian(ctx, r));
    double rt = 0.0;
    for (std::size_t i = 0; i < r.values.size(); ++i)
      rt = std::max(rt, std::abs(round.values[i] + r.values[i]));
    bool round_ok = rt <= 1e-10 * (1.0 + norm_linf(r));
    bool rejects = throws([&] { return inv_laplacian(ctx, make_grid_function(g1, 1.0)); });
    add(out, "ops/inv_laplacian", eigen_ok && round_ok && rejects,
        fmt("cos eigenpair %.3e, round trip %.3e, mean-zero precondition enforced", diff, rt));
  }

  {
    Grid g1 = make_grid(1, 16, 2.0 * pi);
    OperatorContext ctx = make_operator_context(g1, 1.0, 0.0);
    GridFunction u = make_grid_function(g1);
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] = std::cos(i * g1.h);
    GridFunction n = nonlinear_term(ctx, u);
    double diff = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      double x = i * g1.h;
      diff = std::max(diff,
                      std::abs(n.values[i] - (0.25 * std::cos(x) - 2.25 * std::cos(3.0 * x))));
    }
    GridFunction c = make_grid_function(g1, 0.6);
    double cdiff = norm_linf(nonlinear_term(ctx, c));
    double worst_mass = 0.0;
    for (const Grid& g : small_grids()) {
      OperatorContext cx = make_operator_context(g, 0.5, 1.0);
      GridFunction f = testing::random_field(g, opts.seed + 7 * g.dim, 0.8);
      worst_mass = std::max(worst_mass, std::abs(mass(nonlinear_term(cx, f))));
    }
    add(out, "ops/nonlinear_term", diff <= 1e-12 && cdiff <= 1e-13 && worst_mass <= 1e-12,
        fmt("cubic-mode identity %.3e, constant %.3e, max |mass| %.3e", diff, cdiff, worst_mass));
  }

  {
    Grid g1 = make_grid(1, 16, 2.0 * pi);
    OperatorContext ctx = make_operator_context(g1, 1.0, 0.0);
    GridFunction f = make_grid_function(g1);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::cos(i * g1.h);
    GridFunction d = apply_phi(ctx, 0, 1.0, f);
    double diff = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      diff = std::max(diff, std::abs(d.values[i] - std::exp(-1.0) * f.values[i]));
    GridFunction c = make_grid_function(g1, 3.0);
    GridFunction pc = apply_phi(ctx, 1, 0.8, c);
    double cdiff = 0.0;
    for (std::size_t i = 0; i < c.values.size(); ++i)
      cdiff = std::max(cdiff, std::abs(pc.values[i] - 3.0));
    SymbolMultiplier p1 = phi_symbol(ctx, 1, 0.37);
    bool in_range = true;
    for (double v : p1.values) in_range = in_range && v >= 0.0 && v <= 1.0;
    add(out, "ops/apply_phi", diff <= 1e-13 && cdiff <= 1e-13 && in_range,
        fmt("mode decay %.3e, constant preserved %.3e, phi1 multipliers in [0,1]", diff, cdiff));
  }

  // quadratic-form identities for the G operators, both sides independent
  double worst_ident = 0.0;
  for (const Grid& g : small_grids()) {
    OperatorContext ctx = make_operator_context(g, 0.6, 0.8);
    double tau = 0.4;
    GridFunction f = testing::random_field(g, opts.seed + 31 * g.dim);
    GridFunction phil = apply_phi(ctx, 1, tau, apply_stabilized(ctx, f));
    GridFunction lf = laplacian(ctx, f);
    GridFunction llf = laplacian(ctx, lf);
    GridFunction stab = apply_stabilized(ctx, f);

    double lhs1 = -inner_product(phil, lf);
    double g1n = norm_l2(g_operator(ctx, GOperatorKind::g1, tau, f));
    worst_ident = std::max(worst_ident, std::abs(lhs1 - g1n * g1n) / (1.0 + std::abs(lhs1)));

    double lhs2 = inner_product(phil, llf);
    double g2n = norm_l2(g_operator(ctx, GOperatorKind::g2, tau, f));
    worst_ident = std::max(worst_ident, std::abs(lhs2 - g2n * g2n) / (1.0 + std::abs(lhs2)));

    double lhs3 = inner_product(stab, llf);
    double g3n = norm_l2(g_operator(ctx, GOperatorKind::g2_tilde, tau, f));
    worst_ident = std::max(worst_ident, std::abs(lhs3 - g3n * g3n) / (1.0 + std::abs(lhs3)));

    GridFunction c = make_grid_function(g, 1.3);
    worst_ident = std::max(worst_ident, norm_linf(g_operator(ctx, GOperatorKind::g1, tau, c)));
    GridFunction ph = g_operator(ctx, GOperatorKind::phi_inv_half, tau, c);
    double keep = 0.0;
    for (double v : ph.values) keep = std::max(keep, std::abs(v - 1.3));
    worst_ident = std::max(worst_ident, keep);
  }
  add(out, "ops/g_operator_identities", worst_ident <= 1e-11,
      fmt("max scaled mismatch %.3e", worst_ident));

  // diffusion estimates, splits, sandwich, Poincare: per-mode spectral sums
  long est_bad = 0, split4_bad = 0, poincare_bad = 0;
  double worst_split = 0.0;
  long pairs = 0;
  for (const Grid& g : small_grids()) {
    double eps = g.dim == 2 ? 0.3 : 1.0;
    std::vector<double> kappas = {0.0, 1.0, 5.0};
    OperatorContext base = make_operator_context(g, eps, 0.0);
    std::size_t size = g.size();
    for (int rep = 0; rep < opts.field_tau_pairs; ++rep) {
      std::uint64_t s = opts.seed + 977 * g.dim + rep;
      double kappa = kappas[rep % kappas.size()];
      OperatorContext ctx = kappa == 0.0 ? base : with_kappa(base, kappa);
      double tau = std::pow(10.0, -3.0 + 4.0 * unit_real(counter_hash(s, 1 << 20)));
      GridFunction f = testing::random_field(g, s);
      SpectralField F = forward_dft(f);

      SymbolMultiplier g1s = g_operator_symbol(ctx, GOperatorKind::g1, tau);
      SymbolMultiplier g2s = g_operator_symbol(ctx, GOperatorKind::g2, tau);
      SymbolMultiplier g3s = g_operator_symbol(ctx, GOperatorKind::g2_tilde, tau);
      SymbolMultiplier pih = g_operator_symbol(ctx, GOperatorKind::phi_inv_half, tau);
      SymbolMultiplier ph = g_operator_symbol(ctx, GOperatorKind::phi_half, tau);

      std::vector<double> w(size);
      auto sum_with = [&](auto&& weight) {
        for (std::size_t i = 0; i < size; ++i) w[i] = weight(i);
        return weighted_spectrum_sum(F, w);
      };
      auto lam = [&](std::size_t i) { return ctx.lambda.values[i]; };

      double grad_sq = sum_with([&](std::size_t i) { return lam(i); });
      double lap_sq = sum_with([&](std::size_t i) { return lam(i) * lam(i); });
      double lap3 = sum_with([&](std::size_t i) { return lam(i) * lam(i) * lam(i); });
      double lap4 = sum_with([&](std::size_t i) { return lam(i) * lam(i) * lam(i) * lam(i); });
      double g1_sq = sum_with([&](std::size_t i) { return g1s.values[i] * g1s.values[i]; });
      double g2_sq = sum_with([&](std::size_t i) { return g2s.values[i] * g2s.values[i]; });
      double g3_sq = sum_with([&](std::size_t i) { return g3s.values[i] * g3s.values[i]; });
      double pinv_lap =
          sum_with([&](std::size_t i) { return pih.values[i] * pih.values[i] * lam(i) * lam(i); });
      double phi1_lap3 =
          sum_with([&](std::size_t i) { return ph.values[i] * ph.values[i] * lam(i) * lam(i) * lam(i); });
      double phi1_lap2 =
          sum_with([&](std::size_t i) { return ph.values[i] * ph.values[i] * lam(i) * lam(i); });
      double phi1_lap4 = sum_with([&](std::size_t i) {
        return ph.values[i] * ph.values[i] * lam(i) * lam(i) * lam(i) * lam(i);
      });

      double slack = 1e-12;
      if (tau * g1_sq > grad_sq * (1.0 + slack)) ++est_bad;
      if (tau * g2_sq > lap_sq * (1.0 + slack)) ++est_bad;
      if (tau * g3_sq > pinv_lap * (1.0 + slack)) ++est_bad;

      double e2 = eps * eps, k = ctx.kappa;
      worst_split = std::max(
          worst_split, std::abs(g1_sq - (e2 * phi1_lap3 + k * phi1_lap2)) / (1e-300 + g1_sq));
      worst_split = std::max(
          worst_split, std::abs(g2_sq - (e2 * phi1_lap4 + k * phi1_lap3)) / (1e-300 + g2_sq));
      worst_split =
          std::max(worst_split, std::abs(g3_sq - (e2 * lap4 + k * lap3)) / (1e-300 + g3_sq));

      if (lap_sq > pinv_lap * (1.0 + slack)) ++split4_bad;
      if (pinv_lap > (lap_sq + tau * (e2 * lap4 + k * lap3)) * (1.0 + slack)) ++split4_bad;

      SpectralField Z = F;
      Z.coeffs[0] = 0.0;
      double gz = spectral_seminorm_sq(Z, 1), lz = spectral_seminorm_sq(Z, 2);
      if (gz > lz / (g.mu * g.mu) * (1.0 + slack)) ++poincare_bad;
      ++pairs;
    }
  }
  add(out, "ops/diffusion_estimates", est_bad == 0,
      fmt("|grad f|^2 >= tau |G1 f|^2 and the two Laplacian analogues: %ld violations over %ld "
          "(f, tau) pairs",
          est_bad, pairs));
  add(out, "ops/diffusion_splits", worst_split <= 1e-10,
      fmt("G-norm epsilon/kappa decompositions: max relative gap %.3e", worst_split));
  add(out, "ops/phi_sandwich", split4_bad == 0,
      fmt("|lap f|^2 <= |phi1^-1/2 lap f|^2 <= |lap f|^2 + tau(...): %ld violations", split4_bad));
  add(out, "ops/poincare", poincare_bad == 0,
      fmt("|grad f|_2 <= mu^-1 |lap f|_2 on mean-zero fields: %ld violations", poincare_bad));

  double worst_comm = 0.0;
  for (const Grid& g : small_grids()) {
    OperatorContext ctx = make_operator_context(g, 0.6, 0.8);
    GridFunction f = testing::random_field(g, opts.seed + 41 * g.dim);
    SymbolMultiplier a = ctx.lambda;
    SymbolMultiplier b = ctx.Lambda;
    SymbolMultiplier c = phi_symbol(ctx, 0, 0.7);
    const SymbolMultiplier* ms[3] = {&a, &b, &c};
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        GridFunction xy = apply_multiplier(*ms[i], apply_multiplier(*ms[j], f));
        GridFunction yx = apply_multiplier(*ms[j], apply_multiplier(*ms[i], f));
        double diff = 0.0;
        for (std::size_t t = 0; t < xy.values.size(); ++t)
          diff = std::max(diff, std::abs(xy.values[t] - yx.values[t]));
        worst_comm = std::max(worst_comm, diff / (1.0 + norm_linf(xy)));
      }
    }
  }
  add(out, "ops/multipliers_commute", worst_comm <= 1e-12,
      fmt("max scaled mismatch %.3e", worst_comm));
  return out;
}

// ---------------------------------------------------------------------------
// energy: wells, golden values, report structure, analytic bounds
// ---------------------------------------------------------------------------
inline std::vector<CheckResult> energy_suite(const Options& opts = {}) {
  using namespace detail;
  std::vector<CheckResult> out;
  const double pi = 3.14159265358979323846;

  bool wells = potential(1.0) == 0.0 && potential(-1.0) == 0.0 && potential(0.0) == 0.25 &&
               potential_derivative(1.0) == 0.0 && potential_derivative(-1.0) == 0.0 &&
               potential_derivative(0.0) == 0.0;
  double fd_worst = 0.0;
  for (double u : {-2.0, 0.3, 1.7}) {
    double d = 1e-5;
    double fd = (potential(u + d) - potential(u - d)) / (2.0 * d);
    fd_worst = std::max(fd_worst, std::abs(fd - potential_derivative(u)));
  }
  add(out, "energy/potential_wells", wells && fd_worst <= 1e-8,
      fmt("well values exact, central-difference gap %.3e", fd_worst));

  {
    Grid g3 = make_grid(3, 8, 2.0 * pi);
    OperatorContext ctx = make_operator_context(g3, 1.0, 0.0);
    double vol = g3.volume();
    double e1 = discrete_energy(ctx, make_grid_function(g3, 1.0)).energy;
    double e0 = discrete_energy(ctx, make_grid_function(g3, 0.0)).energy;
    GridFunction s = make_grid_function(g3);
    for (std::size_t i = 0; i < s.values.size(); ++i)
      s.values[i] = std::sin(g3.unravel(i)[0] * g3.h);
    double es = discrete_energy(ctx, s).energy;
    bool ok = std::abs(e1) <= 1e-14 && std::abs(e0 - vol / 4.0) <= 1e-13 * vol &&
              std::abs(es - vol * 11.0 / 32.0) <= 1e-12 * vol;
    add(out, "energy/golden_values", ok,
        fmt("E(1)=%.2e, E(0)-|O|/4=%.2e, E(sin)-11|O|/32=%.2e", e1, e0 - vol / 4.0,
            es - vol * 11.0 / 32.0));
  }

  double worst_rep = 0.0;
  bool rep_bounds = true;
  for (const Grid& g : small_grids()) {
    OperatorContext ctx = make_operator_context(g, 0.4, 0.0);
    for (int rep = 0; rep < 5; ++rep) {
      GridFunction f = testing::random_field(g, opts.seed + 3 * g.dim + rep, 1.2);
      EnergyReport r = discrete_energy(ctx, f);
      double recon = 0.5 * ctx.epsilon * ctx.epsilon * r.gradient_seminorm_sq + r.potential_integral;
      worst_rep = std::max(worst_rep, std::abs(r.energy - recon) / (1.0 + std::abs(r.energy)));
      rep_bounds = rep_bounds && r.potential_integral >= 0.0 &&
                   r.energy >= 0.5 * ctx.epsilon * ctx.epsilon * r.gradient_seminorm_sq -
                                   1e-12 * (1.0 + std::abs(r.energy));
    }
  }
  add(out, "energy/report_decomposition", worst_rep <= 1e-15 && rep_bounds,
      fmt("identity gap %.3e, lower bounds hold", worst_rep));

  bool h1b = h1_bound_from_energy(0.0, 0.5) == 0.0 &&
             std::abs(h1_bound_from_energy(2.0, 1.0) - 2.0) <= 1e-15 &&
             std::abs(h1_bound_from_energy(0.5, 0.1) - 10.0) <= 1e-13 &&
             throws([] { return h1_bound_from_energy(-1.0, 1.0); });
  add(out, "energy/h1_bound", h1b, "sqrt(2 E0)/epsilon with input validation");

  {
    Grid g3 = make_grid(3, 8, 2.0 * pi);
    GridFunction c = make_grid_function(g3, -0.7);
    double bc = sobolev_linf_bound(c);
    bool const_ok = std::abs(bc - std::sqrt(3.0) * 0.7) <= 1e-13 &&
                    sobolev_linf_bound(make_grid_function(g3, 0.0)) == 0.0;
    long bad = 0;
    double worst_margin = 1e300;
    for (int rep = 0; rep < opts.random_fields; ++rep) {
      GridFunction f = testing::random_field(g3, opts.seed + 555 + rep);
      double bound = sobolev_linf_bound(f);
      double sup = norm_linf(f);
      if (sup > bound) ++bad;
      worst_margin = std::min(worst_margin, bound / std::max(sup, 1e-300));
    }
    add(out, "energy/sobolev_bound", const_ok && bad == 0,
        fmt("%ld violations over %d fields on 8^3, min bound/sup = %.3f", bad, opts.random_fields,
            worst_margin));
  }

  // product rules with explicit constants; fields band-limited to N/4 so the
  // pointwise product is exactly resolved and the calculus identities apply
  double worst_lap_ratio = 0.0, worst_grad_ratio = 0.0;
  for (const Grid& g : small_grids()) {
    for (int rep = 0; rep < 20; ++rep) {
      GridFunction f = testing::random_smooth_field(g, opts.seed + 71 + rep, g.n / 4);
      GridFunction h = testing::random_smooth_field(g, opts.seed + 903 + rep, g.n / 4);
      GridFunction prod = make_grid_function(g);
      for (std::size_t i = 0; i < prod.values.size(); ++i)
        prod.values[i] = f.values[i] * h.values[i];
      double fi = norm_linf(f), hi = norm_linf(h);
      double lap_p = spectral_seminorm_sq(prod, 2);
      double lap_f = spectral_seminorm_sq(f, 2), lap_h = spectral_seminorm_sq(h, 2);
      worst_lap_ratio =
          std::max(worst_lap_ratio, lap_p / (8.0 * (hi * hi * lap_f + fi * fi * lap_h)));
      double gr_p = spectral_seminorm_sq(prod, 1);
      double gr_f = spectral_seminorm_sq(f, 1), gr_h = spectral_seminorm_sq(h, 1);
      worst_grad_ratio =
          std::max(worst_grad_ratio, gr_p / (2.0 * (hi * hi * gr_f + fi * fi * gr_h)));
    }
  }
  add(out, "energy/laplacian_product_rule", worst_lap_ratio <= 1.0,
      fmt("|lap(fg)|^2 <= 8(|g|_inf^2 |lap f|^2 + |f|_inf^2 |lap g|^2): max ratio %.3f",
          worst_lap_ratio));
  add(out, "energy/gradient_product_rule", worst_grad_ratio <= 1.0,
      fmt("|grad(fg)|^2 <= 2(|g|_inf^2 |grad f|^2 + |f|_inf^2 |grad g|^2): max ratio %.3f",
          worst_grad_ratio));
  return out;
}

// ---------------------------------------------------------------------------
// stepper: equilibria, linear exactness, energy decay, recast residuals
// ---------------------------------------------------------------------------
inline std::vector<CheckResult> stepper_suite(const Options& opts = {}) {
  using namespace detail;
  std::vector<CheckResult> out;
  Grid g = make_grid(2, 16, 2.0 * 3.14159265358979323846);
  OperatorContext ctx = make_operator_context(g, 0.5, 0.0);

  {
    double worst = 0.0, worst_e = 0.0;
    for (double c : {0.0, 1.0, -1.0}) {
      GridFunction u = make_grid_function(g, c);
      StepResult r = step(ctx, u, StepperConfig{0.5, adaptive_kappa(), 1e3, false, false});
      for (double v : r.u_next.values) worst = std::max(worst, std::abs(v - c));
      if (c != 0.0) worst_e = std::max(worst_e, std::abs(r.energy_after));
    }
    add(out, "stepper/equilibria", worst <= 1e-13 && worst_e <= 1e-13,
        fmt("max drift %.3e from u = 0, +1, -1; well energies %.3e", worst, worst_e));
  }

  {
    GridFunction z = make_grid_function(g, 0.0);
    GridFunction s1z = stage1(ctx, z, 0.3);
    GridFunction one = make_grid_function(g, 1.0);
    GridFunction s1o = stage1(ctx, one, 0.3);
    double d = norm_linf(s1z);
    for (double v : s1o.values) d = std::max(d, std::abs(v - 1.0));
    add(out, "stepper/stage_fixed_points", d <= 1e-13, fmt("max drift %.3e", d));
  }

  {
    OperatorContext cx = make_operator_context(g, 0.7, 1.0);
    GridFunction u0 = testing::random_smooth_field(g, opts.seed + 5);
    StepperConfig cfg{0.3, fixed_kappa(1.0), 1e3, true, false};
    GridFunction u = u0;
    int n_steps = 20;
    for (int n = 0; n < n_steps; ++n) u = step(cx, u, cfg).u_next;
    GridFunction exact = apply_phi(cx, 0, n_steps * 0.3, u0);
    double diff = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i)
      diff = std::max(diff, std::abs(u.values[i] - exact.values[i]));
    add(out, "stepper/linear_exactness", diff <= n_steps * 1e-14 * norm_linf(u0),
        fmt("|u^n - phi0(n tau) u0|_inf = %.3e after %d steps", diff, n_steps));

    StepperConfig dbl = cfg;
    dbl.tau = 0.6;
    GridFunction two = step(cx, step(cx, u0, cfg).u_next, cfg).u_next;
    GridFunction once = step(cx, u0, dbl).u_next;
    double sg = 0.0;
    for (std::size_t i = 0; i < two.values.size(); ++i)
      sg = std::max(sg, std::abs(two.values[i] - once.values[i]));
    add(out, "stepper/semigroup", sg <= 1e-13 * (1.0 + norm_linf(u0)),
        fmt("two tau-steps vs one 2tau-step: %.3e", sg));
  }

  {
    long energy_bad = 0, mass_bad = 0;
    int max_retries_seen = 0;
    for (double tau : {0.01, 0.1, 1.0, 10.0}) {
      GridFunction u = make_initial_condition(g, spinodal_ic(0.05, 42), true, 0);
      double m0 = mass(u);
      StepperConfig cfg{tau, adaptive_kappa(), 1e3, false, false};
      for (int n = 0; n < 25; ++n) {
        StepResult r = step(ctx, u, cfg);
        double slack = 1e-10 * (1.0 + std::abs(r.energy_before));
        if (r.energy_after > r.energy_before + slack) ++energy_bad;
        if (discrete_energy(with_kappa(ctx, r.kappa_used), r.u_stage).energy >
            r.energy_before + slack)
          ++energy_bad;
        if (r.mass_drift > 1e-11 * (1.0 + std::abs(m0))) ++mass_bad;
        max_retries_seen = std::max(max_retries_seen, r.retries);
        u = std::move(r.u_next);
      }
    }
    add(out, "stepper/energy_decay_all_tau", energy_bad == 0,
        fmt("stage and step energies vs E(u^n), tau in {0.01,0.1,1,10}: %ld violations, max "
            "retries %d",
            energy_bad, max_retries_seen));
    add(out, "stepper/per_step_mass", mass_bad == 0,
        fmt("per-step drift <= 1e-11 (1+|m0|): %ld violations", mass_bad));
  }

  {
    bool ok = std::abs(adapt_kappa(make_grid_function(g, 1.0), nullptr, nullptr, 0.0, 1.0) - 1.0) <=
                  1e-15 &&
              adapt_kappa(make_grid_function(g, 0.0), nullptr, nullptr, 0.25, 1.0) == 0.25 &&
              std::abs(adapt_kappa(make_grid_function(g, 2.0), nullptr, nullptr, 0.0, 1.1) - 6.05) <=
                  1e-14;
    add(out, "stepper/adapt_kappa_formula", ok, "M=1 -> 1; M=0 -> floor; M=2, 1.1 -> 6.05");
  }

  {
    GridFunction u = testing::random_smooth_field(g, opts.seed + 17, -1, 0.4);
    StepperConfig cfg{0.2, adaptive_kappa(), 1e3, false, false};
    StepResult r = step(ctx, u, cfg);
    OperatorContext used = with_kappa(ctx, r.kappa_used);
    auto [r1, r2] = equivalent_form_residual(used, u, r.u_stage, r.u_next, cfg.tau);
    double tol = 1e-10 * (1.0 + norm_l2(u));
    bool resid_ok = r1 <= tol && r2 <= tol;

    GridFunction bumped = r.u_stage;
    for (double& v : bumped.values) v += 1e-3;
    auto [p1, p2] = equivalent_form_residual(used, u, bumped, r.u_next, cfg.tau);
    (void)p2;
    double expected = 1e-3 * std::sqrt(g.volume());
    bool detect_ok = p1 >= 0.1 * expected && p1 <= 10.0 * expected;

    GridFunction z = make_grid_function(g, 0.0);
    auto [z1, z2] = equivalent_form_residual(ctx, z, z, z, cfg.tau);
    add(out, "stepper/recast_residuals", resid_ok && detect_ok && z1 == 0.0 && z2 == 0.0,
        fmt("r1=%.3e r2=%.3e (tol %.3e), perturbation detected at %.3e, zero triple exact",
            r1, r2, tol, p1));
  }

  {
    GridFunction big = make_grid_function(g, 2000.0);
    bool diverges = throws([&] { return step(ctx, big, StepperConfig{0.1, adaptive_kappa()}); });
    add(out, "stepper/divergence_guard", diverges, "|u|_inf beyond threshold aborts");
  }
  return out;
}

// ---------------------------------------------------------------------------
// harness: determinism, convergence self-consistency, audit fault injection
// ---------------------------------------------------------------------------
inline std::vector<CheckResult> harness_suite(const Options& opts = {}) {
  using namespace detail;
  std::vector<CheckResult> out;
  (void)opts;

  SimConfig cfg;
  cfg.dim = 2;
  cfg.n = 16;
  cfg.epsilon = 0.5;
  cfg.tau = 0.1;
  cfg.t_final = 1.0;
  cfg.ic = spinodal_ic(0.05, 7);

  {
    RunResult a = run_simulation(cfg);
    RunResult b = run_simulation(cfg);
    bool same = a.trace.records.size() == b.trace.records.size() &&
                a.final_state.values == b.final_state.values;
    for (std::size_t i = 0; same && i < a.trace.records.size(); ++i) {
      const DiagnosticsRecord &x = a.trace.records[i], &y = b.trace.records[i];
      same = x.step == y.step && x.t == y.t && x.mass == y.mass && x.energy == y.energy &&
             x.h1_seminorm == y.h1_seminorm && x.h2_seminorm == y.h2_seminorm &&
             x.linf == y.linf && x.kappa == y.kappa && x.retries == y.retries;
    }
    add(out, "harness/determinism", same, "identical config + seed gives bit-identical traces");
  }

  {
    SimConfig flat = cfg;
    flat.ic = constant_ic(1.0);
    flat.kappa_fixed = true;
    flat.kappa = 1.0;
    flat.tau = 0.25;
    flat.t_final = 1.0;
    RunResult r = run_simulation(flat);
    bool ok = !r.trace.aborted;
    double vol = make_grid(flat.dim, flat.n, flat.length).volume();
    for (const DiagnosticsRecord& rec : r.trace.records)
      ok = ok && std::abs(rec.energy) <= 1e-13 && std::abs(rec.linf - 1.0) <= 1e-13 &&
           std::abs(rec.mass - vol) <= 1e-12 * vol;
    add(out, "harness/equilibrium_trace", ok, "u0 = 1: energy 0, linf 1, mass |Omega|");
  }

  {
    SimConfig big = cfg;
    big.ic = constant_ic(1500.0);
    RunResult r = run_simulation(big);
    bool ok = r.trace.aborted && !r.trace.abort_reason.empty() && r.trace.records.size() == 1;
    add(out, "harness/divergence_aborts_cleanly", ok,
        "threshold breach returns partial trace with reason");
  }

  {
    SimConfig conv = cfg;
    conv.n = 32;
    conv.ic = two_mode_ic();
    conv.kappa_fixed = true;
    conv.kappa = 2.0;
    conv.t_final = 0.2;
    ConvergenceReport rep = temporal_convergence(conv, {0.02, 0.01});
    bool shape_ok = rep.levels.size() == 2 && rep.observed_orders.size() == 1 && !rep.exact_regime;
    double extrap = rep.levels[0].error_l2 * 0.25;
    double ratio = rep.levels[1].error_l2 / extrap;
    bool band_ok = ratio >= 1.0 / 4.5 && ratio <= 4.5;
    add(out, "harness/temporal_self_consistency", shape_ok && band_ok,
        fmt("finest error %.3e vs order-2 extrapolation %.3e (ratio %.2f)",
            shape_ok ? rep.levels[1].error_l2 : -1.0, extrap, ratio));

    ConvergenceReport lin = temporal_convergence(conv, {0.02, 0.01}, true);
    add(out, "harness/temporal_exact_regime", lin.exact_regime && lin.observed_orders.empty(),
        "linear-only errors at reference precision, orders omitted");

    ConvergenceReport single = temporal_convergence(conv, {0.02});
    add(out, "harness/temporal_single_level", single.observed_orders.empty(),
        "one tau gives no order estimates");
  }

  {
    Grid coarse = make_grid(2, 16, 2.0 * 3.14159265358979323846);
    GridFunction f = make_initial_condition(coarse, two_mode_ic(), true, 0);
    GridFunction fine = spectral_interpolate(f, 32);
    Grid fg = make_grid(2, 32, coarse.length);
    GridFunction exact = make_initial_condition(fg, two_mode_ic(), true, 0);
    double diff = 0.0;
    for (std::size_t i = 0; i < fine.values.size(); ++i)
      diff = std::max(diff, std::abs(fine.values[i] - exact.values[i]));
    GridFunction same = spectral_interpolate(f, 16);
    bool identity = same.values == f.values;
    add(out, "harness/spectral_interpolation", diff <= 1e-12 && identity,
        fmt("two-mode field onto 2N grid: %.3e; same-N identity exact", diff));
  }

  {
    std::vector<DiagnosticsRecord> recs(10);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      recs[i].step = static_cast<long>(i);
      recs[i].t = 0.1 * i;
      recs[i].mass = 0.0;
      recs[i].energy = 5.0 - 0.1 * i;
      recs[i].h1_seminorm = 1.0;
      recs[i].h2_seminorm = 1.0;
      recs[i].linf = 0.05;
    }
    double vol = 4.0 * 3.14159265358979323846 * 3.14159265358979323846;
    AuditReport clean = stability_audit(recs, 1.0, 5.0, vol);
    bool clean_ok = clean.clean() && clean.sobolev_violations.empty() &&
                    clean.energy_violations.empty() && clean.h1_violations.empty() &&
                    clean.mass_violations.empty();

    recs[3].energy = 9.0;     // (a) fires at 3; 4 decreases again
    recs[2].h1_seminorm = 50.0;  // (b)
    recs[4].linf = 5.0;       // (c)
    recs[5].mass = 1.0;       // (d)
    AuditReport faulty = stability_audit(recs, 1.0, 5.0, vol);
    bool detect_ok = faulty.energy_violations == std::vector<std::size_t>{3} &&
                     faulty.h1_violations == std::vector<std::size_t>{2} &&
                     faulty.sobolev_violations == std::vector<std::size_t>{4} &&
                     faulty.mass_violations == std::vector<std::size_t>{5} && !faulty.clean();
    add(out, "harness/audit_fault_injection", clean_ok && detect_ok,
        "clean trace passes; each injected fault flags exactly its record");
  }
  return out;
}

// ---------------------------------------------------------------------------
// formats: CSV schema, snapshot byte layout, config grammar
// ---------------------------------------------------------------------------
inline std::vector<CheckResult> io_suite(const Options& opts = {}) {
  using namespace detail;
  namespace fs = std::filesystem;
  std::vector<CheckResult> out;

  {
    std::vector<DiagnosticsRecord> recs(3);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      recs[i].step = static_cast<long>(i * 7);
      recs[i].t = 0.1 * i + 1e-13;
      recs[i].mass = -1.0 / 3.0 * i;
      recs[i].energy = std::exp(-0.3 * i) * 1e5;
      recs[i].h1_seminorm = std::sqrt(2.0) * i;
      recs[i].h2_seminorm = 3.0e-11 * i;
      recs[i].linf = 0.97;
      recs[i].kappa = 6.05;
      recs[i].retries = static_cast<int>(i);
    }
    std::string text = format_diagnostics_csv(recs);
    bool header_ok = text.rfind(diagnostics_csv_header(), 0) == 0;
    std::vector<DiagnosticsRecord> back = parse_diagnostics_csv(text);
    bool rt = back.size() == recs.size();
    for (std::size_t i = 0; rt && i < recs.size(); ++i) {
      rt = back[i].step == recs[i].step && back[i].t == recs[i].t && back[i].mass == recs[i].mass &&
           back[i].energy == recs[i].energy && back[i].h1_seminorm == recs[i].h1_seminorm &&
           back[i].h2_seminorm == recs[i].h2_seminorm && back[i].linf == recs[i].linf &&
           back[i].kappa == recs[i].kappa && back[i].retries == recs[i].retries;
    }
    add(out, "io/csv_round_trip", header_ok && rt,
        "schema header and 17-significant-digit exact decimal round trip");
  }

  {
    fs::path dir = fs::temp_directory_path();
    fs::path p = dir / ("chfs-selftest-" + std::to_string(static_cast<unsigned long long>(
                                               counter_hash(opts.seed, 0xF11E))) +
                        ".chfs");
    Grid g = make_grid(2, 16, 1.75);
    GridFunction f = testing::random_field(g, opts.seed + 99);
    write_snapshot(f, p.string());
    GridFunction back = read_snapshot(p.string());
    bool bits = back.grid == f.grid && back.values == f.values;

    std::uintmax_t size = fs::file_size(p);
    bool size_ok = size == 22 + 8ull * f.values.size();

    std::ifstream in(p, std::ios::binary);
    std::vector<unsigned char> head(22);
    in.read(reinterpret_cast<char*>(head.data()), 22);
    bool layout_ok = head[0] == 'C' && head[4] == '1' && head[5] == 2 && head[6] == 16 &&
                     head[7] == 0 && head[10] == 16 && head[14] == 0;
    in.close();

    std::ofstream(p, std::ios::binary) << "XHFS1 garbage";
    bool magic_err = throws([&] { return read_snapshot(p.string()); });
    {
      std::ofstream trunc(p, std::ios::binary);
      trunc << "CHFS1";
      unsigned char d = 2;
      trunc.write(reinterpret_cast<const char*>(&d), 1);
    }
    bool trunc_err = throws([&] { return read_snapshot(p.string()); });
    fs::remove(p);
    add(out, "io/snapshot_format", bits && size_ok && layout_ok && magic_err && trunc_err,
        fmt("bit-exact round trip, dim=2 N=16 header is 22 bytes (file %ju), little-endian axis "
            "counts, bad magic and truncation rejected",
            static_cast<std::uintmax_t>(size)));
  }

  {
    SimConfig minimal = parse_config_text("dim = 2\nN = 32\nepsilon = 0.5\ntau = 0.1\nt_final = 1\n");
    bool defaults = std::abs(minimal.length - 2.0 * 3.14159265358979323846) <= 1e-15 &&
                    !minimal.kappa_fixed && minimal.kappa == 0.0 && minimal.safety == 1.1 &&
                    minimal.seed == 0 && minimal.diag_every == 1 && minimal.snapshot_every == 0 &&
                    !minimal.dealias && minimal.zero_mean && minimal.out_dir == "." &&
                    minimal.ic.kind == InitialCondition::Kind::spinodal && minimal.ic.value == 0.05;
    add(out, "io/config_defaults", defaults, "minimal file fills every documented default");

    auto error_contains = [](const std::string& text, const std::string& needle) {
      try {
        parse_config_text(text);
      } catch (const config_error& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
      }
      return false;
    };
    bool errs =
        error_contains("dim = 2\nN = 7\nepsilon = 1\ntau = 1\nt_final = 1\n", "N must be even") &&
        error_contains("bogus = 1\n", ":1: unknown key 'bogus'") &&
        error_contains("dim = 1\ndim = 2\n", ":2: duplicate key") &&
        error_contains("dim = 1\nN = 8\nepsilon = 1\ntau = 0.3\nt_final = 1\n",
                       "integer multiple") &&
        error_contains("", "missing required key 'dim'") &&
        error_contains("dim = 2\nN = 8\nepsilon = 1\ntau = 1\nt_final = 1\nic = wavelet(2)\n",
                       "unknown form");
    add(out, "io/config_errors", errs, "line-numbered rejection of malformed inputs");

    SimConfig full = parse_config_text(
        "dim = 3\nN = 8\nL = 1.5\nepsilon = 0.25  # interface\ntau = 0.5\nt_final = 2\n"
        "kappa_mode = fixed\nkappa = 2\nsafety = 1.25\nic = spinodal(0.05, 42)\nseed = 9\n"
        "diag_every = 4\nsnapshot_every = 2\ndealias = true\nzero_mean = false\nout_dir = runs\n");
    bool full_ok = full.kappa_fixed && full.kappa == 2.0 && full.ic.seed == 42 &&
                   full.ic.seed_explicit && full.dealias && !full.zero_mean &&
                   full.out_dir == "runs" && full.diag_every == 4;
    add(out, "io/config_full", full_ok, "every key parses with comments");
  }

  {
    Grid g = make_grid(2, 16, 2.0 * 3.14159265358979323846);
    GridFunction a = make_initial_condition(g, spinodal_ic(0.05, 42), true, 0);
    GridFunction b = make_initial_condition(g, spinodal_ic(0.05, 42), true, 999);
    GridFunction c = make_initial_condition(g, spinodal_ic(0.05), true, 42);
    bool pinned = a.values == b.values && a.values == c.values;
    double sup = norm_linf(a);
    GridFunction raw = make_initial_condition(g, spinodal_ic(0.05, 42), false, 0);
    double raw_sup = norm_linf(raw);
    double raw_mean = std::abs(mass(raw)) / g.volume();
    bool in_band = raw_sup <= 0.05 && sup <= 0.05 + raw_mean + 1e-15;
    bool mean_zero = std::abs(mass(a)) <= 1e-13 * g.volume();
    add(out, "io/spinodal_reproducible", pinned && in_band && mean_zero,
        fmt("explicit seed overrides config seed; values in [-a, a] (sup %.4f), mean removed",
            raw_sup));
  }
  return out;
}

inline std::vector<CheckResult> run_all(const Options& opts = {}) {
  std::vector<CheckResult> all;
  for (auto* suite : {&grid_suite, &phi_suite, &operator_suite, &energy_suite, &stepper_suite,
                      &harness_suite, &io_suite}) {
    std::vector<CheckResult> part = (*suite)(opts);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

inline int failures(const std::vector<CheckResult>& results) {
  int n = 0;
  for (const CheckResult& r : results)
    if (!r.pass) ++n;
  return n;
}

inline std::string format_results(const std::vector<CheckResult>& results) {
  std::string out;
  for (const CheckResult& r : results) {
    out += r.pass ? "[PASS] " : "[FAIL] ";
    out += r.name;
    if (!r.detail.empty()) {
      out += ": ";
      out += r.detail;
    }
    out += '\n';
  }
  out += detail::fmt("%d/%zu checks passed\n", static_cast<int>(results.size()) - failures(results),
                     results.size());
  return out;
}

}  // namespace chfs::selftest
