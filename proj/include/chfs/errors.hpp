#pragma once

#include <stdexcept>
#include <string>

namespace chfs {

/// Configuration file or constraint failure (CLI exit code 2).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Solution left the trust region (linf above the divergence threshold);
/// the run aborts instead of cascading NaNs (CLI exit code 3).
struct divergence_error : std::runtime_error {
  double linf;
  explicit divergence_error(double linf_)
      : std::runtime_error("divergence: |u|_inf = " + std::to_string(linf_)), linf(linf_) {}
};

/// A hosted run (convergence level, reference solve) aborted mid-flight;
/// wraps the abort reason of the inner trace (CLI exit code 3).
struct simulation_aborted_error : std::runtime_error {
  explicit simulation_aborted_error(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive stabilization ran out of retries without reaching an energy
/// decrease. Carries the last kappa and the offending energies.
struct kappa_exhausted_error : std::runtime_error {
  double kappa;
  double energy_before;
  double energy_after;
  int retries;
  kappa_exhausted_error(double kappa_, double e_before, double e_after, int retries_)
      : std::runtime_error("kappa adaptation exhausted after " + std::to_string(retries_) +
                           " retries (kappa = " + std::to_string(kappa_) + ")"),
        kappa(kappa_), energy_before(e_before), energy_after(e_after), retries(retries_) {}
};

}  // namespace chfs
