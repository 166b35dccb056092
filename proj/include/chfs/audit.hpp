#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "energy.hpp"
#include "simulation.hpp"

namespace chfs {

/// Per-record stability audit over a diagnostics trace. Checks:
///   (a) energy nonincreasing between successive records
///   (b) h1_seminorm within the energy-derived bound sqrt(2 E0)/epsilon
///   (c) linf within the Sobolev-style bound recomputed from the mass, h1
///       and h2 columns (advisory: the interpolation constant is tight for
///       some states, so violations are reported but do not fail the audit)
///   (d) mass drift within tolerance
/// plus the sups of h2_seminorm and linf over the whole trace, reported
/// unthresholded.
struct AuditReport {
  std::vector<std::size_t> energy_violations;   // (a), index of the later record
  std::vector<std::size_t> h1_violations;       // (b)
  std::vector<std::size_t> sobolev_violations;  // (c), advisory
  std::vector<std::size_t> mass_violations;     // (d)
  double h1_bound = 0.0;
  double h2_sup = 0.0;
  double linf_sup = 0.0;
  std::size_t checked = 0;

  bool clean() const {
    return energy_violations.empty() && h1_violations.empty() && mass_violations.empty();
  }
};

inline AuditReport stability_audit(const std::vector<DiagnosticsRecord>& records, double epsilon,
                                   double initial_energy, double volume) {
  AuditReport report;
  report.checked = records.size();
  if (records.empty()) return report;
  report.h1_bound = h1_bound_from_energy(std::max(0.0, initial_energy), epsilon);
  double mass0 = records.front().mass;

  for (std::size_t i = 0; i < records.size(); ++i) {
    const DiagnosticsRecord& r = records[i];
    if (i > 0) {
      double prev = records[i - 1].energy;
      if (r.energy > prev + 1e-10 * (1.0 + std::abs(prev))) report.energy_violations.push_back(i);
    }
    if (r.h1_seminorm > report.h1_bound * (1.0 + 1e-10)) report.h1_violations.push_back(i);
    double linf_bound = sobolev_linf_bound(r.mass, r.h1_seminorm, r.h2_seminorm, volume);
    if (r.linf > linf_bound * (1.0 + 1e-10)) report.sobolev_violations.push_back(i);
    if (std::abs(r.mass - mass0) > 1e-10 * (1.0 + std::abs(mass0)))
      report.mass_violations.push_back(i);
    report.h2_sup = std::max(report.h2_sup, r.h2_seminorm);
    report.linf_sup = std::max(report.linf_sup, r.linf);
  }
  return report;
}

inline AuditReport stability_audit(const Trace& trace, double epsilon, double volume) {
  double e0 = trace.records.empty() ? 0.0 : trace.records.front().energy;
  return stability_audit(trace.records, epsilon, e0, volume);
}

inline std::string format_audit_report(const AuditReport& r) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "records checked: %zu\n", r.checked);
  out += buf;
  auto section = [&](const std::string& label, const std::vector<std::size_t>& v) {
    out += label + ": " + std::to_string(v.size()) + " violation(s)";
    std::size_t shown = 0;
    for (std::size_t idx : v) {
      out += shown == 0 ? " at record(s) " : ", ";
      if (++shown > 10) {
        out += "...";
        break;
      }
      out += std::to_string(idx);
    }
    out += '\n';
  };
  section("(a) energy monotone", r.energy_violations);
  std::snprintf(buf, sizeof buf, "(b) h1 seminorm <= %.6e", r.h1_bound);
  section(buf, r.h1_violations);
  section("(c) linf Sobolev bound [advisory]", r.sobolev_violations);
  section("(d) mass conserved", r.mass_violations);
  std::snprintf(buf, sizeof buf, "(e) sup h2_seminorm = %.6e, sup linf = %.6e\n", r.h2_sup,
                r.linf_sup);
  out += buf;
  out += r.clean() ? "audit: PASS\n" : "audit: FAIL\n";
  return out;
}

}  // namespace chfs
