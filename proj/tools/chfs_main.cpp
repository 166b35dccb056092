// chfs: spectral Cahn-Hilliard simulator and analysis harness.
//
// Subcommands: run, converge-time, converge-space, audit, selftest.
// Exit codes: 0 ok, 2 configuration error, 3 divergence, 4 acceptance failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chfs/chfs.hpp"
#include "chfs/selftest.hpp"

namespace fs = std::filesystem;

namespace {

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

chfs::SimConfig load_config(const std::string& path, const std::string& out_dir_flag) {
  chfs::SimConfig cfg = chfs::parse_config(path);
  if (!out_dir_flag.empty()) cfg.out_dir = out_dir_flag;
  return cfg;
}

int cmd_run(const std::string& config_path, const std::string& out_dir_flag, bool quiet) {
  chfs::SimConfig cfg = load_config(config_path, out_dir_flag);
  fs::create_directories(cfg.out_dir);

  chfs::RunOptions opts;
  if (cfg.snapshot_every > 0) {
    opts.on_snapshot = [&cfg](long n, const chfs::GridFunction& u) {
      char name[40];
      std::snprintf(name, sizeof name, "snapshot_%06ld.chfs", n);
      chfs::write_snapshot(u, (fs::path(cfg.out_dir) / name).string());
    };
  }

  chfs::RunResult result = chfs::run_simulation(cfg, opts);
  std::string csv_path = (fs::path(cfg.out_dir) / "diagnostics.csv").string();
  chfs::write_diagnostics_csv(result.trace.records, csv_path);

  const std::vector<chfs::DiagnosticsRecord>& recs = result.trace.records;
  if (!quiet && !recs.empty()) {
    const chfs::DiagnosticsRecord& last = recs.back();
    int max_retries = 0;
    for (const chfs::DiagnosticsRecord& r : recs) max_retries = std::max(max_retries, r.retries);
    std::printf("wrote %s (%zu records)\n", csv_path.c_str(), recs.size());
    std::printf("final: step %ld, t = %g, energy = %s, mass drift = %.3e, max retries = %d\n",
                last.step, last.t, real17(last.energy).c_str(),
                std::abs(last.mass - recs.front().mass), max_retries);
  }
  if (result.trace.aborted) {
    std::fprintf(stderr, "run aborted: %s\n", result.trace.abort_reason.c_str());
    return 3;
  }
  return 0;
}

int cmd_converge_time(const std::string& config_path, const std::string& out_dir_flag,
                      bool quiet) {
  chfs::SimConfig cfg = load_config(config_path, out_dir_flag);
  fs::create_directories(cfg.out_dir);

  std::vector<double> taus = {cfg.tau, cfg.tau / 2.0, cfg.tau / 4.0, cfg.tau / 8.0};
  chfs::ConvergenceReport report = chfs::temporal_convergence(cfg, taus);

  std::string csv_path = (fs::path(cfg.out_dir) / "convergence_time.csv").string();
  {
    std::ofstream out(csv_path);
    out << "tau,error_l2,error_linf,observed_order\n";
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      const chfs::ConvergenceLevel& l = report.levels[i];
      out << real17(l.resolution) << ',' << real17(l.error_l2) << ',' << real17(l.error_linf)
          << ',';
      if (i > 0 && i - 1 < report.observed_orders.size())
        out << real17(report.observed_orders[i - 1]);
      out << '\n';
    }
  }

  bool pass = true;
  if (report.exact_regime) {
    if (!quiet)
      std::printf("all errors at reference precision (exact regime); order test vacuous\n");
  } else {
    for (double p : report.observed_orders) pass = pass && p >= 1.7 && p <= 2.3;
    if (!quiet) {
      for (std::size_t i = 0; i < report.levels.size(); ++i) {
        std::printf("tau %-12g l2 error %.6e", report.levels[i].resolution,
                    report.levels[i].error_l2);
        if (i > 0 && i - 1 < report.observed_orders.size())
          std::printf("   order %.3f", report.observed_orders[i - 1]);
        std::printf("\n");
      }
    }
  }
  if (!quiet) {
    std::printf("wrote %s\n", csv_path.c_str());
    std::printf("temporal convergence: %s (orders within [1.7, 2.3])\n", pass ? "PASS" : "FAIL");
  }
  return pass ? 0 : 4;
}

int cmd_converge_space(const std::string& config_path, const std::string& out_dir_flag,
                       bool quiet) {
  chfs::SimConfig cfg = load_config(config_path, out_dir_flag);
  fs::create_directories(cfg.out_dir);

  std::vector<int> ns = {cfg.n, 2 * cfg.n, 4 * cfg.n, 8 * cfg.n};
  chfs::ConvergenceReport report = chfs::spatial_convergence(cfg, ns);

  std::string csv_path = (fs::path(cfg.out_dir) / "convergence_space.csv").string();
  {
    std::ofstream out(csv_path);
    out << "N,error_l2,error_linf,ratio\n";
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      const chfs::ConvergenceLevel& l = report.levels[i];
      out << static_cast<int>(l.resolution) << ',' << real17(l.error_l2) << ','
          << real17(l.error_linf) << ',';
      if (i > 0 && report.levels[i - 1].error_l2 > 0.0)
        out << real17(l.error_l2 / report.levels[i - 1].error_l2);
      out << '\n';
    }
  }

  bool pass = true;
  if (!report.smooth) {
    if (!quiet)
      std::printf("random initial data: per-grid realizations differ, ratio test skipped\n");
  } else {
    pass = chfs::spatial_ratio_ok(report);
  }
  if (!quiet) {
    for (const chfs::ConvergenceLevel& l : report.levels)
      std::printf("N %-6d l2 error vs N=%d reference: %.6e\n", static_cast<int>(l.resolution),
                  static_cast<int>(report.reference_resolution), l.error_l2);
    std::printf("wrote %s\n", csv_path.c_str());
    std::printf("spatial convergence: %s (each doubling cuts the error to <= 0.1x or below "
                "1e-11)\n",
                pass ? "PASS" : "FAIL");
  }
  return pass ? 0 : 4;
}

int cmd_audit(const std::string& config_path, const std::string& out_dir_flag, bool quiet) {
  chfs::SimConfig cfg = load_config(config_path, out_dir_flag);
  std::string csv_path = (fs::path(cfg.out_dir) / "diagnostics.csv").string();
  std::vector<chfs::DiagnosticsRecord> recs = chfs::read_diagnostics_csv(csv_path);
  if (recs.empty()) throw chfs::config_error(csv_path + ": no diagnostics records");

  double volume = chfs::make_grid(cfg.dim, cfg.n, cfg.length).volume();
  chfs::AuditReport report =
      chfs::stability_audit(recs, cfg.epsilon, recs.front().energy, volume);
  if (!quiet) std::fputs(chfs::format_audit_report(report).c_str(), stdout);
  return report.clean() ? 0 : 4;
}

int cmd_selftest(bool quiet) {
  std::vector<chfs::selftest::CheckResult> results = chfs::selftest::run_all();
  int bad = chfs::selftest::failures(results);
  if (quiet) {
    for (const chfs::selftest::CheckResult& r : results)
      if (!r.pass) std::printf("[FAIL] %s: %s\n", r.name.c_str(), r.detail.c_str());
    std::printf("%d/%zu checks passed\n", static_cast<int>(results.size()) - bad, results.size());
  } else {
    std::fputs(chfs::selftest::format_results(results).c_str(), stdout);
  }
  return bad == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Cahn-Hilliard simulator and analysis harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    CLI::Option* c = sub->add_option("--config", config_path, "key = value configuration file");
    if (needs_config) c->required();
    sub->add_option("--out-dir", out_dir, "output directory (overrides the config's out_dir)");
    sub->add_flag("--quiet", quiet, "suppress the human-readable summary");
  };

  CLI::App* run = app.add_subcommand("run", "advance the equation and write diagnostics");
  add_common(run, true);
  CLI::App* ctime =
      app.add_subcommand("converge-time", "temporal order study on a tau/2^k ladder");
  add_common(ctime, true);
  CLI::App* cspace =
      app.add_subcommand("converge-space", "spatial accuracy study on an N*2^k ladder");
  add_common(cspace, true);
  CLI::App* audit =
      app.add_subcommand("audit", "check a recorded diagnostics trace against the decay bounds");
  add_common(audit, true);
  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in property suite");
  add_common(selftest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, quiet);
    if (ctime->parsed()) return cmd_converge_time(config_path, out_dir, quiet);
    if (cspace->parsed()) return cmd_converge_space(config_path, out_dir, quiet);
    if (audit->parsed()) return cmd_audit(config_path, out_dir, quiet);
    if (selftest->parsed()) return cmd_selftest(quiet);
  } catch (const chfs::config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const chfs::divergence_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const chfs::kappa_exhausted_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const chfs::simulation_aborted_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
