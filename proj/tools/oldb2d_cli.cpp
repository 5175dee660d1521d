// oldb2d: command-line driver.
//
//   oldb2d run    --config <path> [--out-dir <dir>]
//   oldb2d picard --config <path> --t0 <sec> [--compare]
//   oldb2d check  --config <path>
//   oldb2d bounds --config <path> [--traj <csv>]
//
// Exit codes: 0 success, 1 monitor violation (or failed check), 2 config or
// input error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oldb2d/checks.hpp"
#include "oldb2d/config.hpp"
#include "oldb2d/diagnostics.hpp"
#include "oldb2d/errors.hpp"
#include "oldb2d/initial.hpp"
#include "oldb2d/integrate.hpp"
#include "oldb2d/picard.hpp"
#include "oldb2d/snapshot.hpp"
#include "oldb2d/timeseries.hpp"

namespace fs = std::filesystem;
using namespace oldb2d;

namespace {

enum Exit { kOk = 0, kMonitor = 1, kConfig = 2, kNumerical = 3 };

int cmd_run(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  const SimState initial = build_initial(cfg);
  fs::create_directories(cfg.out_dir);
  const fs::path out(cfg.out_dir);

  const Trajectory traj = run(initial, cfg.params, cfg.step, cfg.monitors);

  const fs::path csv = out / "timeseries.csv";
  fs::remove(csv);
  for (const auto& r : traj.records) append_timeseries(r, csv.string());
  write_snapshot(initial, (out / "initial.snap").string());
  write_snapshot(traj.final_state, (out / "final.snap").string());
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "snap_%03zu.snap", i);
    write_snapshot(traj.snapshots[i], (out / name).string());
  }
  {
    std::FILE* f = std::fopen((out / "config.used").string().c_str(), "w");
    if (f) {
      std::fputs(format_config(cfg).c_str(), f);
      std::fclose(f);
    }
  }
  const DiagnosticsRecord& last = traj.records.back();
  std::printf("steps %ld  t = %.6g  energy %.9g  min gamma %.6g  min rho %.6g\n", traj.steps,
              traj.final_state.time, last.energy, last.min_gamma, last.min_rho);
  std::printf("wrote %s (%zu rows)\n", csv.string().c_str(), traj.records.size());
  return kOk;
}

void print_history(const PicardHistory& h) {
  std::printf("%5s %14s %14s %14s %14s %12s\n", "iter", "|u|_X", "|sigma|_Y", "|rho|_Z",
              "rel. diff", "ratio");
  for (std::size_t i = 0; i < h.differences.size(); ++i) {
    const CompositeNorm& n = h.norms[i + 1];
    const double ratio = i >= 1 ? h.ratios[i - 1] : std::nan("");
    std::printf("%5zu %14.6e %14.6e %14.6e %14.6e %12.4g\n", i + 1, n.u, n.sigma, n.rho,
                h.relative[i], ratio);
  }
}

int cmd_picard(const std::string& config_path, double t0, bool compare) {
  RunConfig cfg = load_config(config_path);
  cfg.picard.t0 = t0;
  cfg.picard.validate();
  const SimState initial = build_initial(cfg);
  try {
    const PicardResult res = picard_iterate(initial, cfg.params, cfg.picard);
    print_history(res.history);
    std::printf("converged after %d iterations\n", res.history.iterations());
    if (res.history.iterations() >= 2)
      std::printf("contraction estimate %.6g\n", contraction_estimate(res.history));
    if (compare) {
      const double dt = std::min(cfg.step.dt_max, 1e-3);
      const FieldAgreement a = compare_with_stepper(res, initial, cfg.params, dt);
      std::printf("relative L2 mismatch vs stepper (dt=%g): u %.3e  a %.3e  b %.3e  c %.3e  rho %.3e\n",
                  dt, a.u, a.a, a.b, a.c, a.rho);
    }
    return kOk;
  } catch (const PicardNonConvergence& e) {
    print_history(e.history());
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  }
}

int cmd_check(const std::string& config_path) {
  const RunConfig cfg = load_config(config_path);
  const CheckReport rep = run_checks(cfg, [](const CheckResult& r) {
    std::printf("%s  %-12s %s: %s\n", r.pass ? "PASS" : "FAIL", r.module.c_str(), r.name.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
  });
  std::size_t failed = 0;
  for (const auto& r : rep.results) failed += !r.pass;
  std::printf("%zu checks, %zu failed\n", rep.results.size(), failed);
  return rep.pass() ? kOk : kMonitor;
}

int cmd_bounds(const std::string& config_path, const std::string& traj_path) {
  const RunConfig cfg = load_config(config_path);
  const SimState initial = build_initial(cfg);
  const BoundLedger ledger = apriori_ledger(initial, cfg.params, cfg.step.t_end, cfg.generic_C);
  std::printf("bound ledger at T = %.6g (%s)\n", ledger.T, ledger.constant_policy.c_str());
  for (std::size_t i = 0; i < ledger.values.size(); ++i)
    std::printf("  %-3s %24.17g  [%s]\n", BoundLedger::kNames[i], ledger.values[i],
                ledger.units[i].str().c_str());
  if (ledger.overflowed) std::printf("  (some entries overflowed to +inf)\n");
  if (traj_path.empty()) return kOk;

  const auto records = read_timeseries(traj_path);
  const BoundCheckReport rep = bound_check(records, ledger, cfg.params);
  std::printf("bound check on %s (%zu records)\n", traj_path.c_str(), records.size());
  for (const auto& row : rep.rows) {
    if (std::isnan(row.observed)) {
      std::printf("  %-14s unavailable\n", row.name.c_str());
      continue;
    }
    std::printf("  %-14s observed %.9g  bound %.9g  ratio %.6g  %s%s\n", row.name.c_str(),
                row.observed, row.bound, row.ratio, row.pass ? "ok" : "EXCEEDED",
                row.hard ? " (hard)" : "");
  }
  return rep.pass ? kOk : kMonitor;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral 2D diffusive Oldroyd-B solver"};
  app.require_subcommand(1);

  std::string config, out_dir, traj;
  double t0 = 0.0;
  bool compare = false;

  auto* run_cmd = app.add_subcommand("run", "integrate a configuration and write outputs");
  run_cmd->add_option("--config", config, "config file")->required();
  run_cmd->add_option("--out-dir", out_dir, "output directory (overrides out_dir)");

  auto* picard_cmd = app.add_subcommand("picard", "solve the integral form by fixed-point iteration");
  picard_cmd->add_option("--config", config, "config file")->required();
  picard_cmd->add_option("--t0", t0, "horizon in seconds")->required();
  picard_cmd->add_flag("--compare", compare, "compare the limit with the time stepper");

  auto* check_cmd = app.add_subcommand("check", "run the invariant suite");
  check_cmd->add_option("--config", config, "config file")->required();

  auto* bounds_cmd = app.add_subcommand("bounds", "print the bound ledger");
  bounds_cmd->add_option("--config", config, "config file")->required();
  bounds_cmd->add_option("--traj", traj, "time-series CSV of an existing run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd) return cmd_run(config, out_dir);
    if (*picard_cmd) return cmd_picard(config, t0, compare);
    if (*check_cmd) return cmd_check(config);
    if (*bounds_cmd) return cmd_bounds(config, traj);
  } catch (const MonitorViolation& e) {
    std::fprintf(stderr, "monitor violation: %s\n", e.what());
    return kMonitor;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kConfig;
  } catch (const NumericalFailure& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  }
  return kConfig;
}
