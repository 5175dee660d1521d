#pragma once

#include <vector>

#include "oldb2d/diagnostics.hpp"
#include "oldb2d/dynamics.hpp"
#include "oldb2d/fields.hpp"

namespace oldb2d {

struct StepControl {
  double cfl = 0.5;
  double dt_min = 1e-8;
  double dt_max = 5e-3;
  double t_end = 1.0;
  int output_every = 1;
  /// Times at which full snapshots are kept; steps are shortened to land on them.
  std::vector<double> snapshot_times;

  /// Throws ConfigError on 0 < cfl ≤ 1, dt_min ≤ dt_max, output_every ≥ 1 violations.
  void validate() const;
};

/// Runtime monitor thresholds.
struct MonitorSet {
  double positivity_tol = 1e-8;  ///< relative to max(1, sup c)
  double energy_tol = 1e-6;      ///< relative slack on the pathwise energy inequality
  double c_ceiling = 1e12;       ///< blow-up guard on ‖c‖_∞
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  std::vector<SimState> snapshots;
  SimState final_state;
  long steps = 0;
};

/// Smallest velocity magnitude used in the advective time-step bound.
inline constexpr double kSpeedFloor = 1e-12;

/// clamp(cfl · h / max(‖u‖_∞, floor), dt_min, dt_max).
double compute_dt(const SimState& state, const PhysParams& params, const StepControl& ctl);

/// One integrating-factor SSP-RK3 step: νΔ on u and (κΔ - 2k, +4kρ) on
/// (a, b, c) are propagated exactly, transport/stretching/coupling are explicit.
/// The velocity is re-projected afterwards. Throws MonitorViolation for a
/// non-admissible input and std::invalid_argument for dt ≤ 0.
SimState step(const SimState& state, double dt, const PhysParams& params);

/// Unchecked spectral step, used by the driver loops.
SpectralState advance(const SpectralState& s, double dt, const PhysParams& params);
SpectralState advance(const SpectralState& s, const PhysParams& params,
                      const LinearPropagator& full, const LinearPropagator& half,
                      const LinearPropagator& back_half);

/// Integrates to ctl.t_end, recording diagnostics every output_every steps
/// (always including t = 0). Monitors are checked every step in the order
/// NaN, positivity, γ, energy; the first failure is raised. NaN, overflow of
/// the c ceiling and step-size underflow raise NumericalFailure, the others
/// MonitorViolation.
Trajectory run(const SimState& initial, const PhysParams& params, const StepControl& ctl,
               const MonitorSet& monitors = {});

}  // namespace oldb2d
