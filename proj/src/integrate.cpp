#include "oldb2d/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>

#include "oldb2d/errors.hpp"

namespace oldb2d {

void StepControl::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("invariant violated: 0 < cfl <= 1");
  if (!(dt_min > 0.0)) throw ConfigError("invariant violated: dt_min > 0");
  if (!(dt_min <= dt_max)) throw ConfigError("invariant violated: dt_min <= dt_max");
  if (!(t_end >= 0.0)) throw ConfigError("invariant violated: t_end >= 0");
  if (output_every < 1) throw ConfigError("invariant violated: output_every >= 1");
}

namespace {

double advective_dt(const SimState& state, const StepControl& ctl) {
  double umax = 0.0;
  auto u1 = state.u.x.values();
  auto u2 = state.u.y.values();
  for (std::size_t i = 0; i < u1.size(); ++i) umax = std::max(umax, std::hypot(u1[i], u2[i]));
  return ctl.cfl * state.grid().spacing() / std::max(umax, kSpeedFloor);
}

}  // namespace

double compute_dt(const SimState& state, const PhysParams&, const StepControl& ctl) {
  return std::clamp(advective_dt(state, ctl), ctl.dt_min, ctl.dt_max);
}

SpectralState advance(const SpectralState& s, const PhysParams& params,
                      const LinearPropagator& full, const LinearPropagator& half,
                      const LinearPropagator& back_half) {
  const double dt = full.h();

  SpectralState s1 = s;
  s1.axpy(dt, explicit_tendency(s, params));
  full.apply(s1);

  SpectralState s2 = s;
  half.apply(s2);
  s2 *= 0.75;
  {
    SpectralState t = s1;
    t.axpy(dt, explicit_tendency(s1, params));
    back_half.apply(t);
    s2.axpy(0.25, t);
  }

  SpectralState s3 = s;
  full.apply(s3);
  s3 *= 1.0 / 3.0;
  {
    SpectralState t = s2;
    t.axpy(dt, explicit_tendency(s2, params));
    half.apply(t);
    s3.axpy(2.0 / 3.0, t);
  }
  s3.u = leray_project(s3.u);
  s3.time = s.time + dt;
  return s3;
}

SpectralState advance(const SpectralState& s, double dt, const PhysParams& params) {
  const SpectralGrid& g = s.grid();
  return advance(s, params, LinearPropagator(g, params, dt), LinearPropagator(g, params, 0.5 * dt),
                 LinearPropagator(g, params, -0.5 * dt));
}

SimState step(const SimState& state, double dt, const PhysParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!is_admissible(state)) {
    throw MonitorViolation("positivity", state.time, gamma_field(state.stress).min(),
                           "input state is not admissible");
  }
  return to_physical(advance(to_spectral(state), dt, params));
}

namespace {

struct Propagators {
  double dt = -1.0;
  std::optional<LinearPropagator> full, half, back_half;

  void ensure(const SpectralGrid& g, const PhysParams& p, double h) {
    if (h == dt) return;
    dt = h;
    full.emplace(g, p, h);
    half.emplace(g, p, 0.5 * h);
    back_half.emplace(g, p, -0.5 * h);
  }
};

bool finite_state(const SimState& s) {
  return s.u.x.all_finite() && s.u.y.all_finite() && s.stress.a.all_finite() &&
         s.stress.b.all_finite() && s.stress.c.all_finite() && s.rho.all_finite();
}

void check_monitors(const SimState& s, const MonitorSet& m) {
  if (!finite_state(s)) throw NumericalFailure("non-finite value at t=" + std::to_string(s.time));
  const double cmax = s.stress.c.max_abs();
  if (cmax > m.c_ceiling)
    throw NumericalFailure("sup |c| = " + std::to_string(cmax) + " exceeds ceiling at t=" +
                           std::to_string(s.time));
  const double scale = positivity_scale(s.stress);
  const double floor = -m.positivity_tol * scale;
  const double min_eig = min_eigenvalue(s.stress).min();
  if (min_eig < floor || s.stress.c.min() < floor)
    throw MonitorViolation("positivity", s.time, min_eig,
                           "min eigenvalue " + std::to_string(min_eig) + " below " +
                               std::to_string(floor));
  const double rho_min = s.rho.min();
  if (rho_min < -m.positivity_tol * std::max(1.0, s.rho.max()))
    throw MonitorViolation("positivity", s.time, rho_min,
                           "min rho " + std::to_string(rho_min) + " negative");
  const double min_gamma = gamma_field(s.stress).min();
  if (min_gamma < floor)
    throw MonitorViolation("gamma", s.time, min_gamma,
                           "min gamma " + std::to_string(min_gamma) + " below " +
                               std::to_string(floor));
}

}  // namespace

Trajectory run(const SimState& initial, const PhysParams& params, const StepControl& ctl,
               const MonitorSet& monitors) {
  params.validate();
  ctl.validate();
  check_monitors(initial, monitors);

  const SpectralGrid& grid = initial.grid();
  const double t0 = initial.time;
  std::vector<double> stops = ctl.snapshot_times;
  std::sort(stops.begin(), stops.end());
  std::erase_if(stops, [&](double t) { return t <= t0 || t > ctl.t_end; });
  stops.push_back(ctl.t_end);
  std::size_t next_stop = 0;
  const double eps = 1e-12 * std::max(1.0, std::abs(ctl.t_end));

  Trajectory traj{{}, {}, initial, 0};
  DiagnoseOptions recorded_opts;

  DiagnosticsRecord rec0 = diagnose(initial, params, recorded_opts);
  const double energy0 = rec0.energy;
  const double rho_integral0 = initial.rho.integral();
  double grad_prev = rec0.norm("grad_u_L2");
  double dissipated = 0.0;
  traj.records.push_back(rec0);

  // κ = 0: keep a three-state window to evaluate the determinant law.
  const bool track_determinant = params.kappa == 0.0;
  std::deque<std::pair<SimState, long>> window;  // (state, record index or -1)
  if (track_determinant) window.emplace_back(initial, 0);

  SpectralState s = to_spectral(initial);
  SimState current = initial;
  Propagators props;
  long steps = 0;

  while (next_stop < stops.size()) {
    const double stop = stops[next_stop];
    if (stop - s.time <= eps) {
      if (stop != ctl.t_end || next_stop + 1 == stops.size()) {
        if (stop != ctl.t_end || std::find(ctl.snapshot_times.begin(), ctl.snapshot_times.end(),
                                           stop) != ctl.snapshot_times.end())
          traj.snapshots.push_back(current);
      }
      ++next_stop;
      continue;
    }
    const double raw = advective_dt(current, ctl);
    if (raw < ctl.dt_min)
      throw NumericalFailure("time step underflow: CFL step " + std::to_string(raw) +
                             " below dt_min at t=" + std::to_string(s.time));
    double dt = std::clamp(raw, ctl.dt_min, ctl.dt_max);
    if (s.time + dt > stop - eps) dt = stop - s.time;
    props.ensure(grid, params, dt);
    s = advance(s, params, *props.full, *props.half, *props.back_half);
    if (std::abs(s.time - stop) <= eps) s.time = stop;
    ++steps;

    current = to_physical(s);
    check_monitors(current, monitors);

    const bool store = steps % ctl.output_every == 0;
    DiagnosticsRecord rec;
    if (store) rec = diagnose(current, params, recorded_opts);
    const double grad = std::sqrt(grad_norm_sq(s.u.x) + grad_norm_sq(s.u.y));
    const double energy = l2_norm_sq(s.u.x) + l2_norm_sq(s.u.y) +
                          params.bigK * s.stress.c.mean().real() * grid.area();
    dissipated += 0.5 * dt * (grad_prev * grad_prev + grad * grad);
    grad_prev = grad;
    const double lhs = energy + 2.0 * params.nu * dissipated;
    const double rhs =
        energy0 + 4.0 * params.k * params.bigK * (s.time - t0) * rho_integral0;
    if (lhs > rhs + monitors.energy_tol * std::max(std::abs(rhs), 1e-300))
      throw MonitorViolation("energy", s.time, lhs - rhs,
                             "pathwise energy inequality exceeded by " +
                                 std::to_string(lhs - rhs));

    long index = -1;
    if (store) {
      index = static_cast<long>(traj.records.size());
      traj.records.push_back(std::move(rec));
    }
    if (track_determinant) {
      window.emplace_back(current, index);
      if (window.size() > 3) window.pop_front();
      if (window.size() == 3 && window[1].second >= 0) {
        const std::array<SimState, 3> w{window[0].first, window[1].first, window[2].first};
        traj.records[window[1].second].determinant_residual = determinant_residual(w, params);
      }
    }
  }
  traj.final_state = std::move(current);
  traj.steps = steps;
  return traj;
}

}  // namespace oldb2d
