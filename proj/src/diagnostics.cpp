#include "oldb2d/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oldb2d/dynamics.hpp"

namespace oldb2d {

double DiagnosticsRecord::norm(const std::string& name) const {
  auto it = norms.find(name);
  return it == norms.end() ? kNaN : it->second.value;
}

EnergyLedger energy_ledger(const SimState& state, const PhysParams& params) {
  const VectorSpectrum uh = forward(state.u);
  const double u_sq = l2_norm_sq(uh.x) + l2_norm_sq(uh.y);
  const double grad_sq = grad_norm_sq(uh.x) + grad_norm_sq(uh.y);
  const double trace = state.stress.c.integral();
  const double kK = params.k * params.bigK;
  return {u_sq + params.bigK * trace, 2.0 * params.nu * grad_sq + 2.0 * kK * trace,
          4.0 * kK * state.rho.integral()};
}

DiagnosticsRecord diagnose(const SimState& state, const PhysParams& params,
                           const DiagnoseOptions& opts) {
  DiagnosticsRecord r;
  r.time = state.time;
  const EnergyLedger e = energy_ledger(state, params);
  r.energy = e.energy;
  r.dissipation = e.dissipation;
  r.source = e.source;
  r.min_eigenvalue = min_eigenvalue(state.stress).min();
  r.min_gamma = gamma_field(state.stress).min();
  r.min_rho = state.rho.min();
  r.c_max = state.stress.c.max();
  r.norms = norms(state);
  if (opts.momentum_residual) {
    const SpectralState s = to_spectral(state);
    VectorSpectrum du = explicit_tendency(s, params).u;
    du += linear_tendency(s, params).u;
    r.momentum_residual = std::sqrt(l2_norm_sq(divergence(du)));
  }
  return r;
}

PositivityReport positivity_report(const SimState& state, double tol) {
  PositivityReport p;
  p.tol = tol;
  p.min_c = state.stress.c.min();
  p.min_gamma = gamma_field(state.stress).min();
  p.min_eigenvalue = min_eigenvalue(state.stress).min();
  p.min_rho = state.rho.min();
  p.scale = positivity_scale(state.stress);
  const double floor = -tol * p.scale;
  const double rho_floor = -tol * std::max(1.0, state.rho.max());
  p.pass = p.min_c >= floor && p.min_gamma >= floor && p.min_eigenvalue >= floor &&
           p.min_rho >= rho_floor;
  return p;
}

// ---- ledger --------------------------------------------------------------------

BoundInputs<Quantity> bound_inputs(const SimState& initial, const PhysParams& params, double T,
                                   double generic_constant) {
  const NormReport n = norms(initial);
  const Dim cm = Dim::cm();
  const Dim sec = Dim::sec();
  const Dim diffusivity = cm * cm / sec;
  auto sq = [&](const char* key) {
    const NormEntry& e = n.at(key);
    return Quantity(e.value * e.value, e.units * e.units);
  };
  auto val = [&](const char* key) {
    const NormEntry& e = n.at(key);
    return Quantity(e.value, e.units);
  };
  BoundInputs<Quantity> in;
  in.nu = {params.nu, diffusivity};
  in.kappa = {params.kappa, diffusivity};
  in.k = {params.k, Dim::none() / sec};
  in.bigK = {params.bigK, cm * cm / (sec * sec)};
  in.T = {T, sec};
  in.u0_L2_sq = sq("u_L2");
  in.sigma0_L1 = val("sigma_L1");
  in.sigma0_L2_sq = sq("sigma_L2");
  in.grad_sigma0_sq = sq("grad_sigma_L2");
  in.rho0_L1 = val("rho_L1");
  in.rho0_L2_sq = sq("rho_L2");
  in.rho0_W12 = val("rho_W12");
  in.omega0_L2_sq = sq("omega_L2");
  in.grad_omega0_sq = sq("grad_omega_L2");
  in.C = {generic_constant};
  return in;
}

BoundLedger apriori_ledger(const SimState& initial, const PhysParams& params, double T,
                           double generic_constant) {
  if (!(T > 0.0)) throw std::invalid_argument("bound horizon T must be positive");
  const BoundValues<Quantity> v = evaluate_bounds(bound_inputs(initial, params, T, generic_constant));
  BoundLedger ledger;
  ledger.T = T;
  ledger.generic_constant = generic_constant;
  ledger.constant_policy = "generic C = " + std::to_string(generic_constant) +
                           " for every unspecified constant";
  const std::array<const Quantity*, 7> q{&v.R0, &v.R1, &v.R2, &v.B, &v.R3, &v.R4, &v.R5};
  for (std::size_t i = 0; i < q.size(); ++i) {
    double x = q[i]->value;
    if (!std::isfinite(x)) {
      x = std::numeric_limits<double>::infinity();
      ledger.overflowed = true;
    }
    ledger.values[i] = x;
    ledger.units[i] = q[i]->dim;
  }
  return ledger;
}

// ---- bound check -------------------------------------------------------------------

namespace {

// sup_t a(t) + w · ∫₀ᵀ b(t)² dt over the records; NaN if any value is missing.
double sup_plus_integral(std::span<const DiagnosticsRecord> rec, const char* sup_key,
                         const char* int_key, double weight) {
  double sup = 0.0;
  double integral = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const double a = rec[i].norm(sup_key);
    const double b = rec[i].norm(int_key);
    if (std::isnan(a) || std::isnan(b)) return kNaN;
    sup = std::max(sup, a * a);
    if (i > 0) {
      const double b0 = rec[i - 1].norm(int_key);
      integral += 0.5 * (rec[i].time - rec[i - 1].time) * (b0 * b0 + b * b);
    }
  }
  return sup + weight * integral;
}

}  // namespace

double energy_inequality_lhs(std::span<const DiagnosticsRecord> rec, const PhysParams& params) {
  double lhs = 0.0;
  double integral = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const double g = rec[i].norm("grad_u_L2");
    if (std::isnan(g)) return kNaN;
    if (i > 0) {
      const double g0 = rec[i - 1].norm("grad_u_L2");
      integral += 0.5 * (rec[i].time - rec[i - 1].time) * (g0 * g0 + g * g);
    }
    lhs = std::max(lhs, rec[i].energy + 2.0 * params.nu * integral);
  }
  return lhs;
}

double energy_rate_defect(std::span<const DiagnosticsRecord> rec) {
  if (rec.size() < 2) throw std::invalid_argument("energy rate defect needs two records");
  double worst = -INFINITY;
  for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
    const double dt = rec[i + 1].time - rec[i].time;
    worst = std::max(worst, (rec[i + 1].energy - rec[i].energy) / dt + rec[i].dissipation -
                                rec[0].source);
  }
  return worst;
}

BoundCheckReport bound_check(std::span<const DiagnosticsRecord> records, const BoundLedger& ledger,
                             const PhysParams& params) {
  BoundCheckReport report;
  auto add = [&](std::string name, double observed, double bound, bool hard) {
    BoundRow row{std::move(name), observed, bound, kNaN, hard, true};
    if (!std::isnan(observed)) {
      row.ratio = bound > 0.0 ? observed / bound : (observed > 0.0 ? INFINITY : 0.0);
      const double slack = hard ? kEnergyQuadratureTol * std::abs(bound) : 0.0;
      row.pass = observed <= bound + slack;
    }
    report.rows.push_back(row);
  };

  add("eniq", energy_inequality_lhs(records, params), ledger.R0(), true);
  add("sigma_L2", sup_plus_integral(records, "sigma_L2", "grad_sigma_L2", params.kappa),
      ledger.R1(), false);
  add("omega_L2", sup_plus_integral(records, "omega_L2", "grad_omega_L2", params.nu), ledger.R2(),
      false);
  add("grad_sigma_L2", sup_plus_integral(records, "grad_sigma_L2", "lap_sigma_L2", params.kappa),
      ledger.R3(), false);
  add("grad_omega_L2", sup_plus_integral(records, "grad_omega_L2", "lap_omega_L2", params.nu),
      ledger.R4(), false);
  double rho_sup = 0.0;
  for (const auto& r : records) {
    const double v = r.norm("rho_W12");
    rho_sup = std::isnan(v) || std::isnan(rho_sup) ? kNaN : std::max(rho_sup, v);
  }
  add("rho_W12", rho_sup, ledger.R5(), false);

  for (const auto& row : report.rows)
    if (row.hard && !row.pass) report.pass = false;
  return report;
}

double determinant_residual(std::span<const SimState> window, const PhysParams& params,
                            ResidualMode mode) {
  if (window.size() != 3) throw std::invalid_argument("determinant residual needs 3 states");
  if (params.kappa != 0.0 && mode == ResidualMode::strict)
    throw std::invalid_argument("determinant law holds only for kappa = 0");
  const double t0 = window[0].time;
  const double t1 = window[1].time;
  const double t2 = window[2].time;
  const double h1 = t1 - t0;
  const double h2 = t2 - t1;
  if (!(h1 > 0.0) || !(h2 > 0.0)) throw std::invalid_argument("window times must increase");

  const ScalarField d0 = determinant(window[0].stress);
  const ScalarField d1 = determinant(window[1].stress);
  const ScalarField d2 = determinant(window[2].stress);
  const double w0 = -h2 / (h1 * (h1 + h2));
  const double w1 = (h2 - h1) / (h1 * h2);
  const double w2 = h1 / (h2 * (h1 + h2));

  PhysParams frozen = params;
  frozen.kappa = 0.0;
  ScalarField r = determinant_rhs(window[1], frozen);
  auto rv = r.values();
  auto a = d0.values();
  auto b = d1.values();
  auto c = d2.values();
  for (std::size_t i = 0; i < rv.size(); ++i) rv[i] = w0 * a[i] + w1 * b[i] + w2 * c[i] - rv[i];
  return l2_norm(r);
}

}  // namespace oldb2d
