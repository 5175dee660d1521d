#include "oldb2d/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <cstring>
#include <random>
#include <tuple>

#include <unistd.h>

#include "oldb2d/diagnostics.hpp"
#include "oldb2d/dynamics.hpp"
#include "oldb2d/errors.hpp"
#include "oldb2d/initial.hpp"
#include "oldb2d/integrate.hpp"
#include "oldb2d/picard.hpp"
#include "oldb2d/snapshot.hpp"
#include "oldb2d/timeseries.hpp"

namespace oldb2d {

bool CheckReport::pass() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

namespace {

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

ScalarField noise(const SpectralGrid& g, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  ScalarField f(g);
  for (double& v : f.values()) v = dist(rng);
  return f;
}

double max_abs(std::span<const Complex> c) {
  double m = 0.0;
  for (const auto& z : c) m = std::max(m, std::abs(z));
  return m;
}

double rel_diff(const Spectrum& a, const Spectrum& b) {
  const double ref = std::sqrt(l2_norm_sq(b));
  const double d = std::sqrt(l2_norm_sq(a - b));
  return ref > 0.0 ? d / ref : d;
}

double vec_norm(const VectorSpectrum& v) { return std::sqrt(l2_norm_sq(v.x) + l2_norm_sq(v.y)); }

VectorSpectrum vec_diff(VectorSpectrum a, const VectorSpectrum& b) {
  a.axpy(-1.0, b);
  return a;
}

double stress_norm(const StressSpectrum& s) {
  return std::sqrt(l2_norm_sq(s.a) + l2_norm_sq(s.b) + l2_norm_sq(s.c));
}

StressSpectrum stress_diff(StressSpectrum a, const StressSpectrum& b) {
  a.axpy(-1.0, b);
  return a;
}

template <class T, class Norm, class Diff>
double series_rel(const std::vector<T>& a, const std::vector<T>& b, Norm norm, Diff diff) {
  double d = 0.0, ref = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    d = std::max(d, norm(diff(a[j], b[j])));
    ref = std::max(ref, norm(b[j]));
  }
  return ref > 0.0 ? d / ref : d;
}

// Fixed-step integration with a diagnostics record after every step.
std::vector<DiagnosticsRecord> fixed_step_records(const SimState& initial, const PhysParams& p,
                                                  double dt, double T) {
  const long steps = std::max(1L, std::lround(T / dt));
  const SpectralGrid& g = initial.grid();
  const LinearPropagator full(g, p, dt), half(g, p, 0.5 * dt), back(g, p, -0.5 * dt);
  DiagnoseOptions opts;
  opts.momentum_residual = false;
  std::vector<DiagnosticsRecord> out{diagnose(initial, p, opts)};
  SpectralState s = to_spectral(initial);
  for (long i = 0; i < steps; ++i) {
    s = advance(s, p, full, half, back);
    out.push_back(diagnose(to_physical(s), p, opts));
  }
  return out;
}

SpectralState fixed_step_state(const SimState& initial, const PhysParams& p, double dt, long steps) {
  const SpectralGrid& g = initial.grid();
  const LinearPropagator full(g, p, dt), half(g, p, 0.5 * dt), back(g, p, -0.5 * dt);
  SpectralState s = to_spectral(initial);
  for (long i = 0; i < steps; ++i) s = advance(s, p, full, half, back);
  return s;
}

double state_distance(const SpectralState& a, const SpectralState& b) {
  SpectralState d = a;
  d.axpy(-1.0, b);
  return std::sqrt(l2_norm_sq(d.u.x) + l2_norm_sq(d.u.y) + l2_norm_sq(d.stress.a) +
                   l2_norm_sq(d.stress.b) + l2_norm_sq(d.stress.c) + l2_norm_sq(d.rho));
}

bool bitwise_equal(const SimState& a, const SimState& b) {
  auto same = [](const ScalarField& x, const ScalarField& y) {
    return std::equal(x.values().begin(), x.values().end(), y.values().begin(), y.values().end(),
                      [](double p, double q) { return std::memcmp(&p, &q, sizeof p) == 0; });
  };
  return a.time == b.time && same(a.u.x, b.u.x) && same(a.u.y, b.u.y) &&
         same(a.stress.a, b.stress.a) && same(a.stress.b, b.stress.b) &&
         same(a.stress.c, b.stress.c) && same(a.rho, b.rho);
}

}  // namespace

CheckReport run_checks(const RunConfig& cfg, const std::function<void(const CheckResult&)>& progress) {
  cfg.validate();
  CheckReport report;
  auto check = [&](const char* module, const char* name, auto&& body) {
    CheckResult r{module, name, false, ""};
    try {
      std::tie(r.pass, r.detail) = body();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (progress) progress(r);
    report.results.push_back(std::move(r));
  };

  const SpectralGrid g = make_grid(cfg.n, cfg.L);
  const PhysParams& p = cfg.params;
  std::mt19937_64 rng(cfg.initial.seed ^ 0x5eed5eedULL);
  const SimState initial = build_initial(cfg, g);
  const int smooth_band = std::max(1, cfg.n / 8);

  // ---- spectral core ----
  check("spectral", "projector divergence-free and idempotent", [&] {
    const VectorField v{noise(g, rng), noise(g, rng)};
    const VectorSpectrum vh = forward(v);
    const VectorSpectrum pv = leray_project(vh);
    const double ref = std::sqrt(l2_norm_sq(vh.x) + l2_norm_sq(vh.y));
    const double div = max_abs(divergence(pv).coeffs());
    const double idem = vec_norm(vec_diff(leray_project(pv), pv));
    return std::pair{div <= 1e-13 * ref && idem <= 1e-13 * ref,
                     fmt("max |div P v| = %.3g, |PPv - Pv| = %.3g", div, idem)};
  });
  check("spectral", "differentiation exact on retained modes", [&] {
    // f = Σ A cos(k·x) + B sin(k·x) over a few retained modes; derivative by hand.
    std::normal_distribution<double> nd;
    struct Mode { int kx, ky; double A, B; };
    std::vector<Mode> modes;
    const int kmax = cfg.n / 3;
    std::uniform_int_distribution<int> pick(-kmax, kmax);
    for (int i = 0; i < 8; ++i) modes.push_back({std::abs(pick(rng)), pick(rng), nd(rng), nd(rng)});
    const double w = 2.0 * M_PI / g.length();
    auto f = ScalarField::from_function(g, [&](double x, double y) {
      double s = 0.0;
      for (const auto& m : modes) {
        const double ph = w * (m.kx * x + m.ky * y);
        s += m.A * std::cos(ph) + m.B * std::sin(ph);
      }
      return s;
    });
    double worst = 0.0;
    for (Axis ax : {Axis::x, Axis::y}) {
      auto exact = ScalarField::from_function(g, [&](double x, double y) {
        double s = 0.0;
        for (const auto& m : modes) {
          const double ph = w * (m.kx * x + m.ky * y);
          const double kk = w * (ax == Axis::x ? m.kx : m.ky);
          s += kk * (-m.A * std::sin(ph) + m.B * std::cos(ph));
        }
        return s;
      });
      const ScalarField d = ddx(f, ax);
      worst = std::max(worst, (d - exact).max_abs() / std::max(exact.max_abs(), 1e-300));
    }
    return std::pair{worst <= 1e-13, fmt("max relative error %.3g", worst)};
  });
  check("spectral", "heat semigroup law", [&] {
    const Spectrum f = noise(g, rng).forward();
    const Spectrum once = heat_semigroup(f, 0.01, 1.0, 0.9);
    const Spectrum twice = heat_semigroup(heat_semigroup(f, 0.01, 1.0, 0.4), 0.01, 1.0, 0.5);
    const double e = rel_diff(twice, once);
    return std::pair{e <= 1e-13, fmt("relative difference %.3g", e)};
  });
  check("spectral", "Parseval", [&] {
    const ScalarField f = noise(g, rng);
    const double spectral = std::sqrt(l2_norm_sq(f.forward()));
    const double real = l2_norm(f);
    const double e = std::abs(spectral - real) / real;
    return std::pair{e <= 1e-12, fmt("relative difference %.3g", e)};
  });

  // ---- fields ----
  check("fields", "gamma sign agrees with trace/determinant test", [&] {
    const StressField s{noise(g, rng), noise(g, rng), noise(g, rng, -1.0, 3.0)};
    const ScalarField gamma = gamma_field(s);
    const ScalarField det = determinant(s);
    long disagree = 0;
    for (std::size_t i = 0; i < g.real_size(); ++i) {
      const bool by_gamma = gamma.values()[i] >= 0.0;
      const bool by_det = s.c.values()[i] >= 0.0 && det.values()[i] >= 0.0;
      disagree += by_gamma != by_det;
    }
    return std::pair{disagree == 0, fmt("%.0f disagreeing points", static_cast<double>(disagree))};
  });
  check("fields", "trace dominates off-diagonal magnitude", [&] {
    double lhs = 0.0, rhs = 0.0;
    auto a = initial.stress.a.values();
    auto b = initial.stress.b.values();
    auto c = initial.stress.c.values();
    for (std::size_t i = 0; i < c.size(); ++i) {
      lhs += c[i];
      rhs += 2.0 * std::hypot(a[i], b[i]);
    }
    return std::pair{lhs >= rhs, fmt("int c = %.6g, 2 int |(a,b)| = %.6g", lhs * g.cell_area(),
                                     rhs * g.cell_area())};
  });
  check("fields", "spectral and real-space norms agree", [&] {
    const NormReport n = norms(initial);
    const double u_real = l2_norm(initial.u);
    double s2 = 0.0;
    auto a = initial.stress.a.values();
    auto b = initial.stress.b.values();
    auto c = initial.stress.c.values();
    for (std::size_t i = 0; i < c.size(); ++i) s2 += 0.5 * c[i] * c[i] + 2.0 * (a[i] * a[i] + b[i] * b[i]);
    const double sigma_real = std::sqrt(s2 * g.cell_area());
    const double e = std::max(std::abs(n.at("u_L2").value - u_real) / std::max(u_real, 1e-300),
                              std::abs(n.at("sigma_L2").value - sigma_real) / sigma_real);
    return std::pair{e <= 1e-12, fmt("max relative difference %.3g", e)};
  });

  // ---- dynamics ----
  check("dynamics", "determinant law cancellation (kappa = 0)", [&] {
    SmoothSpec spec;
    spec.band = smooth_band;
    spec.seed = cfg.initial.seed;
    spec.u_amp = 0.5;
    spec.stress_amp = 0.3;
    spec.c_amp = 0.2;
    const SimState s = smooth_admissible(g, spec);
    PhysParams p0 = p;
    p0.kappa = 0.0;
    const StressRhs r = stress_rhs(s, p0);
    const ScalarField d = determinant_rhs(s, p0);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.real_size(); ++i) {
      const double lhs = 0.5 * s.stress.c.values()[i] * r.dc.values()[i] -
                         2.0 * s.stress.a.values()[i] * r.da.values()[i] -
                         2.0 * s.stress.b.values()[i] * r.db.values()[i];
      worst = std::max(worst, std::abs(lhs - d.values()[i]));
    }
    return std::pair{worst <= 1e-10, fmt("max pointwise residual %.3g", worst)};
  });
  check("dynamics", "energy-rate identity and cubic cancellation", [&] {
    const SpectralState s = to_spectral(initial);
    const VectorField m = momentum_rhs(initial, p);
    const StressRhs r = stress_rhs(initial, p);
    const double lhs = 2.0 * inner(forward(initial.u).x, m.x.forward()) +
                       2.0 * inner(forward(initial.u).y, m.y.forward()) + p.bigK * r.dc.integral();
    const double visc = 2.0 * p.nu * (grad_norm_sq(s.u.x) + grad_norm_sq(s.u.y));
    const double relax = 2.0 * p.k * p.bigK * initial.stress.c.integral();
    const double src = 4.0 * p.k * p.bigK * initial.rho.integral();
    const double rhs = -visc - relax + src;
    const double scale = std::max({1.0, visc, relax, src});
    const SpectralState t = explicit_tendency(s, p);
    const double cubic = 2.0 * (inner(s.u.x, t.u.x) + inner(s.u.y, t.u.y)) +
                         p.bigK * t.stress.c.mean().real() * g.area();
    return std::pair{lhs <= rhs + 1e-8 * scale && std::abs(cubic) <= 1e-9 * scale,
                     fmt("rate - bound = %.3g, cubic = %.3g", lhs - rhs, cubic)};
  });
  check("dynamics", "momentum tendency divergence-free", [&] {
    const VectorField m = momentum_rhs(initial, p);
    const double div = l2_norm(divergence(m));
    const double ref = std::max(1.0, l2_norm(m));
    return std::pair{div <= 1e-12 * ref, fmt("|div| = %.3g", div)};
  });
  check("dynamics", "transport terms have zero mean", [&] {
    const SpectralState s = to_spectral(initial);
    double worst = 0.0, scale = 1.0;
    for (const Spectrum* f : {&s.rho, &s.stress.a, &s.stress.b, &s.stress.c}) {
      const Spectrum adv = scalar_advection(s.u, *f);
      worst = std::max(worst, std::abs(adv.mean()));
      scale = std::max(scale, adv.backward().max_abs());
    }
    return std::pair{worst <= 1e-12 * scale, fmt("max |mean| = %.3g", worst)};
  });

  // ---- integrate ----
  Trajectory traj{{}, {}, initial, 0};
  bool run_ok = false;
  check("integrate", "monitored run to t_end", [&] {
    traj = run(initial, p, cfg.step, cfg.monitors);
    run_ok = true;
    return std::pair{true, fmt("%.0f steps, t = %.6g", static_cast<double>(traj.steps),
                               traj.final_state.time)};
  });
  check("integrate", "discrete positivity over the run", [&] {
    if (!run_ok) return std::pair{false, std::string("run failed")};
    double worst = INFINITY, sup_c = 1.0;
    for (const auto& r : traj.records) {
      worst = std::min(worst, r.min_eigenvalue);
      sup_c = std::max(sup_c, r.c_max);
    }
    return std::pair{worst >= -1e-8 * sup_c, fmt("min eigenvalue %.6g (scale %.6g)", worst, sup_c)};
  });
  check("integrate", "rho integrals conserved", [&] {
    if (!run_ok) return std::pair{false, std::string("run failed")};
    const double T = std::max(traj.final_state.time, 1e-300);
    const double m0 = initial.rho.integral();
    const double m1 = traj.final_state.rho.integral();
    const double q0 = multiply(initial.rho, initial.rho).integral();
    const double q1 = multiply(traj.final_state.rho, traj.final_state.rho).integral();
    const double dm = std::abs(m1 - m0) / std::max(std::abs(m0), 1e-300) / T;
    const double dq = std::abs(q1 - q0) / std::max(q0, 1e-300) / T;
    return std::pair{dm <= 1e-8 && dq <= 1e-8,
                     fmt("drift per unit time: int rho %.3g, int rho^2 %.3g", dm, dq)};
  });
  check("integrate", "temporal self-convergence order", [&] {
    const SpectralGrid g32 = make_grid(32, cfg.L);
    SmoothSpec spec;
    spec.seed = cfg.initial.seed;
    spec.u_amp = 0.5;
    spec.stress_amp = 0.3;
    spec.c_amp = 0.2;
    const SimState s = smooth_admissible(g32, spec);
    const double T = 0.4 / p.k;
    const double dt = T / 10;
    const SpectralState a = fixed_step_state(s, p, dt, 10);
    const SpectralState b = fixed_step_state(s, p, dt / 2, 20);
    const SpectralState c = fixed_step_state(s, p, dt / 4, 40);
    const double order = std::log2(state_distance(a, b) / state_distance(b, c));
    return std::pair{order >= 1.9, fmt("measured order %.3f", order)};
  });
  check("integrate", "discrete energy inequality up to O(dt)", [&] {
    const double T = std::min(cfg.step.t_end, 0.5);
    const double h = std::min(cfg.step.dt_max, 0.01);
    const double e1 = energy_rate_defect(fixed_step_records(initial, p, h, T));
    const double e2 = energy_rate_defect(fixed_step_records(initial, p, h / 2, T));
    // Richardson: the defect is C·dt + o(dt); a positive defect must shrink accordingly.
    const double c_disc = std::max(0.0, 2.0 * (e1 - e2) / h);
    const double scale = 1e-10 * std::max(1.0, std::abs(traj.records.front().source));
    const bool pass = e2 <= scale || (e2 <= 0.6 * e1 && e1 <= 1.5 * c_disc * h + scale);
    return std::pair{pass, fmt("defect %.3g at dt, %.3g at dt/2", e1, e2)};
  });

  // ---- diagnostics ----
  check("diagnostics", "equilibrium balance", [&] {
    RunConfig eq = cfg;
    eq.initial.preset = "equilibrium";
    const SimState s = build_initial(eq, g);
    const auto recs = fixed_step_records(s, p, 0.01, 0.1);
    double drift = 0.0;
    for (const auto& r : recs) drift = std::max(drift, std::abs(r.energy - recs[0].energy));
    const double scale = std::max(1.0, recs[0].energy);
    const double imbalance = std::abs(recs[0].dissipation - recs[0].source);
    return std::pair{drift <= 1e-12 * scale && imbalance <= 1e-12 * scale,
                     fmt("energy drift %.3g, dissipation - source %.3g", drift, imbalance)};
  });
  const BoundLedger ledger = apriori_ledger(initial, p, cfg.step.t_end, cfg.generic_C);
  check("diagnostics", "constant-free energy inequality", [&] {
    if (!run_ok) return std::pair{false, std::string("run failed")};
    const BoundCheckReport rep = bound_check(traj.records, ledger, p);
    return std::pair{rep.pass, fmt("lhs/R0 = %.9g", rep.rows.front().ratio)};
  });
  check("diagnostics", "ledger units", [&] {
    const NormReport n = norms(initial);
    auto sq = [&](const char* k) { return n.at(k).units * n.at(k).units; };
    const std::array<Dim, 7> expected{sq("u_L2"),        sq("sigma_L2"),      sq("omega_L2"),
                                      Dim::none(),        sq("grad_sigma_L2"), sq("grad_omega_L2"),
                                      n.at("rho_W12").units};
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < 7; ++i) {
      if (!(ledger.units[i] == expected[i])) {
        ok = false;
        detail += std::string(BoundLedger::kNames[i]) + " has " + ledger.units[i].str() +
                  ", expected " + expected[i].str() + "; ";
      }
    }
    return std::pair{ok, ok ? std::string("R0 in ") + ledger.units[0].str() + ", B in " +
                                  ledger.units[3].str()
                            : detail};
  });
  check("diagnostics", "ledger monotone in T", [&] {
    const BoundLedger twice = apriori_ledger(initial, p, 2.0 * cfg.step.t_end, cfg.generic_C);
    bool ok = true;
    for (std::size_t i = 0; i < 7; ++i) ok = ok && twice.values[i] >= ledger.values[i];
    return std::pair{ok, fmt("R0: %.6g -> %.6g", ledger.R0(), twice.R0())};
  });
  check("diagnostics", "positivity report equals pointwise scan", [&] {
    const PositivityReport rep = positivity_report(initial, cfg.monitors.positivity_tol);
    double min_c = INFINITY, min_g = INFINITY, min_e = INFINITY, min_r = INFINITY;
    for (std::size_t i = 0; i < g.real_size(); ++i) {
      const double a = initial.stress.a.values()[i];
      const double b = initial.stress.b.values()[i];
      const double c = initial.stress.c.values()[i];
      const double s11 = 0.5 * c + a, s22 = 0.5 * c - a;
      // Smaller eigenvalue of [[s11, b], [b, s22]] from the characteristic polynomial.
      const double tr = s11 + s22, det = s11 * s22 - b * b;
      const double lam = 0.5 * tr - std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
      min_c = std::min(min_c, c);
      min_g = std::min(min_g, c - 2.0 * std::sqrt(a * a + b * b));
      min_e = std::min(min_e, lam);
      min_r = std::min(min_r, initial.rho.values()[i]);
    }
    const bool ok = rep.min_c == min_c && rep.min_gamma == min_g && rep.min_rho == min_r &&
                    std::abs(rep.min_eigenvalue - min_e) <= 1e-12 * std::max(1.0, std::abs(min_e));
    return std::pair{ok, fmt("min eigenvalue %.6g, min gamma %.6g", rep.min_eigenvalue, rep.min_gamma)};
  });

  // ---- picard ----
  const SpectralGrid g16 = make_grid(16, cfg.L);
  PicardConfig pc = cfg.picard;
  pc.t0 = 0.1 / p.k;
  auto smooth_series = [&](std::uint64_t seed) {
    SmoothSpec spec;
    spec.seed = seed;
    spec.u_amp = 0.3;
    spec.stress_amp = 0.2;
    const SimState s = smooth_admissible(g16, spec);
    PicardConfig short_cfg = pc;
    short_cfg.n_time_nodes = 6;
    return std::pair{zeroth_iterate(to_spectral(s), p, short_cfg), short_cfg};
  };
  check("picard", "Q1 and Q2 bilinear", [&] {
    auto [U, sc] = smooth_series(cfg.initial.seed + 1);
    auto [V, _] = smooth_series(cfg.initial.seed + 2);
    const double alpha = 1.7;
    VelocitySeries au = U.u, uv = U.u;
    StressSeries as = U.sigma, ss = U.sigma;
    for (std::size_t j = 0; j < au.size(); ++j) {
      au[j] *= alpha;
      uv[j] += V.u[j];
      as[j] *= alpha;
      ss[j] += V.sigma[j];
    }
    auto scaled = [&](VelocitySeries s) { for (auto& x : s) x *= alpha; return s; };
    auto scaled_s = [&](StressSeries s) { for (auto& x : s) x *= alpha; return s; };
    auto added = [](VelocitySeries a, const VelocitySeries& b) {
      for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
      return a;
    };
    auto added_s = [](StressSeries a, const StressSeries& b) {
      for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
      return a;
    };
    const VelocitySeries q = op_q1(U.u, V.u, p, sc);
    const StressSeries q2 = op_q2(U.u, V.sigma, p, sc);
    double e = 0.0;
    e = std::max(e, series_rel(op_q1(au, V.u, p, sc), scaled(q), vec_norm, vec_diff));
    e = std::max(e, series_rel(op_q1(U.u, scaled(V.u), p, sc), scaled(q), vec_norm, vec_diff));
    e = std::max(e, series_rel(op_q1(uv, V.u, p, sc),
                               added(q, op_q1(V.u, V.u, p, sc)), vec_norm, vec_diff));
    e = std::max(e, series_rel(op_q2(au, V.sigma, p, sc), scaled_s(q2), stress_norm, stress_diff));
    e = std::max(e, series_rel(op_q2(U.u, ss, p, sc),
                               added_s(op_q2(U.u, U.sigma, p, sc), op_q2(U.u, V.sigma, p, sc)),
                               stress_norm, stress_diff));
    return std::pair{e <= 1e-12, fmt("max relative defect %.3g", e)};
  });
  check("picard", "L1 annihilates isotropic stress, L1 and L2 linear", [&] {
    auto [U, sc] = smooth_series(cfg.initial.seed + 3);
    StressSeries iso;
    for (const auto& r : U.rho) iso.push_back({Spectrum(g16), Spectrum(g16), 2.0 * r});
    double iso_norm = 0.0, ref = 0.0;
    for (const auto& v : op_l1(iso, p, sc)) iso_norm = std::max(iso_norm, vec_norm(v));
    for (const auto& r : U.rho) ref = std::max(ref, std::sqrt(grad_norm_sq(r)));
    StressSeries twice = U.sigma;
    for (auto& s : twice) s *= 2.0;
    VelocitySeries l1 = op_l1(U.sigma, p, sc);
    for (auto& v : l1) v *= 2.0;
    ScalarSeries rho2 = U.rho;
    for (auto& r : rho2) r *= 2.0;
    StressSeries l2 = op_l2(U.rho, p, sc);
    for (auto& s : l2) s *= 2.0;
    const double e = std::max(series_rel(op_l1(twice, p, sc), l1, vec_norm, vec_diff),
                              series_rel(op_l2(rho2, p, sc), l2, stress_norm, stress_diff));
    return std::pair{iso_norm <= 1e-13 * std::max(ref, 1.0) && e <= 1e-12,
                     fmt("|L1(rho I)| = %.3g, linearity defect %.3g", iso_norm, e)};
  });
  check("picard", "zeroth iterate follows the stress semigroup", [&] {
    auto [U, sc] = smooth_series(cfg.initial.seed + 4);
    const PhysParams& pp = p;
    double e = 0.0;
    for (std::size_t j = 0; j + 1 < U.size(); ++j) {
      const double h = sc.node_spacing();
      for (auto [cur, next] : {std::pair{&U.sigma[j].a, &U.sigma[j + 1].a},
                               std::pair{&U.sigma[j].b, &U.sigma[j + 1].b},
                               std::pair{&U.sigma[j].c, &U.sigma[j + 1].c}})
        e = std::max(e, rel_diff(heat_semigroup(*cur, pp.kappa, 2.0 * pp.k, h), *next));
    }
    return std::pair{e <= 1e-13, fmt("max relative defect %.3g", e)};
  });
  check("picard", "fixed point and agreement with the stepper", [&] {
    SmoothSpec spec;
    spec.seed = cfg.initial.seed;
    spec.u_amp = 0.05;
    spec.stress_amp = 0.05;
    spec.c_amp = 0.05;
    spec.rho_amp = 0.05;
    const SimState s = smooth_admissible(make_grid(32, cfg.L), spec);
    const PicardResult res = picard_iterate(s, p, pc);
    const SpectralState s0 = to_spectral(s);
    const PicardIterate again = apply_fixed_point_map(res.trajectory, s0, p, pc);
    const double moved = composite_norm(difference(again, res.trajectory), pc).total() /
                         composite_norm(res.trajectory, pc).total();
    const FieldAgreement agree = compare_with_stepper(res, s, p, 1e-3 / p.k);
    return std::pair{moved < 2.0 * pc.tol && agree.max() <= 1e-5,
                     fmt("F moves the limit by %.3g; max relative L2 mismatch %.3g", moved,
                         agree.max())};
  });

  // ---- cli_io ----
  check("cli_io", "deterministic initial data and runs", [&] {
    const SimState again = build_initial(cfg, g);
    StepControl shortc = cfg.step;
    shortc.t_end = 5.0 * cfg.step.dt_max;
    shortc.snapshot_times.clear();
    const Trajectory a = run(initial, p, shortc, cfg.monitors);
    const Trajectory b = run(again, p, shortc, cfg.monitors);
    bool same = bitwise_equal(initial, again) && bitwise_equal(a.final_state, b.final_state) &&
                a.records.size() == b.records.size();
    for (std::size_t i = 0; same && i < a.records.size(); ++i)
      same = timeseries_row(a.records[i]) == timeseries_row(b.records[i]);
    return std::pair{same, std::string(same ? "bit-identical" : "runs differ")};
  });
  check("cli_io", "snapshot round trip", [&] {
    const auto path = std::filesystem::temp_directory_path() /
                      ("oldb2d_check_" + std::to_string(::getpid()) + ".snap");
    write_snapshot(initial, path.string());
    const SimState back = read_snapshot(path.string(), g);
    std::filesystem::remove(path);
    const bool same = bitwise_equal(initial, back);
    return std::pair{same, std::string(same ? "bit-exact" : "fields differ")};
  });
  return report;
}

}  // namespace oldb2d
