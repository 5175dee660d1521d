#include "oldb2d/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "oldb2d/integrate.hpp"
#include "oldb2d/parallel.hpp"

namespace oldb2d {

void PicardConfig::validate() const {
  if (!(t0 > 0.0)) throw ConfigError("invariant violated: t0 > 0");
  if (n_time_nodes < 4) throw ConfigError("invariant violated: n_time_nodes >= 4");
  if (max_iter < 1) throw ConfigError("invariant violated: max_iter >= 1");
  if (!(tol > 0.0)) throw ConfigError("invariant violated: tol > 0");
  if (!(substep_max > 0.0 && substep_min > 0.0 && substep_min <= substep_max))
    throw ConfigError("invariant violated: 0 < substep_min <= substep_max");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("invariant violated: 0 < cfl <= 1");
}

std::vector<double> PicardConfig::nodes() const {
  std::vector<double> t(n_time_nodes);
  for (int j = 0; j < n_time_nodes; ++j) t[j] = j * t0 / (n_time_nodes - 1);
  t.back() = t0;
  return t;
}

SpectralState PicardIterate::at(std::size_t j, double time) const {
  return {time, u.at(j), sigma.at(j), rho.at(j)};
}

double PicardNonConvergence::last_ratio() const {
  return history_.ratios.empty() ? std::numeric_limits<double>::infinity()
                                 : history_.ratios.back();
}

double FieldAgreement::max() const { return std::max({u, a, b, c, rho}); }

namespace {

// Per-mode weights of the product trapezoid rule over one node interval:
// I_{j+1} = decay I_j + w0 f_j + w1 f_{j+1}.
class Duhamel {
 public:
  Duhamel(const SpectralGrid& g, double diffusivity, double damping, double h) {
    auto k2 = g.k2();
    const std::size_t ns = g.spectral_size();
    decay_.resize(ns);
    w0_.resize(ns);
    w1_.resize(ns);
    for (std::size_t m = 0; m < ns; ++m) {
      const double x = (diffusivity * k2[m] + damping) * h;
      double phi, psi;  // ∫₀¹ e^{-x(1-τ)} dτ and ∫₀¹ e^{-x(1-τ)} τ dτ
      if (x < 1e-3) {
        phi = 1.0 - x / 2 + x * x / 6 - x * x * x / 24 + x * x * x * x / 120;
        psi = 0.5 - x / 6 + x * x / 24 - x * x * x / 120 + x * x * x * x / 720;
      } else {
        phi = -std::expm1(-x) / x;
        psi = (x + std::expm1(-x)) / (x * x);
      }
      decay_[m] = std::exp(-x);
      w1_[m] = h * psi;
      w0_[m] = h * (phi - psi);
    }
  }

  ScalarSeries integrate(std::span<const Spectrum> f) const {
    ScalarSeries out;
    out.reserve(f.size());
    out.emplace_back(f[0].grid());
    for (std::size_t j = 0; j + 1 < f.size(); ++j) {
      Spectrum next(f[0].grid());
      auto o = next.coeffs();
      auto prev = out.back().coeffs();
      auto fa = f[j].coeffs();
      auto fb = f[j + 1].coeffs();
      for (std::size_t m = 0; m < o.size(); ++m)
        o[m] = decay_[m] * prev[m] + w0_[m] * fa[m] + w1_[m] * fb[m];
      out.push_back(std::move(next));
    }
    return out;
  }

 private:
  std::vector<double> decay_, w0_, w1_;
};

Duhamel velocity_kernel(const SpectralGrid& g, const PhysParams& p, const PicardConfig& cfg) {
  return Duhamel(g, p.nu, 0.0, cfg.node_spacing());
}

Duhamel stress_kernel(const SpectralGrid& g, const PhysParams& p, const PicardConfig& cfg) {
  return Duhamel(g, p.kappa, 2.0 * p.k, cfg.node_spacing());
}

VelocitySeries integrate(const Duhamel& kernel, const VelocitySeries& f) {
  ScalarSeries fx, fy;
  for (const auto& v : f) {
    fx.push_back(v.x);
    fy.push_back(v.y);
  }
  ScalarSeries ix = kernel.integrate(fx);
  ScalarSeries iy = kernel.integrate(fy);
  VelocitySeries out;
  for (std::size_t j = 0; j < f.size(); ++j) out.push_back({std::move(ix[j]), std::move(iy[j])});
  return out;
}

StressSeries integrate(const Duhamel& kernel, const StressSeries& f) {
  ScalarSeries fa, fb, fc;
  for (const auto& s : f) {
    fa.push_back(s.a);
    fb.push_back(s.b);
    fc.push_back(s.c);
  }
  ScalarSeries ia = kernel.integrate(fa);
  ScalarSeries ib = kernel.integrate(fb);
  ScalarSeries ic = kernel.integrate(fc);
  StressSeries out;
  for (std::size_t j = 0; j < f.size(); ++j)
    out.push_back({std::move(ia[j]), std::move(ib[j]), std::move(ic[j])});
  return out;
}

template <class T, class F>
std::vector<T> map_nodes(std::size_t count, F&& f) {
  std::vector<std::optional<T>> tmp(count);
  parallel_for(count, [&](std::size_t j) { tmp[j].emplace(f(j)); });
  std::vector<T> out;
  out.reserve(count);
  for (auto& t : tmp) out.push_back(std::move(*t));
  return out;
}

void check_nodes(std::size_t a, std::size_t b, const PicardConfig& cfg) {
  if (a != b || a != static_cast<std::size_t>(cfg.n_time_nodes))
    throw std::invalid_argument("time series do not match the configured nodes");
}

double max_speed(const VectorSpectrum& u) {
  const VectorField v = backward(u);
  auto u1 = v.x.values();
  auto u2 = v.y.values();
  double m = 0.0;
  for (std::size_t i = 0; i < u1.size(); ++i) m = std::max(m, std::hypot(u1[i], u2[i]));
  return m;
}

VectorSpectrum lerp(const VectorSpectrum& a, const VectorSpectrum& b, double theta) {
  VectorSpectrum out = a;
  out *= 1.0 - theta;
  out.axpy(theta, b);
  return out;
}

double frobenius_sobolev_sq(const StressSpectrum& s, int order) {
  return 2.0 * sobolev_norm_sq(s.a, order) + 2.0 * sobolev_norm_sq(s.b, order) +
         0.5 * sobolev_norm_sq(s.c, order);
}

double velocity_sobolev_sq(const VectorSpectrum& u, int order) {
  return sobolev_norm_sq(u.x, order) + sobolev_norm_sq(u.y, order);
}

double l1_norm(const Spectrum& f) {
  const ScalarField v = f.backward();
  double s = 0.0;
  for (double x : v.values()) s += std::abs(x);
  return s * v.grid().cell_area();
}

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < f.size(); ++j) s += 0.5 * h * (f[j] + f[j + 1]);
  return s;
}

}  // namespace

VelocitySeries op_q1(std::span<const VectorSpectrum> u, std::span<const VectorSpectrum> v,
                     const PhysParams& params, const PicardConfig& cfg) {
  check_nodes(u.size(), v.size(), cfg);
  auto f = map_nodes<VectorSpectrum>(u.size(), [&](std::size_t j) {
    VectorSpectrum adv = projected_advection(u[j], v[j]);
    adv *= -1.0;
    return adv;
  });
  return integrate(velocity_kernel(u[0].grid(), params, cfg), f);
}

VelocitySeries op_l1(std::span<const StressSpectrum> sigma, const PhysParams& params,
                     const PicardConfig& cfg) {
  check_nodes(sigma.size(), sigma.size(), cfg);
  auto f = map_nodes<VectorSpectrum>(sigma.size(), [&](std::size_t j) {
    VectorSpectrum d = dealias(leray_project(stress_divergence(sigma[j])));
    d *= params.bigK;
    return d;
  });
  return integrate(velocity_kernel(sigma[0].a.grid(), params, cfg), f);
}

StressSeries op_q2(std::span<const VectorSpectrum> u, std::span<const StressSpectrum> sigma,
                   const PhysParams& params, const PicardConfig& cfg) {
  check_nodes(u.size(), sigma.size(), cfg);
  auto f = map_nodes<StressSpectrum>(
      u.size(), [&](std::size_t j) { return stretching_tendency(u[j], sigma[j]); });
  return integrate(stress_kernel(u[0].grid(), params, cfg), f);
}

StressSeries op_l2(std::span<const Spectrum> rho, const PhysParams& params,
                   const PicardConfig& cfg) {
  check_nodes(rho.size(), rho.size(), cfg);
  const SpectralGrid& g = rho[0].grid();
  ScalarSeries source;
  for (const auto& r : rho) source.push_back(4.0 * params.k * r);
  ScalarSeries c = stress_kernel(g, params, cfg).integrate(source);
  StressSeries out;
  for (auto& cj : c) out.push_back({Spectrum(g), Spectrum(g), std::move(cj)});
  return out;
}

ScalarSeries op_n(std::span<const VectorSpectrum> u, const Spectrum& rho0,
                  const PicardConfig& cfg) {
  check_nodes(u.size(), u.size(), cfg);
  const double h = cfg.node_spacing();
  const double dx = rho0.grid().spacing();
  std::vector<double> speed(u.size());
  parallel_for(u.size(), [&](std::size_t j) { speed[j] = max_speed(u[j]); });

  ScalarSeries out{rho0};
  Spectrum r = rho0;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    const double umax = std::max(speed[j], speed[j + 1]);
    const double dt_cfl = cfg.cfl * dx / std::max(umax, 1e-12);
    if (dt_cfl < cfg.substep_min)
      throw NumericalFailure("transport sub-step " + std::to_string(dt_cfl) +
                             " below the minimum");
    const long nsub = static_cast<long>(std::ceil(h / std::min(dt_cfl, cfg.substep_max) - 1e-12));
    const double dt = h / std::max(nsub, 1L);
    for (long s = 0; s < std::max(nsub, 1L); ++s) {
      const double theta = s * dt / h;
      const VectorSpectrum u0 = lerp(u[j], u[j + 1], theta);
      const VectorSpectrum u1 = lerp(u[j], u[j + 1], theta + dt / h);
      const VectorSpectrum uh = lerp(u[j], u[j + 1], theta + 0.5 * dt / h);
      Spectrum r1 = r;
      r1.axpy(dt, scalar_advection(u0, r));
      Spectrum r2 = 0.75 * r;
      r2.axpy(0.25, r1);
      r2.axpy(0.25 * dt, scalar_advection(u1, r1));
      Spectrum r3 = (1.0 / 3.0) * r;
      r3.axpy(2.0 / 3.0, r2);
      r3.axpy(2.0 / 3.0 * dt, scalar_advection(uh, r2));
      r = std::move(r3);
    }
    out.push_back(r);
  }
  return out;
}

PicardIterate zeroth_iterate(const SpectralState& initial, const PhysParams& params,
                             const PicardConfig& cfg) {
  PicardIterate U;
  const double damping = 2.0 * params.k;
  for (double t : cfg.nodes()) {
    U.u.push_back(heat_semigroup(initial.u, params.nu, 0.0, t));
    U.sigma.push_back({heat_semigroup(initial.stress.a, params.kappa, damping, t),
                       heat_semigroup(initial.stress.b, params.kappa, damping, t),
                       heat_semigroup(initial.stress.c, params.kappa, damping, t)});
    U.rho.push_back(initial.rho);
  }
  return U;
}

PicardIterate apply_fixed_point_map(const PicardIterate& U, const SpectralState& initial,
                                    const PhysParams& params, const PicardConfig& cfg) {
  PicardIterate next = zeroth_iterate(initial, params, cfg);
  const VelocitySeries q1 = op_q1(U.u, U.u, params, cfg);
  const VelocitySeries l1 = op_l1(U.sigma, params, cfg);
  const StressSeries q2 = op_q2(U.u, U.sigma, params, cfg);
  const StressSeries l2 = op_l2(U.rho, params, cfg);
  for (std::size_t j = 0; j < next.size(); ++j) {
    next.u[j] += q1[j];
    next.u[j] += l1[j];
    next.sigma[j] += q2[j];
    next.sigma[j] += l2[j];
  }
  next.rho = op_n(U.u, initial.rho, cfg);
  return next;
}

CompositeNorm composite_norm(const PicardIterate& U, const PicardConfig& cfg) {
  const std::size_t m = U.size();
  std::vector<double> u_sup(m), u_int(m), s_sup(m), s_int(m), r_sup(m);
  parallel_for(m, [&](std::size_t j) {
    u_sup[j] = std::sqrt(velocity_sobolev_sq(U.u[j], 2));
    u_int[j] = velocity_sobolev_sq(U.u[j], 3);
    s_sup[j] = std::sqrt(frobenius_sobolev_sq(U.sigma[j], 1));
    s_int[j] = frobenius_sobolev_sq(U.sigma[j], 2);
    r_sup[j] = l1_norm(U.rho[j]) + std::sqrt(sobolev_norm_sq(U.rho[j], 1));
  });
  const double h = cfg.node_spacing();
  auto sup = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  return {sup(u_sup) + std::sqrt(trapezoid(u_int, h)), sup(s_sup) + std::sqrt(trapezoid(s_int, h)),
          sup(r_sup)};
}

PicardIterate difference(const PicardIterate& a, const PicardIterate& b) {
  if (a.size() != b.size()) throw std::invalid_argument("iterates have different lengths");
  PicardIterate d = a;
  for (std::size_t j = 0; j < d.size(); ++j) {
    d.u[j].axpy(-1.0, b.u[j]);
    d.sigma[j].axpy(-1.0, b.sigma[j]);
    d.rho[j] -= b.rho[j];
  }
  return d;
}

PicardResult picard_iterate(const SimState& initial, const PhysParams& params,
                            const PicardConfig& cfg) {
  params.validate();
  cfg.validate();
  if (!is_admissible(initial))
    throw MonitorViolation("positivity", initial.time, gamma_field(initial.stress).min(),
                           "initial data not admissible");
  const SpectralState s0 = to_spectral(initial);

  PicardResult result;
  result.times = cfg.nodes();
  PicardHistory& hist = result.history;
  PicardIterate U = zeroth_iterate(s0, params, cfg);
  hist.norms.push_back(composite_norm(U, cfg));

  for (int it = 0; it < cfg.max_iter; ++it) {
    PicardIterate next = apply_fixed_point_map(U, s0, params, cfg);
    const CompositeNorm n = composite_norm(next, cfg);
    const CompositeNorm d = composite_norm(difference(next, U), cfg);
    if (!std::isfinite(n.total()) || !std::isfinite(d.total())) {
      hist.ratios.push_back(std::numeric_limits<double>::infinity());
      throw PicardNonConvergence("Picard iterate became non-finite at iteration " +
                                     std::to_string(it + 1),
                                 hist);
    }
    hist.norms.push_back(n);
    hist.differences.push_back(d);
    hist.relative.push_back(d.total() / std::max(n.total(), 1e-300));
    if (hist.differences.size() >= 2) {
      const double prev = hist.differences[hist.differences.size() - 2].total();
      hist.ratios.push_back(prev > 0.0 ? d.total() / prev
                                       : (d.total() > 0.0 ? std::numeric_limits<double>::infinity()
                                                          : 0.0));
    }
    U = std::move(next);
    if (hist.relative.back() < cfg.tol) {
      hist.converged = true;
      result.trajectory = std::move(U);
      return result;
    }
  }
  const double last = hist.ratios.empty() ? std::numeric_limits<double>::quiet_NaN() : hist.ratios.back();
  throw PicardNonConvergence("Picard iteration did not converge in " +
                                 std::to_string(cfg.max_iter) +
                                 " iterations (last ratio " + std::to_string(last) + ")",
                             hist);
}

double contraction_estimate(const PicardHistory& history) {
  const auto& d = history.differences;
  if (d.size() < 2) throw std::invalid_argument("contraction estimate needs two differences");
  const double first = d.front().total();
  const double last = d.back().total();
  if (last == 0.0) return 0.0;
  if (first == 0.0 || !std::isfinite(last)) return std::numeric_limits<double>::infinity();
  return std::pow(last / first, 1.0 / static_cast<double>(d.size() - 1));
}

FieldAgreement field_agreement(const SimState& candidate, const SimState& reference) {
  auto rel = [](const ScalarField& x, const ScalarField& y) {
    const double ref = l2_norm(y);
    const double err = l2_norm(x - y);
    return ref > 0.0 ? err / ref : err;
  };
  const VectorField du{candidate.u.x - reference.u.x, candidate.u.y - reference.u.y};
  const double uref = l2_norm(reference.u);
  return {uref > 0.0 ? l2_norm(du) / uref : l2_norm(du), rel(candidate.stress.a, reference.stress.a),
          rel(candidate.stress.b, reference.stress.b), rel(candidate.stress.c, reference.stress.c),
          rel(candidate.rho, reference.rho)};
}

FieldAgreement compare_with_stepper(const PicardResult& result, const SimState& initial,
                                    const PhysParams& params, double dt) {
  const double t0 = result.times.back();
  const long steps = std::max(1L, static_cast<long>(std::ceil(t0 / dt - 1e-9)));
  const double h = t0 / steps;
  const SpectralGrid& g = initial.grid();
  const LinearPropagator full(g, params, h), half(g, params, 0.5 * h), back(g, params, -0.5 * h);
  SpectralState s = to_spectral(initial);
  for (long i = 0; i < steps; ++i) s = advance(s, params, full, half, back);
  return field_agreement(to_physical(result.final_state()), to_physical(s));
}

}  // namespace oldb2d
