#include "oldb2d/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace oldb2d {

// ---- spectral bundles ---------------------------------------------------------

StressSpectrum& StressSpectrum::operator+=(const StressSpectrum& o) {
  a += o.a;
  b += o.b;
  c += o.c;
  return *this;
}

StressSpectrum& StressSpectrum::operator*=(double s) {
  a *= s;
  b *= s;
  c *= s;
  return *this;
}

StressSpectrum& StressSpectrum::axpy(double s, const StressSpectrum& o) {
  a.axpy(s, o.a);
  b.axpy(s, o.b);
  c.axpy(s, o.c);
  return *this;
}

SpectralState& SpectralState::operator+=(const SpectralState& o) {
  u += o.u;
  stress += o.stress;
  rho += o.rho;
  return *this;
}

SpectralState& SpectralState::operator*=(double s) {
  u *= s;
  stress *= s;
  rho *= s;
  return *this;
}

SpectralState& SpectralState::axpy(double s, const SpectralState& o) {
  u.axpy(s, o.u);
  stress.axpy(s, o.stress);
  rho.axpy(s, o.rho);
  return *this;
}

SpectralState to_spectral(const SimState& s) {
  return {s.time,
          forward(s.u),
          {s.stress.a.forward(), s.stress.b.forward(), s.stress.c.forward()},
          s.rho.forward()};
}

SimState to_physical(const SpectralState& s) {
  return {s.time,
          backward(s.u),
          {s.stress.a.backward(), s.stress.b.backward(), s.stress.c.backward()},
          s.rho.backward()};
}

// ---- pointwise helpers -----------------------------------------------------------

namespace {

struct Sampled {
  ScalarField f, fx, fy;
};

// Real-space values and gradient of the dealiased field.
Sampled sample(const Spectrum& f) {
  const Spectrum fd = dealias(f);
  return {fd.backward(), ddx(fd, Axis::x).backward(), ddx(fd, Axis::y).backward()};
}

struct SampledVelocity {
  Sampled u1, u2;
};

SampledVelocity sample(const VectorSpectrum& u) { return {sample(u.x), sample(u.y)}; }

// Dealiased u·∇f from pre-sampled factors.
ScalarField advect(const SampledVelocity& u, const Sampled& f) {
  ScalarField out(f.f.grid());
  auto o = out.values();
  auto u1 = u.u1.f.values();
  auto u2 = u.u2.f.values();
  auto fx = f.fx.values();
  auto fy = f.fy.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = u1[i] * fx[i] + u2[i] * fy[i];
  return out;
}

Spectrum truncated(const ScalarField& f) { return dealias(f.forward()); }

}  // namespace

VectorSpectrum stress_divergence(const StressSpectrum& s) {
  const Spectrum half_c = 0.5 * s.c;
  return {ddx(half_c + s.a, Axis::x) + ddx(s.b, Axis::y),
          ddx(s.b, Axis::x) + ddx(half_c - s.a, Axis::y)};
}

VectorSpectrum projected_advection(const VectorSpectrum& u, const VectorSpectrum& v) {
  const SampledVelocity us = sample(u);
  const SampledVelocity vs = sample(v);
  return leray_project(VectorSpectrum{truncated(advect(us, vs.u1)), truncated(advect(us, vs.u2))});
}

Spectrum scalar_advection(const VectorSpectrum& u, const Spectrum& f) {
  const SampledVelocity us = sample(u);
  Spectrum out = truncated(advect(us, sample(f)));
  out *= -1.0;
  return out;
}

StressSpectrum stretching_tendency(const VectorSpectrum& u, const StressSpectrum& sigma) {
  const SampledVelocity us = sample(u);
  const Sampled a = sample(sigma.a);
  const Sampled b = sample(sigma.b);
  const Sampled c = sample(sigma.c);
  const ScalarField adv_a = advect(us, a);
  const ScalarField adv_b = advect(us, b);
  const ScalarField adv_c = advect(us, c);

  const SpectralGrid& g = sigma.a.grid();
  ScalarField na(g), nb(g), nc(g);
  auto oa = na.values();
  auto ob = nb.values();
  auto oc = nc.values();
  auto d11 = us.u1.fx.values();
  auto d21 = us.u1.fy.values();  // ∂₂u¹
  auto d12 = us.u2.fx.values();  // ∂₁u²
  auto d22 = us.u2.fy.values();
  auto av = a.f.values();
  auto bv = b.f.values();
  auto cv = c.f.values();
  auto aa = adv_a.values();
  auto ab = adv_b.values();
  auto ac = adv_c.values();
  for (std::size_t i = 0; i < oa.size(); ++i) {
    const double lambda = 0.5 * (d11[i] - d22[i]);
    const double mu = 0.5 * (d12[i] + d21[i]);
    const double omega = d12[i] - d21[i];
    oa[i] = -aa[i] - omega * bv[i] + cv[i] * lambda;
    ob[i] = -ab[i] + omega * av[i] + cv[i] * mu;
    oc[i] = -ac[i] + 4.0 * (lambda * av[i] + mu * bv[i]);
  }
  return {truncated(na), truncated(nb), truncated(nc)};
}

SpectralState explicit_tendency(const SpectralState& s, const PhysParams& params) {
  VectorSpectrum forcing = stress_divergence(s.stress);
  forcing *= params.bigK;
  forcing.axpy(-1.0, projected_advection(s.u, s.u));
  return {0.0, dealias(leray_project(forcing)), stretching_tendency(s.u, s.stress),
          scalar_advection(s.u, s.rho)};
}

SpectralState linear_tendency(const SpectralState& s, const PhysParams& params) {
  const SpectralGrid& g = s.grid();
  auto k2 = g.k2();
  SpectralState out{0.0,
                    {Spectrum(g), Spectrum(g)},
                    {Spectrum(g), Spectrum(g), Spectrum(g)},
                    Spectrum(g)};
  for (std::size_t m = 0; m < g.spectral_size(); ++m) {
    const double lu = -params.nu * k2[m];
    const double ls = -(params.kappa * k2[m] + 2.0 * params.k);
    out.u.x.coeffs()[m] = lu * s.u.x.coeffs()[m];
    out.u.y.coeffs()[m] = lu * s.u.y.coeffs()[m];
    out.stress.a.coeffs()[m] = ls * s.stress.a.coeffs()[m];
    out.stress.b.coeffs()[m] = ls * s.stress.b.coeffs()[m];
    out.stress.c.coeffs()[m] =
        ls * s.stress.c.coeffs()[m] + 4.0 * params.k * s.rho.coeffs()[m];
  }
  return out;
}

LinearPropagator::LinearPropagator(const SpectralGrid& grid, const PhysParams& params,
                                   double h)
    : h_(h) {
  auto k2 = grid.k2();
  const std::size_t ns = grid.spectral_size();
  velocity_.resize(ns);
  stress_.resize(ns);
  source_.resize(ns);
  for (std::size_t m = 0; m < ns; ++m) {
    const double rate = params.kappa * k2[m] + 2.0 * params.k;
    velocity_[m] = std::exp(-params.nu * k2[m] * h);
    stress_[m] = std::exp(-rate * h);
    source_[m] = rate == 0.0 ? 4.0 * params.k * h : 4.0 * params.k * (-std::expm1(-rate * h)) / rate;
  }
}

void LinearPropagator::apply(SpectralState& s) const {
  auto ux = s.u.x.coeffs();
  auto uy = s.u.y.coeffs();
  auto a = s.stress.a.coeffs();
  auto b = s.stress.b.coeffs();
  auto c = s.stress.c.coeffs();
  auto rho = s.rho.coeffs();
  for (std::size_t m = 0; m < velocity_.size(); ++m) {
    ux[m] *= velocity_[m];
    uy[m] *= velocity_[m];
    a[m] *= stress_[m];
    b[m] *= stress_[m];
    c[m] = stress_[m] * c[m] + source_[m] * rho[m];
  }
}

// ---- physical-space API --------------------------------------------------------------

StrainDecomposition strain_decompose(const VectorField& u) {
  const VectorSpectrum uh = forward(u);
  const ScalarField d11 = ddx(uh.x, Axis::x).backward();
  const ScalarField d21 = ddx(uh.x, Axis::y).backward();
  const ScalarField d12 = ddx(uh.y, Axis::x).backward();
  const ScalarField d22 = ddx(uh.y, Axis::y).backward();
  return {0.5 * (d11 - d22), 0.5 * (d12 + d21), d12 - d21};
}

StressRhs stress_rhs(const SimState& state, const PhysParams& params) {
  const SpectralState s = to_spectral(state);
  StressSpectrum t = stretching_tendency(s.u, s.stress);
  t += linear_tendency(s, params).stress;
  return {t.a.backward(), t.b.backward(), t.c.backward()};
}

VectorField momentum_rhs(const SimState& state, const PhysParams& params) {
  const SpectralState s = to_spectral(state);
  VectorSpectrum du = explicit_tendency(s, params).u;
  du += linear_tendency(s, params).u;
  return backward(du);
}

ScalarField rho_rhs(const SimState& state) {
  return scalar_advection(forward(state.u), state.rho.forward()).backward();
}

StateDerivative full_rhs(const SimState& state, const PhysParams& params) {
  const SpectralState s = to_spectral(state);
  SpectralState t = explicit_tendency(s, params);
  t += linear_tendency(s, params);
  return {backward(t.u), t.stress.a.backward(), t.stress.b.backward(), t.stress.c.backward(),
          t.rho.backward()};
}

ScalarField recover_pressure(const SimState& state, const PhysParams& params) {
  const SpectralState s = to_spectral(state);
  const SampledVelocity us = sample(s.u);
  VectorSpectrum forcing = stress_divergence(s.stress);
  forcing *= params.bigK;
  forcing.x -= truncated(advect(us, us.u1));
  forcing.y -= truncated(advect(us, us.u2));
  forcing = dealias(std::move(forcing));
  return invert_laplacian(divergence(forcing)).backward();
}

ScalarField determinant_rhs(const SimState& state, const PhysParams& params) {
  if (params.kappa != 0.0)
    throw std::invalid_argument("determinant law holds only for kappa = 0");
  const ScalarField d = determinant(state.stress);
  const Spectrum dh = d.forward();
  const ScalarField dx = ddx(dh, Axis::x).backward();
  const ScalarField dy = ddx(dh, Axis::y).backward();
  ScalarField out(d.grid());
  auto o = out.values();
  auto u1 = state.u.x.values();
  auto u2 = state.u.y.values();
  auto dv = d.values();
  auto gx = dx.values();
  auto gy = dy.values();
  auto rho = state.rho.values();
  auto c = state.stress.c.values();
  const double k = params.k;
  for (std::size_t i = 0; i < o.size(); ++i)
    o[i] = -(u1[i] * gx[i] + u2[i] * gy[i]) - 4.0 * k * dv[i] + 2.0 * k * rho[i] * c[i];
  return out;
}

}  // namespace oldb2d
