#include "oldb2d/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oldb2d/errors.hpp"

namespace oldb2d {

void PhysParams::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("invariant violated: nu > 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw ConfigError("invariant violated: kappa >= 0");
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("invariant violated: k > 0");
  if (!(bigK > 0.0) || !std::isfinite(bigK))
    throw ConfigError("invariant violated: bigK > 0");
}

StressField stress_from_matrix(const ScalarField& s11, const ScalarField& s12,
                               const ScalarField& s22) {
  if (!(s11.grid() == s12.grid()) || !(s11.grid() == s22.grid()))
    throw std::invalid_argument("stress components live on different grids");
  return {0.5 * (s11 - s22), s12, s11 + s22};
}

StressMatrix matrix_from_stress(const StressField& s) {
  ScalarField half_c = 0.5 * s.c;
  return {half_c + s.a, s.b, half_c - s.a};
}

namespace {

template <class F>
ScalarField pointwise(const StressField& s, F&& f) {
  ScalarField out(s.grid());
  auto o = out.values();
  auto a = s.a.values();
  auto b = s.b.values();
  auto c = s.c.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = f(a[i], b[i], c[i]);
  return out;
}

}  // namespace

ScalarField min_eigenvalue(const StressField& s) {
  return pointwise(s, [](double a, double b, double c) { return 0.5 * c - std::hypot(a, b); });
}

ScalarField gamma_field(const StressField& s) {
  return pointwise(s, [](double a, double b, double c) { return c - 2.0 * std::hypot(a, b); });
}

ScalarField determinant(const StressField& s) {
  return pointwise(s, [](double a, double b, double c) { return 0.25 * c * c - a * a - b * b; });
}

double positivity_scale(const StressField& s) { return std::max(1.0, s.c.max()); }

bool is_admissible(const SimState& state, double tol) {
  const double scale = positivity_scale(state.stress);
  if (!(gamma_field(state.stress).min() >= -tol * scale)) return false;
  const double rho_scale = std::max(1.0, state.rho.max());
  return state.rho.min() >= -tol * rho_scale;
}

namespace {

double lp_norm(const ScalarField& pointwise_abs, double p) {
  double s = 0.0;
  for (double v : pointwise_abs.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * pointwise_abs.grid().cell_area(), 1.0 / p);
}

double l1_norm(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += std::abs(v);
  return s * f.grid().cell_area();
}

}  // namespace

NormReport norms(const SimState& state) {
  const SpectralGrid& g = state.grid();
  const Dim cm = Dim::cm();
  const Dim sec = Dim::sec();
  NormReport r;

  const VectorSpectrum uh = forward(state.u);
  const Spectrum ah = state.stress.a.forward();
  const Spectrum bh = state.stress.b.forward();
  const Spectrum ch = state.stress.c.forward();
  const Spectrum rh = state.rho.forward();
  const Spectrum wh = curl(uh);

  r["u_L2"] = {std::sqrt(l2_norm_sq(uh.x) + l2_norm_sq(uh.y)), cm * cm / sec};
  r["grad_u_L2"] = {std::sqrt(grad_norm_sq(uh.x) + grad_norm_sq(uh.y)), cm / sec};
  r["omega_L2"] = {std::sqrt(l2_norm_sq(wh)), cm / sec};
  r["grad_omega_L2"] = {std::sqrt(grad_norm_sq(wh)), Dim::none() / sec};
  r["lap_omega_L2"] = {std::sqrt(lap_norm_sq(wh)), Dim::none() / (cm * sec)};

  // Frobenius: |σ|² = c²/2 + 2a² + 2b², and likewise for derivatives.
  auto frob = [](double a2, double b2, double c2) { return std::sqrt(0.5 * c2 + 2.0 * a2 + 2.0 * b2); };
  r["sigma_L1"] = {state.stress.c.integral(), cm * cm};
  r["sigma_L2"] = {frob(l2_norm_sq(ah), l2_norm_sq(bh), l2_norm_sq(ch)), cm};
  r["grad_sigma_L2"] = {frob(grad_norm_sq(ah), grad_norm_sq(bh), grad_norm_sq(ch)), Dim::none()};
  r["lap_sigma_L2"] = {frob(lap_norm_sq(ah), lap_norm_sq(bh), lap_norm_sq(ch)), Dim::none() / cm};

  r["rho_L1"] = {l1_norm(state.rho), cm * cm};
  const double rho_l2_sq = l2_norm_sq(rh);
  const double grad_rho_sq = grad_norm_sq(rh);
  r["rho_L2"] = {std::sqrt(rho_l2_sq), cm};
  r["grad_rho_L2"] = {std::sqrt(grad_rho_sq), Dim::none()};
  // W^{1,2} mixes cm and dimensionless parts; tagged with its L² leading part.
  r["rho_W12"] = {std::sqrt(rho_l2_sq + grad_rho_sq), cm};

  // L⁴ norms need real-space values.
  const VectorField du1{ddx(uh.x, Axis::x).backward(), ddx(uh.x, Axis::y).backward()};
  const VectorField du2{ddx(uh.y, Axis::x).backward(), ddx(uh.y, Axis::y).backward()};
  ScalarField speed(g), grad_u(g), sigma_frob(g);
  {
    auto s = speed.values();
    auto gu = grad_u.values();
    auto sf = sigma_frob.values();
    auto u1 = state.u.x.values();
    auto u2 = state.u.y.values();
    auto a = state.stress.a.values();
    auto b = state.stress.b.values();
    auto c = state.stress.c.values();
    auto g11 = du1.x.values();
    auto g12 = du1.y.values();
    auto g21 = du2.x.values();
    auto g22 = du2.y.values();
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = std::hypot(u1[i], u2[i]);
      gu[i] = std::sqrt(g11[i] * g11[i] + g12[i] * g12[i] + g21[i] * g21[i] + g22[i] * g22[i]);
      sf[i] = std::sqrt(0.5 * c[i] * c[i] + 2.0 * a[i] * a[i] + 2.0 * b[i] * b[i]);
    }
  }
  r["u_L4"] = {lp_norm(speed, 4.0), cm * Dim::cm().pow(1, 2) / sec};
  r["grad_u_L4"] = {lp_norm(grad_u, 4.0), Dim::cm().pow(1, 2) / sec};
  r["omega_L4"] = {lp_norm(wh.backward(), 4.0), Dim::cm().pow(1, 2) / sec};
  r["sigma_L4"] = {lp_norm(sigma_frob, 4.0), Dim::cm().pow(1, 2)};
  r["rho_L4"] = {lp_norm(state.rho, 4.0), Dim::cm().pow(1, 2)};
  return r;
}

SimState transpose(const SimState& state) {
  const SpectralGrid& g = state.grid();
  const int n = g.n();
  auto t = [&](const ScalarField& f, double sign) {
    ScalarField out(g);
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) out(ix, iy) = sign * f(iy, ix);
    return out;
  };
  return {state.time,
          {t(state.u.y, 1.0), t(state.u.x, 1.0)},
          {t(state.stress.a, -1.0), t(state.stress.b, 1.0), t(state.stress.c, 1.0)},
          t(state.rho, 1.0)};
}

}  // namespace oldb2d
