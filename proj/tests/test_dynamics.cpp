#include <doctest.h>

#include <array>
#include <functional>
#include <random>

#include "oldb2d/config.hpp"
#include "oldb2d/dynamics.hpp"
#include "oldb2d/initial.hpp"
#include "support.hpp"

using namespace oldb2d;
using namespace testing;

namespace {

using Fn = std::function<double(double, double)>;

SimState uniform_state(const SpectralGrid& g, double c, double rho) {
  return {0.0, {ScalarField(g), ScalarField(g)},
          {ScalarField(g), ScalarField(g), ScalarField(g, c)}, ScalarField(g, rho)};
}

VectorField taylor_green(const SpectralGrid& g) {
  return {ScalarField::from_function(g, [](double x, double y) { return std::sin(x) * std::cos(y); }),
          ScalarField::from_function(g, [](double x, double y) { return -std::cos(x) * std::sin(y); })};
}

SimState random_state(int n, std::uint64_t seed) {
  RunConfig cfg;
  cfg.n = n;
  cfg.initial.seed = seed;
  return build_initial(cfg, make_grid(n, kTwoPi));
}

SimState smooth_state(int n, std::uint64_t seed) {
  SmoothSpec spec;
  spec.band = n / 8;
  spec.seed = seed;
  spec.u_amp = 0.5;
  spec.stress_amp = 0.3;
  spec.c_amp = 0.2;
  return smooth_admissible(make_grid(n, kTwoPi), spec);
}

// Analytic test state: u = ∇⊥ψ with ψ = sin x cos 2y + cos(x + y)/2.
const Fn u1 = [](double x, double y) { return 2 * std::sin(x) * std::sin(2 * y) + 0.5 * std::sin(x + y); };
const Fn u2 = [](double x, double y) { return std::cos(x) * std::cos(2 * y) - 0.5 * std::sin(x + y); };
const Fn fa = [](double x, double y) { return 0.3 * std::cos(x - y); };
const Fn fb = [](double x, double y) { return 0.2 * std::sin(2 * x) * std::cos(y); };
const Fn fc = [](double x, double y) { return 2 + 0.5 * std::cos(y) * std::sin(x); };
const Fn frho = [](double x, double y) { return 1 + 0.3 * std::sin(x + 2 * y); };

/// Matrix-form stress tendency −u·∇σ + (∇u)σ + σ(∇u)ᵀ − 2k(σ − ρ𝕀) + κΔσ by
/// second-order central differences of spacing h, returned as (da, db, dc).
std::array<double, 3> fd_stress_rhs(double x, double y, double h, const PhysParams& p) {
  auto dx = [&](const Fn& f) { return (f(x + h, y) - f(x - h, y)) / (2 * h); };
  auto dy = [&](const Fn& f) { return (f(x, y + h) - f(x, y - h)) / (2 * h); };
  auto lap = [&](const Fn& f) {
    return (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4 * f(x, y)) / (h * h);
  };
  const Fn s11 = [](double x, double y) { return 0.5 * fc(x, y) + fa(x, y); };
  const Fn s22 = [](double x, double y) { return 0.5 * fc(x, y) - fa(x, y); };
  const Fn& s12 = fb;
  const double G[2][2] = {{dx(u1), dy(u1)}, {dx(u2), dy(u2)}};
  const double S[2][2] = {{s11(x, y), s12(x, y)}, {s12(x, y), s22(x, y)}};
  const Fn* comp[2][2] = {{&s11, &s12}, {&s12, &s22}};
  const double ux = u1(x, y), uy = u2(x, y), rho = frho(x, y);
  double R[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Fn& f = *comp[i][j];
      double stretch = 0.0;
      for (int m = 0; m < 2; ++m) stretch += G[i][m] * S[m][j] + S[i][m] * G[j][m];
      R[i][j] = -(ux * dx(f) + uy * dy(f)) + stretch - 2 * p.k * (S[i][j] - (i == j ? rho : 0.0)) +
                p.kappa * lap(f);
    }
  }
  return {0.5 * (R[0][0] - R[1][1]), R[0][1], R[0][0] + R[1][1]};
}

}  // namespace

TEST_CASE("strain decomposition") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  const StrainDecomposition z = strain_decompose({ScalarField(g), ScalarField(g)});
  CHECK(z.lambda.max_abs() == 0.0);
  CHECK(z.mu.max_abs() == 0.0);
  CHECK(z.omega.max_abs() == 0.0);

  const StrainDecomposition s = strain_decompose(
      {ScalarField::from_function(g, [](double, double y) { return std::sin(y); }), ScalarField(g)});
  CHECK(s.lambda.max_abs() <= 1e-14);
  CHECK(max_abs_diff(s.mu, ScalarField::from_function(g, [](double, double y) { return 0.5 * std::cos(y); })) <= 1e-14);
  CHECK(max_abs_diff(s.omega, ScalarField::from_function(g, [](double, double y) { return -std::cos(y); })) <= 1e-14);

  const StrainDecomposition tg = strain_decompose(taylor_green(g));
  CHECK(max_abs_diff(tg.lambda, ScalarField::from_function(g, [](double x, double y) { return std::cos(x) * std::cos(y); })) <= 1e-14);
  CHECK(tg.mu.max_abs() <= 1e-14);
  CHECK(max_abs_diff(tg.omega, ScalarField::from_function(g, [](double x, double y) { return 2 * std::sin(x) * std::sin(y); })) <= 1e-14);

  // The velocity gradient is recovered from (λ, μ, ω) for divergence-free u.
  const SimState r = random_state(32, 3);
  const StrainDecomposition d = strain_decompose(r.u);
  const double scale = std::max(1.0, d.omega.max_abs());
  CHECK(max_abs_diff(ddx(r.u.x, Axis::x), d.lambda) <= 1e-12 * scale);
  CHECK(max_abs_diff(ddx(r.u.y, Axis::y), -1.0 * d.lambda) <= 1e-12 * scale);
  CHECK(max_abs_diff(ddx(r.u.x, Axis::y), d.mu - 0.5 * d.omega) <= 1e-12 * scale);
  CHECK(max_abs_diff(ddx(r.u.y, Axis::x), d.mu + 0.5 * d.omega) <= 1e-12 * scale);
}

TEST_CASE("stress tendency of uniform states") {
  const SpectralGrid g = make_grid(16, kTwoPi);
  PhysParams p;
  p.k = 0.7;
  const double rho0 = 1.3;
  const StressRhs eq = stress_rhs(uniform_state(g, 2 * rho0, rho0), p);
  CHECK(eq.da.max_abs() == 0.0);
  CHECK(eq.db.max_abs() == 0.0);
  CHECK(eq.dc.max_abs() <= 1e-15);

  const double c0 = 5.0;
  const StressRhs rel = stress_rhs(uniform_state(g, c0, rho0), p);
  CHECK(rel.da.max_abs() == 0.0);
  CHECK(rel.dc.max() == doctest::Approx(-2 * p.k * c0 + 4 * p.k * rho0).epsilon(1e-14));
  CHECK(rel.dc.min() == doctest::Approx(-2 * p.k * c0 + 4 * p.k * rho0).epsilon(1e-14));
}

TEST_CASE("stress tendency matches a matrix-form finite-difference discretization") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  PhysParams p;
  p.kappa = 0.05;
  p.k = 0.8;
  const SimState s{0.0,
                   {ScalarField::from_function(g, u1), ScalarField::from_function(g, u2)},
                   {ScalarField::from_function(g, fa), ScalarField::from_function(g, fb),
                    ScalarField::from_function(g, fc)},
                   ScalarField::from_function(g, frho)};
  const StressRhs r = stress_rhs(s, p);
  auto error = [&](double h) {
    double worst = 0.0;
    for (int iy = 0; iy < g.n(); ++iy) {
      for (int ix = 0; ix < g.n(); ++ix) {
        const auto fd = fd_stress_rhs(ix * g.spacing(), iy * g.spacing(), h, p);
        worst = std::max({worst, std::abs(fd[0] - r.da(ix, iy)), std::abs(fd[1] - r.db(ix, iy)),
                          std::abs(fd[2] - r.dc(ix, iy))});
      }
    }
    return worst;
  };
  const double e1 = error(0.04), e2 = error(0.02), e3 = error(0.01);
  CHECK(std::log2(e1 / e2) >= 1.9);
  CHECK(std::log2(e2 / e3) >= 1.9);
  CHECK(e3 <= 1e-3);
}

TEST_CASE("momentum tendency") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  PhysParams p;
  SimState s = uniform_state(g, 3.0, 1.0);
  s.stress.a = ScalarField(g, 0.4);
  VectorField m = momentum_rhs(s, p);
  CHECK(m.x.max_abs() == 0.0);
  CHECK(m.y.max_abs() == 0.0);

  // σ = ρ(x)𝕀 is a pure pressure.
  s = uniform_state(g, 0.0, 0.0);
  s.rho = ScalarField::from_function(g, [](double x, double y) { return 1 + 0.5 * std::sin(x) * std::cos(2 * y); });
  s.stress.c = 2.0 * s.rho;
  m = momentum_rhs(s, p);
  CHECK(m.x.max_abs() <= 1e-14);
  CHECK(m.y.max_abs() <= 1e-14);

  // Taylor–Green: the advection is a gradient, so du = νΔu = -2νu.
  s = uniform_state(g, 0.0, 0.0);
  s.u = taylor_green(g);
  m = momentum_rhs(s, p);
  CHECK(max_abs_diff(m.x, -2 * p.nu * s.u.x) <= 1e-14);
  CHECK(max_abs_diff(m.y, -2 * p.nu * s.u.y) <= 1e-14);
  const VectorSpectrum adv = projected_advection(forward(s.u), forward(s.u));
  CHECK(spectrum_max_abs(adv.x) <= 1e-15);
  CHECK(spectrum_max_abs(adv.y) <= 1e-15);

  const SimState r = random_state(32, 8);
  const VectorField mr = momentum_rhs(r, p);
  CHECK(l2_norm(divergence(mr)) <= 1e-12 * std::max(1.0, l2_norm(mr)));
}

TEST_CASE("density tendency") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  SimState s = uniform_state(g, 2.0, 1.0);
  s.u = taylor_green(g);
  CHECK(rho_rhs(s).max_abs() <= 1e-15);
  s = random_state(32, 5);
  s.u = {ScalarField(g), ScalarField(g)};
  CHECK(rho_rhs(s).max_abs() == 0.0);

  // ρ = ψ is constant along the streamlines of ∇⊥ψ.
  std::mt19937_64 rng(6);
  ScalarField psi = ScalarField::from_function(g, random_poly(rng, 5, kTwoPi));
  psi -= ScalarField(g, psi.mean());
  s = uniform_state(g, 2.0, 0.0);
  s.u = velocity_from_vorticity(laplacian(psi));
  s.rho = psi;
  const double scale = s.u.x.max_abs() * ddx(psi, Axis::x).max_abs();
  CHECK(rho_rhs(s).max_abs() <= 1e-12 * scale);

  // Transport terms are exact divergences.
  const SimState r = random_state(32, 9);
  const SpectralState sp = to_spectral(r);
  for (const Spectrum* f : {&sp.rho, &sp.stress.a, &sp.stress.b, &sp.stress.c}) {
    const Spectrum adv = scalar_advection(sp.u, *f);
    CHECK(std::abs(adv.mean()) <= 1e-12 * std::max(1.0, adv.backward().max_abs()));
  }
  CHECK(std::abs(rho_rhs(r).mean()) <= 1e-12 * std::max(1.0, rho_rhs(r).max_abs()));
}

TEST_CASE("pressure recovery") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  PhysParams p;
  p.bigK = 1.7;
  CHECK(recover_pressure(uniform_state(g, 0.0, 0.0), p).max_abs() == 0.0);

  SimState s = uniform_state(g, 0.0, 0.0);
  s.u = taylor_green(g);
  const ScalarField tg = ScalarField::from_function(
      g, [](double x, double y) { return 0.25 * (std::cos(2 * x) + std::cos(2 * y)); });
  CHECK(max_abs_diff(recover_pressure(s, p), tg) <= 1e-14);

  // u = 0, σ = ρ𝕀: ∇p = K∇ρ.
  s = uniform_state(g, 0.0, 0.0);
  s.rho = ScalarField::from_function(g, [](double x, double y) { return 2 + std::sin(x + y); });
  s.stress.c = 2.0 * s.rho;
  const ScalarField expected = p.bigK * (s.rho - ScalarField(g, s.rho.mean()));
  CHECK(max_abs_diff(recover_pressure(s, p), expected) <= 1e-13);

  // The projected tendency equals the unprojected one minus ∇p.
  const SimState r = smooth_state(32, 4);
  const ScalarField pr = recover_pressure(r, p);
  const VectorField m = momentum_rhs(r, p);
  const VectorSpectrum div_sigma = stress_divergence(to_spectral(r).stress);
  for (Axis ax : {Axis::x, Axis::y}) {
    const ScalarField& ui = ax == Axis::x ? r.u.x : r.u.y;
    const ScalarField adv = multiply(r.u.x, ddx(ui, Axis::x)) + multiply(r.u.y, ddx(ui, Axis::y));
    const ScalarField force = (ax == Axis::x ? div_sigma.x : div_sigma.y).backward();
    const ScalarField expected_m = -1.0 * adv + p.bigK * force - ddx(pr, ax) + p.nu * laplacian(ui);
    const ScalarField& got = ax == Axis::x ? m.x : m.y;
    CHECK(max_abs_diff(got, expected_m) <= 1e-12 * std::max(1.0, expected_m.max_abs()));
  }
}

TEST_CASE("determinant law") {
  const SpectralGrid g = make_grid(16, kTwoPi);
  PhysParams p;
  p.kappa = 0.0;
  p.k = 0.9;
  const double rho0 = 1.5;
  CHECK(determinant_rhs(uniform_state(g, 2 * rho0, rho0), p).max_abs() <= 1e-14);
  const double c0 = 3.0;
  const ScalarField r = determinant_rhs(uniform_state(g, c0, rho0), p);
  CHECK(r.max() == doctest::Approx(-p.k * c0 * c0 + 2 * p.k * rho0 * c0).epsilon(1e-14));

  PhysParams diffusive = p;
  diffusive.kappa = 0.01;
  CHECK_THROWS_AS(determinant_rhs(uniform_state(g, c0, rho0), diffusive), std::invalid_argument);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SimState s = smooth_state(64, seed);
    const StressRhs sr = stress_rhs(s, p);
    const ScalarField d = determinant_rhs(s, p);
    ScalarField assembled(s.grid());
    for (std::size_t i = 0; i < assembled.values().size(); ++i)
      assembled.values()[i] = 0.5 * s.stress.c.values()[i] * sr.dc.values()[i] -
                              2 * s.stress.a.values()[i] * sr.da.values()[i] -
                              2 * s.stress.b.values()[i] * sr.db.values()[i];
    CHECK(max_abs_diff(assembled, d) <= 1e-10);
  }
}

TEST_CASE("energy-rate identity and cubic cancellation") {
  PhysParams p;
  for (std::uint64_t seed : {11u, 12u}) {
    const SimState s = random_state(64, seed);
    const SpectralState sp = to_spectral(s);
    const VectorField m = momentum_rhs(s, p);
    const StressRhs r = stress_rhs(s, p);
    const double rate = 2 * (inner(sp.u.x, m.x.forward()) + inner(sp.u.y, m.y.forward())) +
                        p.bigK * r.dc.integral();
    const double visc = 2 * p.nu * (grad_norm_sq(sp.u.x) + grad_norm_sq(sp.u.y));
    const double relax = 2 * p.k * p.bigK * s.stress.c.integral();
    const double src = 4 * p.k * p.bigK * s.rho.integral();
    const double scale = std::max({1.0, visc, relax, src});
    CHECK(rate <= -visc - relax + src + 1e-8 * scale);

    const SpectralState t = explicit_tendency(sp, p);
    const double cubic = 2 * (inner(sp.u.x, t.u.x) + inner(sp.u.y, t.u.y)) +
                         p.bigK * t.stress.c.mean().real() * s.grid().area();
    CHECK(std::abs(cubic) <= 1e-9 * scale);
  }
}

TEST_CASE("linear propagator is the exact flow of the linear part") {
  const SpectralGrid g = make_grid(16, kTwoPi);
  PhysParams p;
  p.k = 0.6;
  const SpectralState s = to_spectral(smooth_state(16, 2));
  const double h = 0.3;
  SpectralState a = s, b = s, back = s;
  LinearPropagator(g, p, h).apply(a);
  LinearPropagator(g, p, h / 2).apply(b);
  LinearPropagator(g, p, h / 2).apply(b);
  LinearPropagator(g, p, h).apply(back);
  LinearPropagator(g, p, -h).apply(back);
  using Pair = std::pair<const Spectrum*, const Spectrum*>;
  for (auto [x, y] : {Pair{&a.stress.c, &b.stress.c}, Pair{&a.u.x, &b.u.x},
                      Pair{&back.stress.c, &s.stress.c}, Pair{&back.stress.a, &s.stress.a}})
    CHECK(spectrum_max_abs(*x - *y) <= 1e-13 * spectrum_max_abs(*y));

  // Uniform relaxation: c(h) = 2ρ + (c − 2ρ)e^{−2kh}.
  SpectralState u = to_spectral(uniform_state(g, 5.0, 1.0));
  LinearPropagator(g, p, h).apply(u);
  CHECK(u.stress.c.mean().real() == doctest::Approx(2 + 3 * std::exp(-2 * p.k * h)).epsilon(1e-15));
}
