#include <doctest.h>

#include <complex>
#include <random>
#include <stdexcept>

#include "oldb2d/spectral.hpp"
#include "support.hpp"

using namespace oldb2d;
using namespace testing;

namespace {

ScalarField sample(const SpectralGrid& g, double (*f)(double, double)) {
  return ScalarField::from_function(g, f);
}

VectorField random_vector(const SpectralGrid& g, std::mt19937_64& rng) {
  return {noise(g, rng), noise(g, rng)};
}

double vec_l2(const VectorField& v) { return l2_norm(v); }

VectorField minus(const VectorField& a, const VectorField& b) { return {a.x - b.x, a.y - b.y}; }

}  // namespace

TEST_CASE("grid construction and dealias mask") {
  const SpectralGrid g8 = make_grid(8, kTwoPi);
  CHECK(g8.n() == 8);
  CHECK(g8.columns() == 5);
  const auto& mask = g8.dealias_mask();
  for (int iy = 0; iy < 8; ++iy) {
    for (int ix = 0; ix < g8.columns(); ++ix) {
      const int kx = g8.wave_x(ix), ky = g8.wave_y(iy);
      const bool expected = std::abs(kx) <= 2 && std::abs(ky) <= 2;
      CHECK(mask[g8.mode_index(ix, iy)] == expected);
      CHECK(g8.kx()[ix] == doctest::Approx(kx));
    }
  }
  CHECK(mask[0]);

  const SpectralGrid g64 = make_grid(64, kTwoPi);
  CHECK(g64.dealias_mask()[g64.slot_of(20, 0)]);
  CHECK(g64.dealias_mask()[g64.slot_of(21, 0)]);
  CHECK_FALSE(g64.dealias_mask()[g64.slot_of(22, 0)]);
  CHECK_FALSE(g64.dealias_mask()[g64.slot_of(0, -22)]);

  CHECK_THROWS_AS(make_grid(7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(6, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(16, 0.0), std::invalid_argument);
}

TEST_CASE("forward and backward transforms") {
  const SpectralGrid g = make_grid(32, 3.0);
  std::mt19937_64 rng(1);
  const ScalarField f = noise(g, rng);
  const ScalarField back = f.forward().backward();
  CHECK(max_abs_diff(back, f) <= 1e-13 * f.max_abs());
  CHECK(f.forward().mean().real() == doctest::Approx(f.mean()).epsilon(1e-14));
  CHECK(std::abs(f.forward().mean().imag()) < 1e-15);
}

TEST_CASE("ddx") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  const ScalarField s = sample(g, [](double x, double) { return std::sin(x); });
  const ScalarField c = sample(g, [](double x, double) { return std::cos(x); });
  CHECK(max_abs_diff(ddx(s, Axis::x), c) <= 1e-13);
  CHECK(ddx(s, Axis::y).max_abs() <= 1e-13);
  CHECK(ddx(ScalarField(g, 3.5), Axis::x).max_abs() == 0.0);

  // Complex-step differentiation as an independent derivative oracle.
  const ScalarField f = sample(g, [](double x, double y) { return std::sin(3 * x) * std::cos(2 * y); });
  const double h = 1e-30;
  const ScalarField oracle = ScalarField::from_function(g, [h](double x, double y) {
    const std::complex<double> yc(y, h);
    return (std::sin(3 * x) * std::cos(2.0 * yc)).imag() / h;
  });
  const ScalarField analytic =
      sample(g, [](double x, double y) { return -2 * std::sin(3 * x) * std::sin(2 * y); });
  CHECK(max_abs_diff(oracle, analytic) <= 1e-15);
  CHECK(max_abs_diff(ddx(f, Axis::y), oracle) <= 1e-13);
}

TEST_CASE("differentiation exact on retained modes") {
  std::mt19937_64 rng(7);
  for (double length : {kTwoPi, 1.0}) {
    const SpectralGrid g = make_grid(48, length);
    const TrigPoly p = random_poly(rng, 16, length, 10);
    const ScalarField f = ScalarField::from_function(g, p);
    for (int axis : {0, 1}) {
      const ScalarField exact =
          ScalarField::from_function(g, [&](double x, double y) { return p.d(axis, x, y); });
      const ScalarField d = ddx(f, axis == 0 ? Axis::x : Axis::y);
      CHECK(max_abs_diff(d, exact) <= 1e-13 * exact.max_abs());
    }
  }
}

TEST_CASE("laplacian") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  const ScalarField s = sample(g, [](double x, double) { return std::sin(x); });
  CHECK(max_abs_diff(laplacian(s), -1.0 * s) <= 1e-13);
  CHECK(laplacian(ScalarField(g, 2.0)).max_abs() == 0.0);

  std::mt19937_64 rng(3);
  const ScalarField f = ScalarField::from_function(g, random_poly(rng, 10, kTwoPi));
  const ScalarField composed = ddx(ddx(f, Axis::x), Axis::x) + ddx(ddx(f, Axis::y), Axis::y);
  CHECK(max_abs_diff(laplacian(f), composed) <= 1e-12 * composed.max_abs());
}

TEST_CASE("dealias") {
  const SpectralGrid g = make_grid(64, kTwoPi);
  Spectrum one(g);
  one.at(1, 0) = {0.5, -0.25};
  const Spectrum kept = dealias(one);
  CHECK(kept.at(1, 0) == one.at(1, 0));
  Spectrum high(g);
  high.at(31, 0) = {1.0, 0.0};
  CHECK(spectrum_max_abs(dealias(high)) == 0.0);

  std::mt19937_64 rng(5);
  const Spectrum f = noise(g, rng).forward();
  const Spectrum once = dealias(f);
  const Spectrum twice = dealias(once);
  for (std::size_t i = 0; i < g.spectral_size(); ++i) CHECK(once.coeffs()[i] == twice.coeffs()[i]);
}

TEST_CASE("Leray projection") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  const VectorField shear{sample(g, [](double, double y) { return std::sin(y); }), ScalarField(g)};
  CHECK(vec_l2(minus(leray_project(shear), shear)) <= 1e-13 * vec_l2(shear));

  const VectorField grad{sample(g, [](double x, double y) { return std::cos(x) * std::sin(y); }),
                         sample(g, [](double x, double y) { return std::sin(x) * std::cos(y); })};
  CHECK(vec_l2(leray_project(grad)) <= 1e-13 * vec_l2(grad));

  std::mt19937_64 rng(9);
  const VectorField v = random_vector(g, rng);
  const VectorField pv = leray_project(v);
  CHECK(vec_l2(minus(leray_project(pv), pv)) <= 1e-13 * vec_l2(v));
  const Spectrum div = divergence(forward(pv));
  CHECK(spectrum_max_abs(div) <= 1e-13 * vec_l2(v));
  // Orthogonal projection: the removed part is orthogonal to the kept part.
  const VectorField removed = minus(v, pv);
  const double cross = inner(removed.x.forward(), pv.x.forward()) +
                       inner(removed.y.forward(), pv.y.forward());
  CHECK(std::abs(cross) <= 1e-12 * vec_l2(v) * vec_l2(v));
}

TEST_CASE("heat semigroup") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  std::mt19937_64 rng(11);
  const ScalarField f = noise(g, rng);
  CHECK(max_abs_diff(heat_semigroup(f, 0.3, 2.0, 0.0), f) <= 1e-14);

  const double nu = 0.07, t = 1.3;
  const ScalarField s = sample(g, [](double x, double) { return std::sin(x); });
  CHECK(max_abs_diff(heat_semigroup(s, nu, 0.0, t), std::exp(-nu * t) * s) <= 1e-14);

  const double k = 0.8;
  const ScalarField one = heat_semigroup(ScalarField(g, 1.0), 0.01, 2 * k, t);
  CHECK(max_abs_diff(one, ScalarField(g, std::exp(-2 * k * t))) <= 1e-15);

  const Spectrum fh = f.forward();
  const Spectrum joint = heat_semigroup(fh, 0.02, 1.0, 0.7);
  const Spectrum split = heat_semigroup(heat_semigroup(fh, 0.02, 1.0, 0.3), 0.02, 1.0, 0.4);
  CHECK(spectrum_max_abs(joint - split) <= 1e-13 * spectrum_max_abs(fh));

  CHECK_THROWS_AS(heat_semigroup(fh, 0.1, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("inverse laplacian") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  const ScalarField s = sample(g, [](double x, double) { return std::sin(x); });
  CHECK(max_abs_diff(invert_laplacian(-1.0 * s), s) <= 1e-13);

  std::mt19937_64 rng(13);
  ScalarField f = ScalarField::from_function(g, random_poly(rng, 12, kTwoPi));
  f -= ScalarField(g, f.mean());
  CHECK(max_abs_diff(invert_laplacian(laplacian(f)), f) <= 1e-12 * f.max_abs());
  CHECK_THROWS_AS(invert_laplacian(ScalarField(g, 1.0)), std::domain_error);
}

TEST_CASE("velocity from vorticity") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  const ScalarField w = sample(g, [](double x, double y) { return 2 * std::sin(x) * std::sin(y); });
  const VectorField u = velocity_from_vorticity(w);
  CHECK(max_abs_diff(curl(u), w) <= 1e-13);
  CHECK(divergence(u).max_abs() <= 1e-13);
  const ScalarField ux = sample(g, [](double x, double y) { return std::sin(x) * std::cos(y); });
  const ScalarField uy = sample(g, [](double x, double y) { return -std::cos(x) * std::sin(y); });
  CHECK(max_abs_diff(u.x, ux) <= 1e-13);
  CHECK(max_abs_diff(u.y, uy) <= 1e-13);

  const VectorField zero = velocity_from_vorticity(ScalarField(g));
  CHECK(zero.x.max_abs() == 0.0);
  CHECK(zero.y.max_abs() == 0.0);

  std::mt19937_64 rng(17);
  ScalarField r = ScalarField::from_function(g, random_poly(rng, 12, kTwoPi));
  r -= ScalarField(g, r.mean());
  CHECK(max_abs_diff(curl(velocity_from_vorticity(r)), r) <= 1e-12 * r.max_abs());
}

TEST_CASE("Parseval norms") {
  const SpectralGrid g = make_grid(32, 2.0);
  std::mt19937_64 rng(19);
  const ScalarField f = noise(g, rng);
  double direct = 0.0;
  for (double v : f.values()) direct += v * v;
  direct *= g.cell_area();
  CHECK(l2_norm_sq(f.forward()) == doctest::Approx(direct).epsilon(1e-12));

  const SpectralGrid g2 = make_grid(32, kTwoPi);
  const ScalarField s = sample(g2, [](double x, double y) { return std::sin(2 * x) * std::cos(y); });
  // ∫|∇f|² = (4 + 1) ∫f², ∫|Δf|² = 25 ∫f², ∫f² = π².
  const double pi2 = M_PI * M_PI;
  const Spectrum sh = s.forward();
  CHECK(l2_norm_sq(sh) == doctest::Approx(pi2).epsilon(1e-13));
  CHECK(grad_norm_sq(sh) == doctest::Approx(5 * pi2).epsilon(1e-13));
  CHECK(lap_norm_sq(sh) == doctest::Approx(25 * pi2).epsilon(1e-13));
  CHECK(sobolev_norm_sq(sh, 2) == doctest::Approx(31 * pi2).epsilon(1e-13));
}
