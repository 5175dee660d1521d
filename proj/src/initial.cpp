#include "oldb2d/initial.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "oldb2d/diagnostics.hpp"
#include "oldb2d/snapshot.hpp"

namespace oldb2d {

ScalarField random_band_limited(const SpectralGrid& grid, int band, std::uint64_t seed) {
  Spectrum f(grid);
  if (band <= 0) return f.backward();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Half-plane enumeration so each real mode is drawn once.
  for (int ky = -band; ky <= band; ++ky) {
    for (int kx = 0; kx <= band; ++kx) {
      if (kx == 0 && ky <= 0) continue;
      const double re = normal(rng);
      const double im = normal(rng);
      const double decay = 1.0 / (1.0 + kx * kx + ky * ky);
      f.at(kx, ky) = Complex(re, im) * decay;
      if (kx == 0) f.at(0, -ky) = std::conj(f.at(0, ky));
    }
  }
  ScalarField r = f.backward();
  const double m = r.max_abs();
  if (m > 0.0) r *= 1.0 / m;
  return r;
}

namespace {

SimState zero_state(const SpectralGrid& g) {
  return {0.0, {ScalarField(g), ScalarField(g)},
          {ScalarField(g), ScalarField(g), ScalarField(g)}, ScalarField(g)};
}

SimState random_admissible(const InitialSpec& spec, const SpectralGrid& g) {
  // Distinct, reproducible streams per field.
  std::vector<std::uint64_t> seeds(5);
  {
    std::mt19937_64 master(spec.seed);
    for (auto& s : seeds) s = master();
  }
  const ScalarField ra = random_band_limited(g, spec.band, seeds[0]);
  const ScalarField rb = random_band_limited(g, spec.band, seeds[1]);
  const ScalarField rd = random_band_limited(g, spec.band, seeds[2]);
  const ScalarField rpsi = random_band_limited(g, spec.band, seeds[3]);
  const ScalarField rrho = random_band_limited(g, spec.band, seeds[4]);

  SimState s = zero_state(g);
  s.stress.a = spec.stress_amp * ra;
  s.stress.b = spec.stress_amp * rb;
  auto a = s.stress.a.values();
  auto b = s.stress.b.values();
  auto c = s.stress.c.values();
  auto d = rd.values();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double det = spec.d_mean * (1.0 + 0.5 * d[i]);
    c[i] = 2.0 * std::sqrt(a[i] * a[i] + b[i] * b[i] + det);
  }

  VectorField u = velocity_from_vorticity(laplacian(rpsi));
  double umax = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    umax = std::max(umax, std::hypot(u.x.values()[i], u.y.values()[i]));
  const double scale = umax > 0.0 ? spec.u_amp / umax : 0.0;
  s.u = {scale * u.x, scale * u.y};

  s.rho = ScalarField(g, spec.rho_mean);
  s.rho += (spec.rho_mean * spec.rho_amp) * rrho;
  return s;
}

}  // namespace

SimState smooth_admissible(const SpectralGrid& g, const SmoothSpec& spec) {
  std::mt19937_64 master(spec.seed);
  auto field = [&] { return random_band_limited(g, spec.band, master()); };
  SimState s = zero_state(g);
  s.stress.a = spec.stress_amp * field();
  s.stress.b = spec.stress_amp * field();
  s.stress.c = ScalarField(g, 2.0);
  s.stress.c += (2.0 * spec.c_amp) * field();
  VectorField u = velocity_from_vorticity(laplacian(field()));
  double umax = 0.0;
  for (std::size_t i = 0; i < g.real_size(); ++i)
    umax = std::max(umax, std::hypot(u.x.values()[i], u.y.values()[i]));
  const double scale = umax > 0.0 ? spec.u_amp / umax : 0.0;
  s.u = {scale * u.x, scale * u.y};
  s.rho = ScalarField(g, 1.0);
  s.rho += spec.rho_amp * field();
  if (!positivity_report(s, 0.0).pass)
    throw std::invalid_argument("smooth_admissible: amplitudes do not give an admissible state");
  return s;
}

SimState build_initial(const RunConfig& cfg, const SpectralGrid& grid) {
  const InitialSpec& spec = cfg.initial;
  SimState s = zero_state(grid);
  if (spec.preset == "equilibrium") {
    s.stress.c = ScalarField(grid, 2.0 * spec.rho0);
    s.rho = ScalarField(grid, spec.rho0);
  } else if (spec.preset == "uniform") {
    s.stress.c = ScalarField(grid, spec.c0);
    s.rho = ScalarField(grid, spec.rho0);
  } else if (spec.preset == "taylor_green") {
    const double amp = spec.u_amp;
    const double w = 2.0 * M_PI / grid.length();
    s.u.x = ScalarField::from_function(
        grid, [&](double x, double y) { return amp * std::sin(w * x) * std::cos(w * y); });
    s.u.y = ScalarField::from_function(
        grid, [&](double x, double y) { return -amp * std::cos(w * x) * std::sin(w * y); });
  } else if (spec.preset == "random_admissible") {
    s = random_admissible(spec, grid);
  } else if (spec.preset == "snapshot") {
    s = read_snapshot(spec.snapshot_path, grid);
  } else {
    throw std::invalid_argument("unknown preset '" + spec.preset + "'");
  }
  const PositivityReport rep = positivity_report(s, kAdmissibleTol);
  if (!rep.pass)
    throw std::logic_error("preset '" + spec.preset + "' produced a non-admissible state");
  return s;
}

SimState build_initial(const RunConfig& cfg) {
  return build_initial(cfg, make_grid(cfg.n, cfg.L));
}

}  // namespace oldb2d
