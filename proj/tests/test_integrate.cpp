#include <doctest.h>

#include <random>

#include "oldb2d/config.hpp"
#include "oldb2d/errors.hpp"
#include "oldb2d/initial.hpp"
#include "oldb2d/integrate.hpp"
#include "support.hpp"

using namespace oldb2d;
using namespace testing;

namespace {

SimState uniform_state(const SpectralGrid& g, double c, double rho) {
  return {0.0, {ScalarField(g), ScalarField(g)},
          {ScalarField(g), ScalarField(g), ScalarField(g, c)}, ScalarField(g, rho)};
}

SimState taylor_green_state(const SpectralGrid& g) {
  SimState s = uniform_state(g, 0.0, 0.0);
  s.u = {ScalarField::from_function(g, [](double x, double y) { return std::sin(x) * std::cos(y); }),
         ScalarField::from_function(g, [](double x, double y) { return -std::cos(x) * std::sin(y); })};
  return s;
}

double kinetic(const SimState& s) {
  const double n = l2_norm(s.u);
  return n * n;
}

StepControl fixed(double dt, double t_end) {
  StepControl c;
  c.dt_min = c.dt_max = dt;
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST_CASE("step control invariants") {
  StepControl c;
  CHECK_NOTHROW(c.validate());
  c.cfl = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = StepControl{};
  c.dt_min = 1.0;
  c.dt_max = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = StepControl{};
  c.output_every = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("compute_dt") {
  const SpectralGrid g = make_grid(64, kTwoPi);
  PhysParams p;
  StepControl c;
  c.dt_max = 1.0;
  CHECK(compute_dt(uniform_state(g, 2, 1), p, c) == 1.0);

  SimState s = uniform_state(g, 2, 1);
  s.u.x = ScalarField(g, 1.0);
  CHECK(compute_dt(s, p, c) == doctest::Approx(M_PI / 64).epsilon(1e-15));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ud(1e-4, 1e-1);
  for (int i = 0; i < 20; ++i) {
    StepControl r;
    r.dt_min = ud(rng) * 1e-2;
    r.dt_max = r.dt_min + ud(rng);
    s.u.x = noise(g, rng, -ud(rng) * 100, ud(rng) * 100);
    const double dt = compute_dt(s, p, r);
    CHECK(dt >= r.dt_min);
    CHECK(dt <= r.dt_max);
  }
}

TEST_CASE("step preconditions and the equilibrium fixed point") {
  const SpectralGrid g = make_grid(16, kTwoPi);
  PhysParams p;
  const SimState eq = uniform_state(g, 2.6, 1.3);
  CHECK_THROWS_AS(step(eq, 0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(step(eq, -1e-3, p), std::invalid_argument);
  SimState bad = eq;
  bad.stress.a(3, 4) = 5.0;
  CHECK_THROWS_AS(step(bad, 1e-3, p), MonitorViolation);

  const SimState next = step(eq, 0.01, p);
  CHECK(next.time == doctest::Approx(0.01));
  CHECK(max_abs_diff(next.stress.c, eq.stress.c) <= 1e-13);
  CHECK(max_abs_diff(next.rho, eq.rho) <= 1e-13);
  CHECK(next.u.x.max_abs() <= 1e-13);
  CHECK(next.stress.a.max_abs() <= 1e-13);
}

TEST_CASE("uniform relaxation follows the exact ODE solution") {
  const SpectralGrid g = make_grid(16, kTwoPi);
  PhysParams p;
  p.k = 2.0;
  const double c0 = 5.0, rho0 = 0.7, T = 1.0 / p.k;
  SimState s = uniform_state(g, c0, rho0);
  const double dt = 1e-3 / p.k;
  const int n = static_cast<int>(std::lround(T / dt));
  for (int i = 0; i < n; ++i) s = step(s, dt, p);
  const double exact = 2 * rho0 + (c0 - 2 * rho0) * std::exp(-2 * p.k * T);
  CHECK(std::abs(s.stress.c.mean() - exact) <= 1e-8 * exact);
  CHECK(s.stress.c.max() - s.stress.c.min() <= 1e-13);
}

TEST_CASE("Taylor-Green decay") {
  const SpectralGrid g = make_grid(32, kTwoPi);
  PhysParams p;
  const SimState s0 = taylor_green_state(g);
  const Trajectory tr = run(s0, p, fixed(0.01, 0.5));
  const double expected = kinetic(s0) * std::exp(-4 * p.nu * 0.5);
  CHECK(std::abs(kinetic(tr.final_state) - expected) <= 1e-6 * expected);
  CHECK(tr.final_state.stress.c.max_abs() == 0.0);
  for (const auto& r : tr.records) CHECK(r.min_gamma == 0.0);
}

TEST_CASE("run records, snapshots and stops") {
  const SpectralGrid g = make_grid(16, kTwoPi);
  PhysParams p;
  StepControl c = fixed(0.01, 0.1);
  c.output_every = 3;
  c.snapshot_times = {0.05, 0.02};
  const Trajectory tr = run(uniform_state(g, 2.0, 1.0), p, c);
  CHECK(tr.steps == 10);
  CHECK(tr.records.size() == static_cast<std::size_t>(tr.steps / 3 + 1));
  REQUIRE(tr.snapshots.size() == 2);
  CHECK(tr.snapshots[0].time == doctest::Approx(0.02));
  CHECK(tr.snapshots[1].time == doctest::Approx(0.05));
  CHECK(tr.final_state.time == 0.1);
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    CHECK(tr.records[i].time > tr.records[i - 1].time);
    CHECK(tr.records[i].energy == doctest::Approx(tr.records[0].energy).epsilon(1e-12));
    CHECK(tr.records[i].min_gamma == doctest::Approx(tr.records[0].min_gamma).epsilon(1e-12));
  }

  // A snapshot time that is not a multiple of the step shortens one step.
  c = fixed(0.01, 0.05);
  c.snapshot_times = {0.025};
  const Trajectory t2 = run(uniform_state(g, 2.0, 1.0), p, c);
  CHECK(t2.steps == 6);
  CHECK(t2.snapshots.at(0).time == doctest::Approx(0.025).epsilon(1e-14));
}

TEST_CASE("run monitors") {
  const SpectralGrid g = make_grid(16, kTwoPi);
  PhysParams p;
  SimState bad = uniform_state(g, 2.0, 1.0);
  bad.stress.b(1, 1) = 2.0;
  try {
    run(bad, p, fixed(0.01, 0.1));
    FAIL("expected a monitor violation");
  } catch (const MonitorViolation& e) {
    CHECK(e.monitor() == "positivity");
    CHECK(e.value() < 0.0);
  }

  MonitorSet low;
  low.c_ceiling = 1.0;
  CHECK_THROWS_AS(run(uniform_state(g, 2.0, 1.0), p, fixed(0.01, 0.1), low), NumericalFailure);

  SimState nan = uniform_state(g, 2.0, 1.0);
  nan.rho(0, 0) = std::nan("");
  CHECK_THROWS_AS(run(nan, p, fixed(0.01, 0.1)), NumericalFailure);

  RunConfig cfg;
  cfg.n = 16;
  cfg.initial.u_amp = 50.0;
  StepControl c = fixed(0.05, 1.0);
  CHECK_THROWS_AS(run(build_initial(cfg, g), p, c), NumericalFailure);
}

TEST_CASE("positivity persists on random admissible runs") {
  RunConfig cfg;
  cfg.n = 32;
  cfg.initial.band = 8;
  PhysParams p;
  for (std::uint64_t seed : {3u, 4u}) {
    cfg.initial.seed = seed;
    const SimState s = build_initial(cfg);
    const Trajectory tr = run(s, p, fixed(5e-3, 0.5));
    double worst = INFINITY, sup_c = 1.0;
    for (const auto& r : tr.records) {
      worst = std::min(worst, r.min_eigenvalue);
      sup_c = std::max(sup_c, r.c_max);
    }
    CHECK(worst >= -1e-10 * sup_c);
  }
}

TEST_CASE("determinant residual is recorded on kappa = 0 runs") {
  const SpectralGrid g = make_grid(16, kTwoPi);
  PhysParams p;
  p.kappa = 0.0;
  const Trajectory tr = run(uniform_state(g, 2.0, 1.0), p, fixed(0.01, 0.05));
  CHECK(std::isnan(tr.records.front().determinant_residual));
  CHECK(tr.records[2].determinant_residual <= 1e-12);
  p.kappa = 0.01;
  const Trajectory t2 = run(uniform_state(g, 2.0, 1.0), p, fixed(0.01, 0.05));
  CHECK(std::isnan(t2.records[2].determinant_residual));
}
