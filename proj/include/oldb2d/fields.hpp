#pragma once

// State types of the coupled velocity / polymer-stress / density system.
//
// The symmetric stress matrix is stored through the trace-free and trace
// coordinates
//   a = (σ11 - σ22)/2,  b = σ12,  c = σ11 + σ22,
// so that σ = [[c/2 + a, b], [b, c/2 - a]] and det σ = c²/4 - a² - b².

#include <map>
#include <string>

#include "oldb2d/spectral.hpp"
#include "oldb2d/units.hpp"

namespace oldb2d {

/// Physical coefficients, in cm/sec units.
struct PhysParams {
  double nu = 0.01;     ///< kinematic viscosity [cm²/sec]
  double kappa = 0.01;  ///< stress diffusivity [cm²/sec]
  double k = 1.0;       ///< damping frequency [1/sec]
  double bigK = 1.0;    ///< coupling constant [cm²/sec²]

  /// Throws ConfigError naming the violated invariant.
  void validate() const;
};

struct StressField {
  ScalarField a, b, c;
  const SpectralGrid& grid() const { return a.grid(); }
};

struct SimState {
  double time = 0.0;
  VectorField u;
  StressField stress;
  ScalarField rho;
  const SpectralGrid& grid() const { return rho.grid(); }
};

struct NormEntry {
  double value = 0.0;
  Dim units;
};

/// Named norms of a state. Keys:
///   u_L2 u_L4 grad_u_L2 grad_u_L4 omega_L2 omega_L4 grad_omega_L2 lap_omega_L2
///   sigma_L1 sigma_L2 sigma_L4 grad_sigma_L2 lap_sigma_L2
///   rho_L1 rho_L2 rho_L4 grad_rho_L2 rho_W12
/// Matrix norms are pointwise Frobenius; sigma_L1 is ∫ c dx.
using NormReport = std::map<std::string, NormEntry>;

/// Slack of the positivity test: admissible iff min γ ≥ -tol · max(1, max c).
inline constexpr double kAdmissibleTol = 1e-10;

StressField stress_from_matrix(const ScalarField& s11, const ScalarField& s12,
                               const ScalarField& s22);

struct StressMatrix {
  ScalarField s11, s12, s22;
};
StressMatrix matrix_from_stress(const StressField& s);

/// c/2 - √(a² + b²): the smaller eigenvalue of σ.
ScalarField min_eigenvalue(const StressField& s);
/// γ = c - 2√(a² + b²) = 2 · min_eigenvalue.
ScalarField gamma_field(const StressField& s);
/// c²/4 - a² - b², pointwise.
ScalarField determinant(const StressField& s);

double positivity_scale(const StressField& s);
bool is_admissible(const SimState& state, double tol = kAdmissibleTol);

NormReport norms(const SimState& state);

/// Swap the roles of x and y: u ↦ (u2, u1) at transposed points, a ↦ -a.
SimState transpose(const SimState& state);

}  // namespace oldb2d
