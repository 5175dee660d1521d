#pragma once

// Right-hand sides of the coupled system
//   D_t a = -ω b + c λ - 2k a + κΔa
//   D_t b =  ω a + c μ - 2k b + κΔb
//   D_t c = 4(λ a + μ b) - 2k c + κΔc + 4kρ
//   D_t ρ = 0
//   ∂_t u = ℙ(-u·∇u + K div σ) + νΔu
// with D_t = ∂_t + u·∇ and λ, μ, ω the strain rates and vorticity of u.
//
// Dealiasing rule: both factors of every quadratic product are truncated to
// the 2/3 mask before the pointwise multiply, and the product is truncated
// again afterwards. The whole momentum forcing (including K div σ) is
// restricted to retained modes, so a band-limited velocity stays band-limited.

#include "oldb2d/fields.hpp"
#include "oldb2d/spectral.hpp"

namespace oldb2d {

struct StrainDecomposition {
  ScalarField lambda;  ///< (∂₁u¹ - ∂₂u²)/2
  ScalarField mu;      ///< (∂₁u² + ∂₂u¹)/2
  ScalarField omega;   ///< ∂₁u² - ∂₂u¹
};

struct StateDerivative {
  VectorField du;
  ScalarField da, db, dc, drho;
};

struct StressSpectrum {
  Spectrum a, b, c;
  StressSpectrum& operator+=(const StressSpectrum& o);
  StressSpectrum& operator*=(double s);
  StressSpectrum& axpy(double s, const StressSpectrum& o);
};

/// Spectral image of a SimState; the integrator and the Picard solver work here.
struct SpectralState {
  double time = 0.0;
  VectorSpectrum u;
  StressSpectrum stress;
  Spectrum rho;

  const SpectralGrid& grid() const { return rho.grid(); }
  SpectralState& operator+=(const SpectralState& o);
  SpectralState& operator*=(double s);
  /// this += s * o (time untouched)
  SpectralState& axpy(double s, const SpectralState& o);
};

SpectralState to_spectral(const SimState& s);
SimState to_physical(const SpectralState& s);

StrainDecomposition strain_decompose(const VectorField& u);

/// (da, db, dc) of the stress system, products dealiased.
struct StressRhs {
  ScalarField da, db, dc;
};
StressRhs stress_rhs(const SimState& state, const PhysParams& params);

/// ℙ(-u·∇u + K div σ) + νΔu (forcing restricted to retained modes).
VectorField momentum_rhs(const SimState& state, const PhysParams& params);

/// -u·∇ρ, dealiased.
ScalarField rho_rhs(const SimState& state);

/// Full time derivative of the state.
StateDerivative full_rhs(const SimState& state, const PhysParams& params);

/// p = (-Δ)⁻¹ div(u·∇u - K div σ), zero mean. Diagnostic only.
ScalarField recover_pressure(const SimState& state, const PhysParams& params);

/// -u·∇d - 4k d + 2kρc with d = c²/4 - a² - b², evaluated pointwise.
/// Exact only for κ = 0; throws std::invalid_argument otherwise.
ScalarField determinant_rhs(const SimState& state, const PhysParams& params);

/// div σ from (a, b, c): (∂₁(c/2 + a) + ∂₂b, ∂₁b + ∂₂(c/2 - a)).
VectorSpectrum stress_divergence(const StressSpectrum& s);

// ---- spectral engine (shared with the integrator and the Picard solver) ----

/// The non-stiff part of the tendency: dealiased transport, stretching and
/// coupling terms; ρ contributes nothing here (its source in the c equation
/// belongs to the linear part).
SpectralState explicit_tendency(const SpectralState& s, const PhysParams& params);

/// Stress tendency -u·∇σ + (∇u)σ + σ(∇u)ᵀ in (a, b, c) form, dealiased.
StressSpectrum stretching_tendency(const VectorSpectrum& u, const StressSpectrum& sigma);

/// ℙ-projected, dealiased u·∇v.
VectorSpectrum projected_advection(const VectorSpectrum& u, const VectorSpectrum& v);

/// Dealiased -u·∇f.
Spectrum scalar_advection(const VectorSpectrum& u, const Spectrum& f);

/// Linear generator: u ↦ νΔu, (a, b) ↦ (κΔ - 2k)(a, b),
/// c ↦ (κΔ - 2k)c + 4kρ, ρ ↦ 0.
SpectralState linear_tendency(const SpectralState& s, const PhysParams& params);

/// Exact flow of the linear generator over a (possibly negative) time h.
class LinearPropagator {
 public:
  LinearPropagator(const SpectralGrid& grid, const PhysParams& params, double h);
  void apply(SpectralState& s) const;
  double h() const { return h_; }

 private:
  double h_;
  std::vector<double> velocity_;  // exp(-ν|k|² h)
  std::vector<double> stress_;    // exp(-(κ|k|² + 2k) h)
  std::vector<double> source_;    // 4k (1 - exp(-(κ|k|² + 2k) h)) / (κ|k|² + 2k)
};

}  // namespace oldb2d
