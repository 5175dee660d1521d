#pragma once

#include "oldb2d/config.hpp"
#include "oldb2d/fields.hpp"

namespace oldb2d {

/// Builds the initial state of a preset on the given grid.
///
/// random_admissible draws band-limited fields (integer wavenumbers with
/// 1 ≤ |k|∞ ≤ band, normal amplitudes from a seeded mt19937_64) and sets
///   a, b = stress_amp · r_a, r_b
///   d    = d_mean (1 + r_d / 2)
///   c    = 2 √(a² + b² + d)
///   u    = ∇⊥ψ with max |u| = u_amp
///   ρ    = rho_mean (1 + rho_amp r_ρ)
/// where each r is normalised to max |r| = 1. Then σ has eigenvalues
/// √(a²+b²+d) ± √(a²+b²), strictly positive.
///
/// Throws FormatError for an unreadable snapshot and std::logic_error if the
/// result fails the positivity check.
SimState build_initial(const RunConfig& cfg, const SpectralGrid& grid);
SimState build_initial(const RunConfig& cfg);

/// Zero-mean band-limited random field with max |r| = 1 (zero field if band = 0).
ScalarField random_band_limited(const SpectralGrid& grid, int band, std::uint64_t seed);

/// Admissible state with every field band-limited to |k|∞ ≤ band, so that
/// quadratic products of it are alias-free under the 2/3 rule when band ≤ n/6:
///   c = 2 (1 + c_amp r_c),  a, b = stress_amp r,  ρ = 1 + rho_amp r_ρ,
///   u = ∇⊥ψ with max |u| = u_amp.
/// γ > 0 holds when √2 · stress_amp < 1 - c_amp.
struct SmoothSpec {
  int band = 2;
  std::uint64_t seed = 1;
  double u_amp = 0.1;
  double stress_amp = 0.1;
  double c_amp = 0.1;
  double rho_amp = 0.1;
};
SimState smooth_admissible(const SpectralGrid& grid, const SmoothSpec& spec);

}  // namespace oldb2d
