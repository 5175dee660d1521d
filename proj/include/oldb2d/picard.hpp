#pragma once

// Fixed-point solver for the integral (Duhamel) form of the system on a
// short horizon [0, t0]. Time-indexed fields are sampled on the uniform nodes
// t_j = j t0 / (M - 1) and kept in spectral form.
//
// Duhamel integrals ∫₀ᵗ e^{(t-s)A} f(s) ds are evaluated per mode with the
// exponential integrated exactly against the piecewise-linear interpolant of
// f between nodes (trapezoidal product rule). Time-constant integrands are
// therefore integrated exactly.

#include <span>
#include <stdexcept>
#include <vector>

#include "oldb2d/dynamics.hpp"
#include "oldb2d/errors.hpp"
#include "oldb2d/fields.hpp"

namespace oldb2d {

struct PicardConfig {
  double t0 = 0.1;
  int n_time_nodes = 41;
  int max_iter = 40;
  double tol = 1e-10;
  /// Largest transport sub-step inside N(u); the CFL rule may shorten it.
  double substep_max = 5e-3;
  double cfl = 0.5;
  /// Sub-steps shorter than this count as a CFL failure.
  double substep_min = 1e-8;

  /// Throws ConfigError unless t0 > 0, n_time_nodes ≥ 4, max_iter ≥ 1, tol > 0.
  void validate() const;
  double node_spacing() const { return t0 / (n_time_nodes - 1); }
  std::vector<double> nodes() const;
};

using VelocitySeries = std::vector<VectorSpectrum>;
using StressSeries = std::vector<StressSpectrum>;
using ScalarSeries = std::vector<Spectrum>;

/// A time-indexed triple (u, σ, ρ) on the Picard nodes.
struct PicardIterate {
  VelocitySeries u;
  StressSeries sigma;
  ScalarSeries rho;

  std::size_t size() const { return u.size(); }
  SpectralState at(std::size_t j, double time) const;
};

/// Discrete proxies of the X / Y / Z norms:
///   u: max_j ‖u‖_{W²²} + (∫ ‖u‖²_{W³²} dt)^{1/2}
///   σ: max_j ‖σ‖_{W¹²} + (∫ ‖σ‖²_{W²²} dt)^{1/2}
///   ρ: max_j (‖ρ‖_{L¹} + ‖ρ‖_{W¹²})
/// with time integrals by the trapezoidal rule.
struct CompositeNorm {
  double u = 0.0, sigma = 0.0, rho = 0.0;
  double total() const { return u + sigma + rho; }
};

CompositeNorm composite_norm(const PicardIterate& U, const PicardConfig& cfg);
PicardIterate difference(const PicardIterate& a, const PicardIterate& b);

struct PicardHistory {
  std::vector<CompositeNorm> norms;        ///< of each iterate U⁰, U¹, ...
  std::vector<CompositeNorm> differences;  ///< of U^{n+1} - U^n
  std::vector<double> relative;            ///< ‖U^{n+1} - U^n‖ / ‖U^{n+1}‖
  std::vector<double> ratios;              ///< successive-difference ratios
  bool converged = false;

  int iterations() const { return static_cast<int>(differences.size()); }
};

/// Raised when max_iter is reached (or an iterate stops being finite). The
/// history is kept; a non-finite iterate records an infinite ratio.
class PicardNonConvergence : public NumericalFailure {
 public:
  PicardNonConvergence(const std::string& what, PicardHistory history)
      : NumericalFailure(what), history_(std::move(history)) {}
  const PicardHistory& history() const { return history_; }
  double last_ratio() const;

 private:
  PicardHistory history_;
};

struct PicardResult {
  std::vector<double> times;
  PicardIterate trajectory;
  PicardHistory history;

  SpectralState final_state() const { return trajectory.at(times.size() - 1, times.back()); }
};

// ---- integral operators -------------------------------------------------------

/// -∫₀ᵗ e^{ν(t-s)Δ} ℙ(u·∇v)(s) ds
VelocitySeries op_q1(std::span<const VectorSpectrum> u, std::span<const VectorSpectrum> v,
                     const PhysParams& params, const PicardConfig& cfg);
/// K ∫₀ᵗ e^{ν(t-s)Δ} ℙ div σ(s) ds (forcing restricted to retained modes)
VelocitySeries op_l1(std::span<const StressSpectrum> sigma, const PhysParams& params,
                     const PicardConfig& cfg);
/// ∫₀ᵗ e^{(t-s)(κΔ-2k)} (-u·∇σ + (∇u)σ + σ(∇u)ᵀ)(s) ds
StressSeries op_q2(std::span<const VectorSpectrum> u, std::span<const StressSpectrum> sigma,
                   const PhysParams& params, const PicardConfig& cfg);
/// 2k ∫₀ᵗ e^{(t-s)(κΔ-2k)} ρ(s)𝕀 ds; only c is nonzero.
StressSeries op_l2(std::span<const Spectrum> rho, const PhysParams& params,
                   const PicardConfig& cfg);
/// Transport of ρ₀ by the given velocity (linear in time between nodes),
/// sampled on the nodes. Throws NumericalFailure when the CFL sub-step falls
/// below cfg.substep_min.
ScalarSeries op_n(std::span<const VectorSpectrum> u, const Spectrum& rho0,
                  const PicardConfig& cfg);

/// U⁰(t) = (e^{νtΔ}u₀, e^{(κΔ-2k)t}σ₀, ρ₀).
PicardIterate zeroth_iterate(const SpectralState& initial, const PhysParams& params,
                             const PicardConfig& cfg);

/// F(U) = (e^{νtΔ}u₀ + Q₁(u,u) + L₁(σ), e^{(κΔ-2k)t}σ₀ + Q₂(u,σ) + L₂(ρ), N(u)).
PicardIterate apply_fixed_point_map(const PicardIterate& U, const SpectralState& initial,
                                    const PhysParams& params, const PicardConfig& cfg);

/// Iterates U^{n+1} = F(U^n) from the zeroth iterate until the relative
/// successive difference drops below cfg.tol. Throws PicardNonConvergence at
/// max_iter, ConfigError for an invalid config and MonitorViolation for
/// non-admissible initial data.
PicardResult picard_iterate(const SimState& initial, const PhysParams& params,
                            const PicardConfig& cfg);

/// Geometric mean of the successive-difference ratios, 0 when the last
/// difference vanished. Needs at least two differences.
double contraction_estimate(const PicardHistory& history);

/// Relative L² distance per field between two states.
struct FieldAgreement {
  double u = 0.0, a = 0.0, b = 0.0, c = 0.0, rho = 0.0;
  double max() const;
};
FieldAgreement field_agreement(const SimState& candidate, const SimState& reference);

/// Integrates the same initial data with the time stepper at a fixed step
/// (rounded so it divides t0) and compares with the Picard limit at t0.
FieldAgreement compare_with_stepper(const PicardResult& result, const SimState& initial,
                                    const PhysParams& params, double dt);

}  // namespace oldb2d
