#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "oldb2d/fields.hpp"
#include "oldb2d/units.hpp"

namespace oldb2d {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct EnergyLedger {
  double energy = 0.0;       ///< ∫ |u|² + K c           [cm⁴/sec²]
  double dissipation = 0.0;  ///< ∫ 2ν|∇u|² + 2kK c      [cm⁴/sec³]
  double source = 0.0;       ///< 4kK ∫ ρ                [cm⁴/sec³]
};

EnergyLedger energy_ledger(const SimState& state, const PhysParams& params);

struct DiagnosticsRecord {
  double time = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  double source = 0.0;
  double min_gamma = 0.0;
  double min_eigenvalue = 0.0;
  double min_rho = 0.0;
  double c_max = 0.0;
  NormReport norms;
  /// L² residual of the determinant law; NaN unless evaluated (κ = 0 runs).
  double determinant_residual = kNaN;
  /// L² norm of div of the velocity tendency (pressure-free momentum balance).
  double momentum_residual = kNaN;

  /// Norm value by name, NaN when absent (e.g. records read back from CSV).
  double norm(const std::string& name) const;
};

struct DiagnoseOptions {
  bool momentum_residual = true;
};

DiagnosticsRecord diagnose(const SimState& state, const PhysParams& params,
                           const DiagnoseOptions& opts = {});

struct PositivityReport {
  double min_c = 0.0;
  double min_gamma = 0.0;
  double min_eigenvalue = 0.0;
  double min_rho = 0.0;
  double scale = 1.0;  ///< max(1, max c)
  double tol = 0.0;
  bool pass = false;
};

/// Pointwise minima and a pass/fail verdict: every minimum must be ≥ -tol·scale
/// (ρ against max(1, max ρ)).
PositivityReport positivity_report(const SimState& state, double tol);

// ---- a priori bound ledger --------------------------------------------------------

/// Norms of the initial data entering the bounds.
template <class Q>
struct BoundInputs {
  Q nu, kappa, k, bigK, T;
  Q u0_L2_sq;         ///< ‖u₀‖²
  Q sigma0_L1;        ///< ∫ c₀
  Q sigma0_L2_sq;     ///< ‖σ₀‖² (Frobenius)
  Q grad_sigma0_sq;   ///< ‖∇σ₀‖²
  Q rho0_L1;
  Q rho0_L2_sq;
  Q rho0_W12;
  Q omega0_L2_sq;
  Q grad_omega0_sq;
  Q C;                ///< generic constant
};

template <class Q>
struct BoundValues {
  Q R0, R1, R2, B, R3, R4, R5;
};

namespace detail {

inline double zero_safe_mul(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }
inline Quantity zero_safe_mul(const Quantity& a, const Quantity& b) {
  return {zero_safe_mul(a.value, b.value), a.dim * b.dim};
}
inline double zero_safe_div(double a, double b) { return a == 0.0 ? 0.0 : a / b; }
inline Quantity zero_safe_div(const Quantity& a, const Quantity& b) {
  return {zero_safe_div(a.value, b.value), a.dim / b.dim};
}
inline double root(double x, int num, int den) {
  return std::pow(x, static_cast<double>(num) / den);
}
inline Quantity root(const Quantity& x, int num, int den) { return pow(x, num, den); }

}  // namespace detail

/// The bound constants of the a priori estimates, written once over a numeric
/// type so the same expressions serve for values (double) and for units
/// (Quantity). Products with a vanishing factor are zero even when the other
/// factor overflowed.
template <class Q>
BoundValues<Q> evaluate_bounds(const BoundInputs<Q>& in) {
  using detail::root;
  using detail::zero_safe_div;
  using detail::zero_safe_mul;
  using std::exp;
  const Q four = Q(4.0);
  const Q& T = in.T;

  // energy: ‖u₀‖² + K‖σ₀‖_{L¹} + 4kKT‖ρ₀‖_{L¹}
  const Q R0 = in.u0_L2_sq + in.bigK * in.sigma0_L1 + four * in.k * in.bigK * T * in.rho0_L1;
  const Q growth = exp(zero_safe_div(R0, in.nu * in.kappa));
  const Q sigma_data = in.sigma0_L2_sq + in.k * T * in.rho0_L2_sq;
  const Q R1 = zero_safe_mul(in.C * growth, sigma_data);
  const Q R2 = zero_safe_mul(in.C * in.bigK * in.bigK / (in.kappa * in.nu) * growth, sigma_data) +
               in.omega0_L2_sq;
  const Q B = zero_safe_mul(in.C / (in.kappa * root(in.kappa * in.nu, 1, 2)), zero_safe_mul(R1, R2));
  const Q R3 = zero_safe_mul(in.C * growth,
                             in.grad_sigma0_sq + B + zero_safe_mul(in.k * in.k * T / in.kappa, in.rho0_L2_sq));
  const Q R4 = zero_safe_mul(
      in.C * exp(in.C * root(in.nu, -3, 2) * root(T * R0 * R2, 1, 2)),
      in.grad_omega0_sq + zero_safe_mul(in.bigK * in.bigK / (in.nu * in.kappa), R3));
  const Q R5 = zero_safe_mul(
      exp(zero_safe_mul(root(in.nu, -1, 4) * root(R2, 1, 4) * root(T, 3, 4), root(R4, 1, 4))),
      in.rho0_W12);
  return {R0, R1, R2, B, R3, R4, R5};
}

struct BoundLedger {
  static constexpr std::array<const char*, 7> kNames{"R0", "R1", "R2", "B", "R3", "R4", "R5"};
  std::array<double, 7> values{};
  std::array<Dim, 7> units{};
  double T = 0.0;
  double generic_constant = 1.0;
  std::string constant_policy;  ///< e.g. "generic C = 1 (unspecified constants)"
  bool overflowed = false;      ///< some entry is +inf (stored instead of failing)

  double R0() const { return values[0]; }
  double R1() const { return values[1]; }
  double R2() const { return values[2]; }
  double B() const { return values[3]; }
  double R3() const { return values[4]; }
  double R4() const { return values[5]; }
  double R5() const { return values[6]; }
};

BoundInputs<Quantity> bound_inputs(const SimState& initial, const PhysParams& params, double T,
                                   double generic_constant);

/// Evaluates R₀…R₅ and B from the initial data. Throws std::invalid_argument
/// for T ≤ 0.
BoundLedger apriori_ledger(const SimState& initial, const PhysParams& params, double T,
                           double generic_constant = 1.0);

struct BoundRow {
  std::string name;      ///< eniq, sigma_L2, omega_L2, grad_sigma_L2, grad_omega_L2, rho_W12
  double observed = 0.0; ///< left-hand side measured on the trajectory (NaN if unavailable)
  double bound = 0.0;
  double ratio = 0.0;    ///< observed / bound
  bool hard = false;     ///< constant-free inequality: pass/fail is binding
  bool pass = true;
};

struct BoundCheckReport {
  std::vector<BoundRow> rows;  ///< exactly 6 rows
  bool pass = true;            ///< all hard rows pass
};

inline constexpr double kEnergyQuadratureTol = 1e-6;

/// Evaluates the bound inequalities on stored diagnostics, integrating in time
/// by the trapezoidal rule. The energy inequality is checked in its pathwise
/// form sup_t [‖u‖² + K∫c + 2ν∫₀ᵗ‖∇u‖²] ≤ R₀ with relative tolerance 1e-6.
BoundCheckReport bound_check(std::span<const DiagnosticsRecord> records, const BoundLedger& ledger,
                             const PhysParams& params);

/// Left-hand side of the pathwise energy inequality on stored diagnostics.
double energy_inequality_lhs(std::span<const DiagnosticsRecord> records, const PhysParams& params);

/// max over consecutive records of (E_{i+1} - E_i)/Δt + 𝔇_i - S₀, the defect of
/// the differential energy balance, with S₀ = 4kK∫ρ₀ taken from the first record.
double energy_rate_defect(std::span<const DiagnosticsRecord> records);

enum class ResidualMode { strict, informational };

/// L² norm of ∂ₜd + u·∇d + 4kd - 2kρc at the middle of three consecutive
/// states (second-order three-point time derivative, any spacing). In strict
/// mode κ ≠ 0 throws std::invalid_argument; informational mode evaluates the
/// same expression, which then also contains the κΔ-induced part.
double determinant_residual(std::span<const SimState> window, const PhysParams& params,
                            ResidualMode mode = ResidualMode::strict);

}  // namespace oldb2d
