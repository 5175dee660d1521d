#pragma once

// Periodic pseudo-spectral infrastructure on the square torus [0, L)².
//
// Real-space fields are stored row-major with the row index running over y:
// value(ix, iy) lives at iy * n + ix, at the point (ix * h, iy * h).
// Spectral coefficients use the real-to-complex half layout: n rows over
// ky ∈ {0, .., n/2 - 1, -n/2, .., -1} and n/2 + 1 columns over kx ∈ {0, .., n/2}.
// The forward transform divides by n², so the (0, 0) coefficient is the
// spatial mean.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace oldb2d {

using Complex = std::complex<double>;

enum class Axis { x = 1, y = 2 };

class SpectralGrid {
 public:
  /// Throws std::invalid_argument unless n ≥ 8, n even and length > 0.
  SpectralGrid(int n, double length);

  int n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  double cell_area() const { return spacing() * spacing(); }
  double area() const { return length_ * length_; }
  int columns() const { return n_ / 2 + 1; }
  std::size_t real_size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t spectral_size() const {
    return static_cast<std::size_t>(n_) * columns();
  }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * n_ + ix;
  }
  std::size_t mode_index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * columns() + ix;
  }

  /// Integer wavenumbers of a storage slot.
  int wave_x(int ix) const { return ix; }
  int wave_y(int iy) const { return iy < n_ / 2 ? iy : iy - n_; }
  /// Storage slot of integer wavenumbers (kx ≥ 0, |ky| ≤ n/2).
  std::size_t slot_of(int kx, int ky) const {
    return mode_index(kx, ky >= 0 ? ky : ky + n_);
  }

  /// Physical wavenumbers (integer wavenumber × 2π/L) along each axis.
  std::span<const double> kx() const { return tables_->kx; }
  std::span<const double> ky() const { return tables_->ky; }
  /// Differentiation wavenumbers: as kx/ky but zero on the Nyquist mode.
  std::span<const double> dkx() const { return tables_->dkx; }
  std::span<const double> dky() const { return tables_->dky; }
  /// |k|² per spectral slot.
  std::span<const double> k2() const { return tables_->k2; }
  /// 2/3-rule mask per spectral slot (true = retained).
  const std::vector<bool>& dealias_mask() const { return tables_->mask; }
  /// Multiplicity of each half-spectrum slot in the full spectrum (1 or 2).
  std::span<const double> parseval_weight() const { return tables_->weight; }

  void forward(std::span<const double> values, std::span<Complex> coeffs) const;
  void backward(std::span<const Complex> coeffs, std::span<double> values) const;

  friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  struct Tables {
    std::vector<double> kx, ky, dkx, dky, k2, weight;
    std::vector<bool> mask;
  };
  struct Plans;

  int n_;
  double length_;
  std::shared_ptr<const Tables> tables_;
  std::shared_ptr<Plans> plans_;
};

SpectralGrid make_grid(int n, double length);

class Spectrum;

/// Real-space scalar field.
class ScalarField {
 public:
  explicit ScalarField(SpectralGrid grid);
  ScalarField(SpectralGrid grid, std::vector<double> values);
  ScalarField(SpectralGrid grid, double constant);

  static ScalarField from_function(const SpectralGrid& grid,
                                   const std::function<double(double, double)>& f);

  const SpectralGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator()(int ix, int iy) const { return values_[grid_.index(ix, iy)]; }
  double& operator()(int ix, int iy) { return values_[grid_.index(ix, iy)]; }

  Spectrum forward() const;

  double min() const;
  double max() const;
  double max_abs() const;
  double mean() const;
  /// ∫ f dx by the grid rule (exact for band-limited integrands).
  double integral() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

 private:
  SpectralGrid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField multiply(const ScalarField& a, const ScalarField& b);

/// Spectral coefficients of a real field (half layout, see file comment).
class Spectrum {
 public:
  explicit Spectrum(SpectralGrid grid);
  Spectrum(SpectralGrid grid, std::vector<Complex> coeffs);

  const SpectralGrid& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  Complex& at(int kx, int ky) { return coeffs_[grid_.slot_of(kx, ky)]; }
  Complex at(int kx, int ky) const { return coeffs_[grid_.slot_of(kx, ky)]; }
  Complex mean() const { return coeffs_[0]; }

  ScalarField backward() const;

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator-=(const Spectrum& o);
  Spectrum& operator*=(double s);
  /// this += s * o
  Spectrum& axpy(double s, const Spectrum& o);

 private:
  SpectralGrid grid_;
  std::vector<Complex> coeffs_;
};

Spectrum operator+(Spectrum a, const Spectrum& b);
Spectrum operator-(Spectrum a, const Spectrum& b);
Spectrum operator*(double s, Spectrum a);

struct VectorField {
  ScalarField x, y;
  const SpectralGrid& grid() const { return x.grid(); }
};

struct VectorSpectrum {
  Spectrum x, y;
  const SpectralGrid& grid() const { return x.grid(); }
  VectorSpectrum& operator+=(const VectorSpectrum& o);
  VectorSpectrum& operator*=(double s);
  VectorSpectrum& axpy(double s, const VectorSpectrum& o);
};

VectorSpectrum forward(const VectorField& v);
VectorField backward(const VectorSpectrum& v);

// ---- spectral operators ---------------------------------------------------

/// ∂/∂x_axis, exact for band-limited fields; the Nyquist mode maps to zero.
Spectrum ddx(const Spectrum& f, Axis axis);
ScalarField ddx(const ScalarField& f, Axis axis);

Spectrum laplacian(const Spectrum& f);
ScalarField laplacian(const ScalarField& f);

/// Zero every coefficient outside the 2/3-rule mask.
Spectrum dealias(Spectrum f);
VectorSpectrum dealias(VectorSpectrum v);
ScalarField dealias(const ScalarField& f);

/// Leray-Hodge projection v̂ - k (k·v̂)/|k|² per mode; mode (0, 0) untouched.
VectorSpectrum leray_project(const VectorSpectrum& v);
VectorField leray_project(const VectorField& v);

Spectrum divergence(const VectorSpectrum& v);
ScalarField divergence(const VectorField& v);
Spectrum curl(const VectorSpectrum& v);
ScalarField curl(const VectorField& v);

/// Per-mode multiplication by exp(-(diffusivity |k|² + damping) t).
/// Throws std::invalid_argument for t < 0.
Spectrum heat_semigroup(const Spectrum& f, double diffusivity, double damping, double t);
ScalarField heat_semigroup(const ScalarField& f, double diffusivity, double damping,
                           double t);
VectorSpectrum heat_semigroup(const VectorSpectrum& v, double diffusivity,
                              double damping, double t);

/// Division by -|k|² with the zero mode set to zero. Throws
/// std::domain_error when |mean| exceeds 1e-10 of the field's L² norm.
Spectrum invert_laplacian(const Spectrum& f);
ScalarField invert_laplacian(const ScalarField& f);

/// u = ∇⊥ψ = (-∂₂ψ, ∂₁ψ) with Δψ = ω. Same zero-mean precondition.
VectorSpectrum velocity_from_vorticity(const Spectrum& omega);
VectorField velocity_from_vorticity(const ScalarField& omega);

// ---- Parseval norms -------------------------------------------------------

/// ∫ f g dx from spectral coefficients.
double inner(const Spectrum& f, const Spectrum& g);
/// ∫ |f|² dx.
double l2_norm_sq(const Spectrum& f);
/// ∫ |∇f|² dx (differentiation wavenumbers).
double grad_norm_sq(const Spectrum& f);
/// ∫ |Δf|² dx.
double lap_norm_sq(const Spectrum& f);
/// Σ_{j ≤ order} ∫ |∇^j f|² dx, the squared W^{order,2} norm.
double sobolev_norm_sq(const Spectrum& f, int order);

double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);

}  // namespace oldb2d
