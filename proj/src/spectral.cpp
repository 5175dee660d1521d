#include "oldb2d/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oldb2d {

namespace {

// FFTW's planner is not reentrant; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

struct SpectralGrid::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  int n = 0;

  explicit Plans(int n_) : n(n_) {
    std::lock_guard lock(planner_mutex());
    const std::size_t nr = static_cast<std::size_t>(n) * n;
    const std::size_t nc = static_cast<std::size_t>(n) * (n / 2 + 1);
    double* r = fftw_alloc_real(nr);
    fftw_complex* c = fftw_alloc_complex(nc);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c = fftw_plan_dft_r2c_2d(n, n, r, c, flags);
    c2r = fftw_plan_dft_c2r_2d(n, n, c, r, flags);
    fftw_free(r);
    fftw_free(c);
    if (!r2c || !c2r) throw std::runtime_error("FFTW planning failed");
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

SpectralGrid::SpectralGrid(int n, double length) : n_(n), length_(length) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("grid size must be even and >= 8, got " +
                                std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("domain length must be positive");

  auto t = std::make_shared<Tables>();
  const double scale = 2.0 * std::numbers::pi / length;
  const int cols = columns();
  t->kx.resize(cols);
  t->dkx.resize(cols);
  for (int ix = 0; ix < cols; ++ix) {
    t->kx[ix] = scale * wave_x(ix);
    t->dkx[ix] = (ix == n / 2) ? 0.0 : t->kx[ix];
  }
  t->ky.resize(n);
  t->dky.resize(n);
  for (int iy = 0; iy < n; ++iy) {
    t->ky[iy] = scale * wave_y(iy);
    t->dky[iy] = (iy == n / 2) ? 0.0 : t->ky[iy];
  }
  const std::size_t ns = spectral_size();
  t->k2.resize(ns);
  t->weight.resize(ns);
  t->mask.resize(ns);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < cols; ++ix) {
      const std::size_t m = mode_index(ix, iy);
      t->k2[m] = t->kx[ix] * t->kx[ix] + t->ky[iy] * t->ky[iy];
      t->weight[m] = (ix == 0 || ix == n / 2) ? 1.0 : 2.0;
      // retained iff 3|k| ≤ n on both axes, i.e. |k| ≤ n/3
      t->mask[m] = 3 * std::abs(wave_x(ix)) <= n && 3 * std::abs(wave_y(iy)) <= n;
    }
  }
  tables_ = std::move(t);
  plans_ = std::make_shared<Plans>(n);
}

SpectralGrid make_grid(int n, double length) { return SpectralGrid(n, length); }

void SpectralGrid::forward(std::span<const double> values,
                           std::span<Complex> coeffs) const {
  if (values.size() != real_size() || coeffs.size() != spectral_size())
    throw std::invalid_argument("forward transform size mismatch");
  // r2c does not modify its input, but the API takes a non-const pointer
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(values.data()),
                       reinterpret_cast<fftw_complex*>(coeffs.data()));
  const double norm = 1.0 / static_cast<double>(real_size());
  for (auto& c : coeffs) c *= norm;
}

void SpectralGrid::backward(std::span<const Complex> coeffs,
                            std::span<double> values) const {
  if (values.size() != real_size() || coeffs.size() != spectral_size())
    throw std::invalid_argument("backward transform size mismatch");
  // c2r destroys its input
  std::vector<Complex> scratch(coeffs.begin(), coeffs.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                       values.data());
}

// ---- ScalarField -----------------------------------------------------------

ScalarField::ScalarField(SpectralGrid grid)
    : grid_(std::move(grid)), values_(grid_.real_size(), 0.0) {}

ScalarField::ScalarField(SpectralGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.real_size())
    throw std::invalid_argument("field size does not match grid");
}

ScalarField::ScalarField(SpectralGrid grid, double constant)
    : grid_(std::move(grid)), values_(grid_.real_size(), constant) {}

ScalarField ScalarField::from_function(const SpectralGrid& grid,
                                       const std::function<double(double, double)>& f) {
  ScalarField out(grid);
  const double h = grid.spacing();
  for (int iy = 0; iy < grid.n(); ++iy)
    for (int ix = 0; ix < grid.n(); ++ix) out(ix, iy) = f(ix * h, iy * h);
  return out;
}

Spectrum ScalarField::forward() const {
  Spectrum s(grid_);
  grid_.forward(values_, s.coeffs());
  return s;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double ScalarField::integral() const { return mean() * grid_.area(); }

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  ScalarField out(a.grid());
  auto o = out.values();
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = av[i] * bv[i];
  return out;
}

// ---- Spectrum ---------------------------------------------------------------

Spectrum::Spectrum(SpectralGrid grid)
    : grid_(std::move(grid)), coeffs_(grid_.spectral_size(), Complex{}) {}

Spectrum::Spectrum(SpectralGrid grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.spectral_size())
    throw std::invalid_argument("spectrum size does not match grid");
}

ScalarField Spectrum::backward() const {
  ScalarField f(grid_);
  grid_.backward(coeffs_, f.values());
  return f;
}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Spectrum& Spectrum::axpy(double s, const Spectrum& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
  return *this;
}

Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
Spectrum operator*(double s, Spectrum a) { return a *= s; }

VectorSpectrum& VectorSpectrum::operator+=(const VectorSpectrum& o) {
  x += o.x;
  y += o.y;
  return *this;
}

VectorSpectrum& VectorSpectrum::operator*=(double s) {
  x *= s;
  y *= s;
  return *this;
}

VectorSpectrum& VectorSpectrum::axpy(double s, const VectorSpectrum& o) {
  x.axpy(s, o.x);
  y.axpy(s, o.y);
  return *this;
}

VectorSpectrum forward(const VectorField& v) { return {v.x.forward(), v.y.forward()}; }
VectorField backward(const VectorSpectrum& v) { return {v.x.backward(), v.y.backward()}; }

// ---- operators ------------------------------------------------------------------

namespace {

// Applies out[m] = mult(ix, iy, m) * in[m] over every slot.
template <class Mult>
Spectrum apply_multiplier(const Spectrum& f, Mult&& mult) {
  const SpectralGrid& g = f.grid();
  Spectrum out(g);
  auto in = f.coeffs();
  auto o = out.coeffs();
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.columns(); ++ix) {
      const std::size_t m = g.mode_index(ix, iy);
      o[m] = mult(ix, iy, m) * in[m];
    }
  }
  return out;
}

}  // namespace

Spectrum ddx(const Spectrum& f, Axis axis) {
  const SpectralGrid& g = f.grid();
  auto dkx = g.dkx();
  auto dky = g.dky();
  if (axis == Axis::x)
    return apply_multiplier(f, [&](int ix, int, std::size_t) { return Complex(0.0, dkx[ix]); });
  return apply_multiplier(f, [&](int, int iy, std::size_t) { return Complex(0.0, dky[iy]); });
}

ScalarField ddx(const ScalarField& f, Axis axis) { return ddx(f.forward(), axis).backward(); }

Spectrum laplacian(const Spectrum& f) {
  auto k2 = f.grid().k2();
  return apply_multiplier(f, [&](int, int, std::size_t m) { return Complex(-k2[m], 0.0); });
}

ScalarField laplacian(const ScalarField& f) { return laplacian(f.forward()).backward(); }

Spectrum dealias(Spectrum f) {
  const auto& mask = f.grid().dealias_mask();
  auto c = f.coeffs();
  for (std::size_t m = 0; m < c.size(); ++m)
    if (!mask[m]) c[m] = Complex{};
  return f;
}

VectorSpectrum dealias(VectorSpectrum v) {
  return {dealias(std::move(v.x)), dealias(std::move(v.y))};
}

ScalarField dealias(const ScalarField& f) { return dealias(f.forward()).backward(); }

VectorSpectrum leray_project(const VectorSpectrum& v) {
  require_same_grid(v.x.grid(), v.y.grid());
  const SpectralGrid& g = v.grid();
  auto dkx = g.dkx();
  auto dky = g.dky();
  VectorSpectrum out{Spectrum(g), Spectrum(g)};
  auto vx = v.x.coeffs();
  auto vy = v.y.coeffs();
  auto ox = out.x.coeffs();
  auto oy = out.y.coeffs();
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.columns(); ++ix) {
      const std::size_t m = g.mode_index(ix, iy);
      const double kx = dkx[ix];
      const double ky = dky[iy];
      const double kk = kx * kx + ky * ky;
      if (kk == 0.0) {
        ox[m] = vx[m];
        oy[m] = vy[m];
        continue;
      }
      const Complex kv = (kx * vx[m] + ky * vy[m]) / kk;
      ox[m] = vx[m] - kx * kv;
      oy[m] = vy[m] - ky * kv;
    }
  }
  return out;
}

VectorField leray_project(const VectorField& v) {
  return backward(leray_project(forward(v)));
}

Spectrum divergence(const VectorSpectrum& v) { return ddx(v.x, Axis::x) + ddx(v.y, Axis::y); }
ScalarField divergence(const VectorField& v) { return divergence(forward(v)).backward(); }

Spectrum curl(const VectorSpectrum& v) { return ddx(v.y, Axis::x) - ddx(v.x, Axis::y); }
ScalarField curl(const VectorField& v) { return curl(forward(v)).backward(); }

Spectrum heat_semigroup(const Spectrum& f, double diffusivity, double damping, double t) {
  if (t < 0.0) throw std::invalid_argument("semigroup time must be non-negative");
  if (t == 0.0) return f;
  auto k2 = f.grid().k2();
  return apply_multiplier(f, [&](int, int, std::size_t m) {
    return Complex(std::exp(-(diffusivity * k2[m] + damping) * t), 0.0);
  });
}

ScalarField heat_semigroup(const ScalarField& f, double diffusivity, double damping,
                           double t) {
  return heat_semigroup(f.forward(), diffusivity, damping, t).backward();
}

VectorSpectrum heat_semigroup(const VectorSpectrum& v, double diffusivity, double damping,
                              double t) {
  return {heat_semigroup(v.x, diffusivity, damping, t),
          heat_semigroup(v.y, diffusivity, damping, t)};
}

Spectrum invert_laplacian(const Spectrum& f) {
  const double rms = std::sqrt(l2_norm_sq(f) / f.grid().area());
  if (std::abs(f.mean()) > 1e-10 * rms || (rms == 0.0 && f.mean() != Complex{}))
    throw std::domain_error("inverse Laplacian requires a zero-mean field");
  auto k2 = f.grid().k2();
  return apply_multiplier(f, [&](int, int, std::size_t m) {
    return m == 0 ? Complex{} : Complex(-1.0 / k2[m], 0.0);
  });
}

ScalarField invert_laplacian(const ScalarField& f) {
  return invert_laplacian(f.forward()).backward();
}

VectorSpectrum velocity_from_vorticity(const Spectrum& omega) {
  const Spectrum psi = invert_laplacian(omega);
  return {-1.0 * ddx(psi, Axis::y), ddx(psi, Axis::x)};
}

VectorField velocity_from_vorticity(const ScalarField& omega) {
  return backward(velocity_from_vorticity(omega.forward()));
}

// ---- norms --------------------------------------------------------------------

namespace {

template <class Weight>
double weighted_sum(const Spectrum& f, Weight&& extra) {
  const SpectralGrid& g = f.grid();
  auto w = g.parseval_weight();
  auto c = f.coeffs();
  double s = 0.0;
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.columns(); ++ix) {
      const std::size_t m = g.mode_index(ix, iy);
      s += w[m] * extra(ix, iy, m) * std::norm(c[m]);
    }
  }
  return s * g.area();
}

}  // namespace

double inner(const Spectrum& f, const Spectrum& g) {
  require_same_grid(f.grid(), g.grid());
  auto w = f.grid().parseval_weight();
  auto a = f.coeffs();
  auto b = g.coeffs();
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) s += w[m] * (a[m] * std::conj(b[m])).real();
  return s * f.grid().area();
}

double l2_norm_sq(const Spectrum& f) {
  return weighted_sum(f, [](int, int, std::size_t) { return 1.0; });
}

double grad_norm_sq(const Spectrum& f) {
  auto dkx = f.grid().dkx();
  auto dky = f.grid().dky();
  return weighted_sum(f, [&](int ix, int iy, std::size_t) {
    return dkx[ix] * dkx[ix] + dky[iy] * dky[iy];
  });
}

double lap_norm_sq(const Spectrum& f) {
  auto k2 = f.grid().k2();
  return weighted_sum(f, [&](int, int, std::size_t m) { return k2[m] * k2[m]; });
}

double sobolev_norm_sq(const Spectrum& f, int order) {
  auto k2 = f.grid().k2();
  return weighted_sum(f, [&](int, int, std::size_t m) {
    double s = 0.0;
    double p = 1.0;
    for (int j = 0; j <= order; ++j) {
      s += p;
      p *= k2[m];
    }
    return s;
  });
}

double l2_norm(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s * f.grid().cell_area());
}

double l2_norm(const VectorField& v) {
  const double x = l2_norm(v.x);
  const double y = l2_norm(v.y);
  return std::sqrt(x * x + y * y);
}

}  // namespace oldb2d
