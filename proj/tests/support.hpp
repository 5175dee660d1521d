#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "oldb2d/fields.hpp"
#include "oldb2d/spectral.hpp"

namespace testing {

using namespace oldb2d;

inline constexpr double kTwoPi = 6.283185307179586;

/// Trigonometric polynomial over a few retained modes, evaluated pointwise.
struct TrigPoly {
  struct Mode {
    int kx, ky;
    double A, B;
  };
  std::vector<Mode> modes;
  double w = 1.0;

  double operator()(double x, double y) const {
    double s = 0.0;
    for (const auto& m : modes) {
      const double ph = w * (m.kx * x + m.ky * y);
      s += m.A * std::cos(ph) + m.B * std::sin(ph);
    }
    return s;
  }
  /// Exact partial derivative along x (axis 0) or y (axis 1).
  double d(int axis, double x, double y) const {
    double s = 0.0;
    for (const auto& m : modes) {
      const double ph = w * (m.kx * x + m.ky * y);
      const double kk = w * (axis == 0 ? m.kx : m.ky);
      s += kk * (-m.A * std::sin(ph) + m.B * std::cos(ph));
    }
    return s;
  }
};

inline TrigPoly random_poly(std::mt19937_64& rng, int kmax, double length, int count = 6) {
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> pick(-kmax, kmax);
  TrigPoly p;
  p.w = kTwoPi / length;
  for (int i = 0; i < count; ++i) p.modes.push_back({pick(rng), pick(rng), nd(rng), nd(rng)});
  return p;
}

/// Unfiltered white noise, so every mode including Nyquist is populated.
inline ScalarField noise(const SpectralGrid& g, std::mt19937_64& rng, double lo = -1.0,
                         double hi = 1.0) {
  std::uniform_real_distribution<double> ud(lo, hi);
  ScalarField f(g);
  for (double& v : f.values()) v = ud(rng);
  return f;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  return (a - b).max_abs();
}

inline double rel_l2(const ScalarField& a, const ScalarField& b) {
  return l2_norm(a - b) / std::max(l2_norm(b), 1e-300);
}

inline double spectrum_max_abs(const Spectrum& s) {
  double m = 0.0;
  for (const Complex& z : s.coeffs()) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace testing
