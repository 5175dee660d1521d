#pragma once

// Dimensional bookkeeping in the cm/sec system. Exponents are stored in
// quarters so that the fractional powers appearing in the bound ledger
// (ν^{-1/4}, T^{3/4}, ...) stay exact.

#include <cmath>
#include <stdexcept>
#include <string>

namespace oldb2d {

struct Dim {
  int cm4 = 0;   // 4 × exponent of cm
  int sec4 = 0;  // 4 × exponent of sec

  static constexpr Dim none() { return {}; }
  static constexpr Dim cm(int p = 1) { return {4 * p, 0}; }
  static constexpr Dim sec(int p = 1) { return {0, 4 * p}; }

  constexpr bool dimensionless() const { return cm4 == 0 && sec4 == 0; }
  friend constexpr bool operator==(Dim, Dim) = default;
  friend constexpr Dim operator*(Dim a, Dim b) {
    return {a.cm4 + b.cm4, a.sec4 + b.sec4};
  }
  friend constexpr Dim operator/(Dim a, Dim b) {
    return {a.cm4 - b.cm4, a.sec4 - b.sec4};
  }
  /// Raise to the rational power num/den; den must divide into quarters.
  Dim pow(int num, int den) const {
    if ((cm4 * num) % den != 0 || (sec4 * num) % den != 0)
      throw std::domain_error("dimension power not representable in quarters");
    return {cm4 * num / den, sec4 * num / den};
  }

  std::string str() const;
};

inline std::string Dim::str() const {
  if (dimensionless()) return "1";
  auto term = [](const char* sym, int q) -> std::string {
    if (q == 0) return "";
    std::string e;
    if (q % 4 == 0) {
      e = std::to_string(q / 4);
    } else if (q % 2 == 0) {
      e = std::to_string(q / 2) + "/2";
    } else {
      e = std::to_string(q) + "/4";
    }
    return e == "1" ? std::string(sym) : std::string(sym) + "^" + e;
  };
  std::string out = term("cm", cm4);
  std::string s = term("sec", sec4);
  if (!out.empty() && !s.empty()) out += " ";
  return out + s;
}

/// A value tagged with its physical dimension. Adding mismatched
/// dimensions or exponentiating a dimensional quantity throws.
struct Quantity {
  double value = 0.0;
  Dim dim{};

  Quantity() = default;
  Quantity(double v, Dim d = Dim::none()) : value(v), dim(d) {}

  friend Quantity operator+(const Quantity& a, const Quantity& b) {
    if (!(a.dim == b.dim))
      throw std::domain_error("adding " + a.dim.str() + " to " + b.dim.str());
    return {a.value + b.value, a.dim};
  }
  friend Quantity operator*(const Quantity& a, const Quantity& b) {
    return {a.value * b.value, a.dim * b.dim};
  }
  friend Quantity operator/(const Quantity& a, const Quantity& b) {
    return {a.value / b.value, a.dim / b.dim};
  }
};

inline Quantity exp(const Quantity& q) {
  if (!q.dim.dimensionless())
    throw std::domain_error("exp of dimensional quantity " + q.dim.str());
  return {std::exp(q.value), Dim::none()};
}

inline Quantity pow(const Quantity& q, int num, int den) {
  return {std::pow(q.value, static_cast<double>(num) / den), q.dim.pow(num, den)};
}

inline Quantity sqrt(const Quantity& q) { return pow(q, 1, 2); }

}  // namespace oldb2d
