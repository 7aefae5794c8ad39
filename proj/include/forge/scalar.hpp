#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "forge/gaussian_rational.hpp"

namespace forge {

using Complex = std::complex<double>;

/// Per-scalar policy. Floating signals prune cancellation noise and compare
/// with tolerances; Gaussian-rational signals compare exactly.
template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  using Real = double;
};

template <>
struct ScalarTraits<GaussianRational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  using Real = Rational;
};

template <typename Scalar>
inline constexpr bool is_exact_v = ScalarTraits<Scalar>::exact;

inline bool is_zero(const Complex& z) { return z == Complex(0.0, 0.0); }
inline bool is_zero(const GaussianRational& z) { return z.is_zero(); }

inline double magnitude(const Complex& z) { return std::abs(z); }
inline double magnitude(const GaussianRational& z) { return std::abs(to_complex(z)); }

/// Pruning threshold relative to the largest entry (floating mode only).
inline constexpr double kPruneRelative = 1e-14;
/// Default absolute tolerance for floating comparisons.
inline constexpr double kCompareTolerance = 1e-12;

template <typename Scalar>
bool nearly_equal(const Scalar& a, const Scalar& b, double tol = kCompareTolerance) {
  if constexpr (is_exact_v<Scalar>) {
    (void)tol;
    return a == b;
  } else {
    return std::abs(a - b) <= tol;
  }
}

/// |z| == 1, exactly or to `tol`.
template <typename Scalar>
bool is_unit(const Scalar& z, double tol = kCompareTolerance) {
  if constexpr (is_exact_v<Scalar>) {
    (void)tol;
    return norm(z) == 1;
  } else {
    return std::abs(std::norm(z) - 1.0) <= tol;
  }
}

/// |a| == |b|, exactly or to `tol`.
template <typename Scalar>
bool equal_modulus(const Scalar& a, const Scalar& b, double tol = kCompareTolerance) {
  if constexpr (is_exact_v<Scalar>) {
    (void)tol;
    return norm(a) == norm(b);
  } else {
    return std::abs(std::abs(a) - std::abs(b)) <= tol;
  }
}

/// Argument of a unit phase, reported in [0, 2pi).
inline double phase_angle(const Complex& unit) {
  double a = std::arg(unit);
  if (a < 0) a += 2 * std::numbers::pi;
  if (a >= 2 * std::numbers::pi) a = 0;
  return a;
}

}  // namespace forge
