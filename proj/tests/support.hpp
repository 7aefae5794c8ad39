#pragma once

// Hand-rolled generators and brute-force oracles shared by the test files.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "forge/continuous.hpp"
#include "forge/lattice.hpp"

namespace testing {

using forge::Complex;
using forge::GaussianRational;
using forge::LatticePoint;
using forge::LatticeSignal;
using forge::RealVector;
using forge::Stencil;
using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline LatticePoint random_point(Rng& rng, int dim, int reach) {
  LatticePoint x(dim);
  for (int j = 0; j < dim; ++j) x(j) = uniform(rng, -reach, reach);
  return x;
}

inline RealVector random_vector(Rng& rng, int dim, double reach) {
  RealVector p(dim);
  for (int j = 0; j < dim; ++j) p(j) = uniform_real(rng, -reach, reach);
  return p;
}

template <typename Scalar>
Scalar random_scalar(Rng& rng) {
  while (true) {
    const int re = uniform(rng, -4, 4), im = uniform(rng, -4, 4);
    if (re == 0 && im == 0) continue;
    if constexpr (std::is_same_v<Scalar, GaussianRational>)
      return GaussianRational(forge::Rational(re, uniform(rng, 1, 5)), forge::Rational(im, uniform(rng, 1, 5)));
    else
      return Complex(re / 3.0, im / 7.0);
  }
}

template <typename Scalar>
LatticeSignal<Scalar> random_signal(Rng& rng, int dim, int points, int reach) {
  LatticeSignal<Scalar> w(dim);
  for (int k = 0; k < points; ++k) w.set(random_point(rng, dim, reach), random_scalar<Scalar>(rng));
  return w;
}

template <typename Scalar>
Stencil<Scalar> random_stencil(Rng& rng, int dim, int taps, int reach) {
  Stencil<Scalar> s(dim);
  while (static_cast<int>(s.size()) < taps) {
    const LatticePoint y = random_point(rng, dim, reach);
    if (!s.contains(y)) s.add_tap(y, random_scalar<Scalar>(rng));
  }
  return s;
}

inline LatticeSignal<Complex> to_float(const LatticeSignal<GaussianRational>& w) {
  LatticeSignal<Complex> out(w.dim());
  for (const auto& [x, v] : w) out.set(x, forge::to_complex(v));
  return out;
}

/// Dense 1-d oracle: r(k) = sum_n w[n + k] conj(w[n]) by a double loop.
inline std::map<long, Complex> brute_autocorrelation_1d(const std::map<long, Complex>& w) {
  std::map<long, Complex> r;
  for (const auto& [a, va] : w)
    for (const auto& [b, vb] : w) r[a - b] += va * std::conj(vb);
  return r;
}

/// (2 pi)^{-d} sum_x e^{i p.x} w(x), written out independently of dft_eval.
inline Complex brute_dft(const LatticeSignal<Complex>& w, const RealVector& p) {
  Complex s(0, 0);
  for (const auto& [x, v] : w) {
    double phase = 0;
    for (int j = 0; j < w.dim(); ++j) phase += p(j) * static_cast<double>(x(j));
    s += v * Complex(std::cos(phase), std::sin(phase));
  }
  return s / std::pow(2 * std::numbers::pi, w.dim());
}

/// Direct convolution oracle: (A psi)(x) = sum_y a_y psi(x + y), by scanning
/// a bounding box around the supports.
template <typename Scalar>
LatticeSignal<Scalar> brute_apply(const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi, bool adjoint, int reach) {
  LatticeSignal<Scalar> out(psi.dim());
  const int d = psi.dim();
  LatticePoint x = LatticePoint::Constant(d, -reach);
  while (true) {
    Scalar s(0);
    for (const auto& [y, a] : A) {
      const LatticePoint src = adjoint ? LatticePoint(x - y) : LatticePoint(x + y);
      s += (adjoint ? Scalar(conj(a)) : a) * psi.at(src);
    }
    if (!forge::is_zero(s)) out.set(x, s);
    int j = d - 1;
    while (j >= 0 && ++x(j) > reach) x(j--) = -reach;
    if (j < 0) break;
  }
  return out;
}

}  // namespace testing
