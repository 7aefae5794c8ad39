#pragma once

// Finitely supported signals on Z^d, finite difference stencils acting on
// them, and the exact machinery for comparing Fourier magnitudes and
// detecting trivial (shift / conjugate-reflection) ambiguities.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "forge/scalar.hpp"

namespace forge {

using LatticePoint = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

struct LexLess {
  bool operator()(const LatticePoint& a, const LatticePoint& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

inline LatticePoint lattice_point(std::initializer_list<std::int64_t> coords) {
  LatticePoint p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (auto c : coords) p(i++) = c;
  return p;
}

inline RealVector to_real(const LatticePoint& p) { return p.cast<double>(); }

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(int expected, Eigen::Index got)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                              std::to_string(got)) {}
};

/// Map from lattice points to coefficients with no stored zeros.
template <typename Scalar>
class SparseLatticeMap {
 public:
  using scalar_type = Scalar;
  using Entries = std::map<LatticePoint, Scalar, LexLess>;

  explicit SparseLatticeMap(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
  }

  int dim() const noexcept { return dim_; }
  const Entries& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  Scalar at(const LatticePoint& x) const {
    check(x);
    auto it = entries_.find(x);
    return it == entries_.end() ? Scalar(0) : it->second;
  }
  bool contains(const LatticePoint& x) const { return entries_.count(x) != 0; }

  void set(const LatticePoint& x, const Scalar& v) {
    check(x);
    if (is_zero(v))
      entries_.erase(x);
    else
      entries_[x] = v;
  }

  void add(const LatticePoint& x, const Scalar& v) {
    check(x);
    auto [it, inserted] = entries_.try_emplace(x, v);
    if (!inserted) it->second += v;
    if (is_zero(it->second)) entries_.erase(it);
  }

  /// Lexicographically smallest / largest support point. Requires !empty().
  const LatticePoint& min_point() const { return entries_.begin()->first; }
  const LatticePoint& max_point() const { return entries_.rbegin()->first; }

  void check(const LatticePoint& x) const {
    if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
  }

  friend bool operator==(const SparseLatticeMap& a, const SparseLatticeMap& b) {
    return a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

 protected:
  int dim_;
  Entries entries_;
};

/// Finitely supported complex-valued function on Z^d.
template <typename Scalar>
class LatticeSignal : public SparseLatticeMap<Scalar> {
 public:
  using SparseLatticeMap<Scalar>::SparseLatticeMap;

  LatticeSignal(int dim, std::initializer_list<std::pair<LatticePoint, Scalar>> values)
      : SparseLatticeMap<Scalar>(dim) {
    for (const auto& [x, v] : values) this->add(x, v);
  }

  /// Drops entries with |v| <= kPruneRelative * max|v| (floating mode only).
  void prune() {
    if constexpr (!is_exact_v<Scalar>) {
      double peak = 0;
      for (const auto& [x, v] : this->entries_) peak = std::max(peak, std::abs(v));
      const double cut = kPruneRelative * peak;
      std::erase_if(this->entries_, [cut](const auto& kv) { return std::abs(kv.second) <= cut; });
    }
  }
};

/// Finite difference operator: taps y in T with nonzero coefficients a_y,
/// acting by (A psi)(x) = sum_y a_y psi(x + y).
template <typename Scalar>
class Stencil : public SparseLatticeMap<Scalar> {
 public:
  explicit Stencil(int dim) : SparseLatticeMap<Scalar>(dim) {}

  Stencil(int dim, std::initializer_list<std::pair<LatticePoint, Scalar>> taps) : SparseLatticeMap<Scalar>(dim) {
    for (const auto& [y, a] : taps) add_tap(y, a);
    validate();
  }

  void add_tap(const LatticePoint& y, const Scalar& a) {
    if (is_zero(a)) throw std::invalid_argument("stencil coefficients must be nonzero");
    if (this->contains(y)) throw std::invalid_argument("duplicate stencil tap");
    this->set(y, a);
  }

  void validate() const {
    if (this->empty()) throw std::invalid_argument("stencil needs at least one tap");
  }

  std::vector<LatticePoint> offsets() const {
    std::vector<LatticePoint> out;
    for (const auto& [y, a] : this->entries_) out.push_back(y);
    return out;
  }
};

template <typename Scalar>
LatticeSignal<Scalar> delta(const LatticePoint& x, const Scalar& value = Scalar(1)) {
  LatticeSignal<Scalar> w(static_cast<int>(x.size()));
  w.set(x, value);
  return w;
}

// ---------------------------------------------------------------------------
// Signal algebra

template <typename Scalar>
LatticeSignal<Scalar> operator+(const LatticeSignal<Scalar>& a, const LatticeSignal<Scalar>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  LatticeSignal<Scalar> out = a;
  for (const auto& [x, v] : b) out.add(x, v);
  out.prune();
  return out;
}

template <typename Scalar>
LatticeSignal<Scalar> operator-(const LatticeSignal<Scalar>& a, const LatticeSignal<Scalar>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  LatticeSignal<Scalar> out = a;
  for (const auto& [x, v] : b) out.add(x, -v);
  out.prune();
  return out;
}

template <typename Scalar>
LatticeSignal<Scalar> scaled(const LatticeSignal<Scalar>& w, const Scalar& c) {
  LatticeSignal<Scalar> out(w.dim());
  for (const auto& [x, v] : w) out.set(x, c * v);
  return out;
}

/// x -> w(x - y)
template <typename Scalar>
LatticeSignal<Scalar> shifted(const LatticeSignal<Scalar>& w, const LatticePoint& y) {
  w.check(y);
  LatticeSignal<Scalar> out(w.dim());
  for (const auto& [x, v] : w) out.set(x + y, v);
  return out;
}

/// x -> conj(w(-x + y))
template <typename Scalar>
LatticeSignal<Scalar> conj_reflected(const LatticeSignal<Scalar>& w, const LatticePoint& y) {
  w.check(y);
  LatticeSignal<Scalar> out(w.dim());
  for (const auto& [x, v] : w) out.set(y - x, conj(v));
  return out;
}

template <typename Scalar>
LatticeSignal<Scalar> conj_reflected(const LatticeSignal<Scalar>& w) {
  return conj_reflected(w, LatticePoint::Zero(w.dim()).eval());
}

/// <a, b> = sum_x a(x) conj(b(x))
template <typename Scalar>
Scalar inner_product(const LatticeSignal<Scalar>& a, const LatticeSignal<Scalar>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  Scalar s(0);
  for (const auto& [x, v] : a) {
    auto it = b.entries().find(x);
    if (it != b.entries().end()) s += v * conj(it->second);
  }
  return s;
}

/// Pointwise comparison. Exact for Gaussian rationals, `tol` otherwise.
template <typename Scalar>
bool approx_equal(const LatticeSignal<Scalar>& a, const LatticeSignal<Scalar>& b, double tol = kCompareTolerance) {
  if constexpr (is_exact_v<Scalar>) {
    (void)tol;
    return a == b;
  } else {
    if (a.dim() != b.dim()) return false;
    for (const auto& [x, v] : a)
      if (std::abs(v - b.at(x)) > tol) return false;
    for (const auto& [x, v] : b)
      if (!a.contains(x) && std::abs(v) > tol) return false;
    return true;
  }
}

/// |a(x)| == |b(x)| at every lattice point.
template <typename Scalar>
bool pointwise_modulus_equal(const LatticeSignal<Scalar>& a, const LatticeSignal<Scalar>& b,
                             double tol = kCompareTolerance) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  for (const auto& [x, v] : a)
    if (!equal_modulus(v, b.at(x), tol)) return false;
  for (const auto& [x, v] : b)
    if (!a.contains(x) && !equal_modulus(v, Scalar(0), tol)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Stencil action

/// (A psi)(x) = sum_{y in T} a_y psi(x + y)
template <typename Scalar>
LatticeSignal<Scalar> apply_stencil(const Stencil<Scalar>& s, const LatticeSignal<Scalar>& psi) {
  if (s.dim() != psi.dim()) throw DimensionMismatch(s.dim(), psi.dim());
  LatticeSignal<Scalar> out(psi.dim());
  for (const auto& [x, v] : psi)
    for (const auto& [y, a] : s) out.add(x - y, a * v);
  out.prune();
  return out;
}

/// (A* psi)(x) = sum_{y in T} conj(a_y) psi(x - y)
template <typename Scalar>
LatticeSignal<Scalar> apply_adjoint(const Stencil<Scalar>& s, const LatticeSignal<Scalar>& psi) {
  if (s.dim() != psi.dim()) throw DimensionMismatch(s.dim(), psi.dim());
  LatticeSignal<Scalar> out(psi.dim());
  for (const auto& [x, v] : psi)
    for (const auto& [y, a] : s) out.add(x + y, conj(a) * v);
  out.prune();
  return out;
}

/// The kernel x -> sum_y a_y delta(x + y), supported on -T. The (2 pi)^d
/// normalisation is left out so the kernel stays Gaussian-rational; its
/// transform is sigma_hat / (2 pi)^d.
template <typename Scalar>
LatticeSignal<Scalar> sigma_signal(const Stencil<Scalar>& s) {
  LatticeSignal<Scalar> out(s.dim());
  for (const auto& [y, a] : s) out.set((-y).eval(), a);
  return out;
}

/// Trigonometric symbol sum_y a_y e^{-i p.y}.
template <typename Scalar>
Complex sigma_hat(const Stencil<Scalar>& s, const RealVector& p) {
  if (p.size() != s.dim()) throw DimensionMismatch(s.dim(), p.size());
  Complex acc(0.0, 0.0);
  for (const auto& [y, a] : s) acc += to_complex(a) * std::polar(1.0, -p.dot(to_real(y)));
  return acc;
}

/// (2 pi)^{-d} sum_x e^{i p.x} w(x), summed in lexicographic order.
template <typename Scalar>
Complex dft_eval(const LatticeSignal<Scalar>& w, const RealVector& p) {
  if (p.size() != w.dim()) throw DimensionMismatch(w.dim(), p.size());
  Complex acc(0.0, 0.0);
  for (const auto& [x, v] : w) acc += to_complex(v) * std::polar(1.0, p.dot(to_real(x)));
  return acc / std::pow(2 * std::numbers::pi, w.dim());
}

// ---------------------------------------------------------------------------
// Autocorrelation: r(k) = sum_x w(x + k) conj(w(x)). Its transform is
// (2 pi)^{2d} |w_hat|^2, so two signals have equal Fourier magnitude on the
// whole torus exactly when their lag tables agree.

template <typename Scalar>
class Autocorrelation : public SparseLatticeMap<Scalar> {
 public:
  using SparseLatticeMap<Scalar>::SparseLatticeMap;

  bool is_hermitian(double tol = kCompareTolerance) const {
    for (const auto& [k, r] : this->entries_) {
      if (!nearly_equal(this->at((-k).eval()), Scalar(conj(r)), tol)) return false;
    }
    return true;
  }

  /// |w_hat(p)|^2 evaluated from the lag table.
  double power(const RealVector& p) const {
    if (p.size() != this->dim_) throw DimensionMismatch(this->dim_, p.size());
    Complex acc(0.0, 0.0);
    for (const auto& [k, r] : this->entries_) acc += to_complex(r) * std::polar(1.0, p.dot(to_real(k)));
    return acc.real() / std::pow(2 * std::numbers::pi, 2 * this->dim_);
  }
};

template <typename Scalar>
Autocorrelation<Scalar> autocorrelation(const LatticeSignal<Scalar>& w) {
  Autocorrelation<Scalar> r(w.dim());
  for (const auto& [x1, v1] : w)
    for (const auto& [x2, v2] : w) r.add((x1 - x2).eval(), v1 * conj(v2));
  if constexpr (!is_exact_v<Scalar>) {
    // keep r(0) and drop lags that are pure cancellation noise
    double r0 = std::abs(r.at(LatticePoint::Zero(w.dim())));
    Autocorrelation<Scalar> kept(w.dim());
    for (const auto& [k, v] : r)
      if (std::abs(v) > kPruneRelative * r0) kept.set(k, v);
    return kept;
  }
  return r;
}

/// Outcome of a lag-by-lag comparison. When the tables disagree, `lag` is
/// the first differing lag and lhs/rhs its values; otherwise lag 0.
template <typename Scalar>
struct MagnitudeComparison {
  bool equal = false;
  bool trivially_zero = false;
  LatticePoint lag;
  Scalar lhs;
  Scalar rhs;
};

template <typename Scalar>
MagnitudeComparison<Scalar> compare_fourier_magnitude(const LatticeSignal<Scalar>& f, const LatticeSignal<Scalar>& g,
                                                      double tol = kCompareTolerance) {
  if (f.dim() != g.dim()) throw DimensionMismatch(f.dim(), g.dim());
  MagnitudeComparison<Scalar> out;
  out.lag = LatticePoint::Zero(f.dim());
  if (f.empty() && g.empty()) {
    out.trivially_zero = true;
    out.lhs = out.rhs = Scalar(0);
    return out;
  }
  const auto rf = autocorrelation(f);
  const auto rg = autocorrelation(g);
  out.lhs = rf.at(out.lag);
  out.rhs = rg.at(out.lag);
  auto mismatch = [&](const LatticePoint& k) {
    if (nearly_equal(rf.at(k), rg.at(k), tol)) return false;
    out.lag = k;
    out.lhs = rf.at(k);
    out.rhs = rg.at(k);
    return true;
  };
  // lag 0 first so the certificate reports energies when they differ
  if (mismatch(out.lag)) return out;
  for (const auto& [k, v] : rf)
    if (mismatch(k)) return out;
  for (const auto& [k, v] : rg)
    if (mismatch(k)) return out;
  out.equal = !f.empty();
  return out;
}

/// |f_hat|^2 == |g_hat|^2 on the torus and f != 0.
template <typename Scalar>
bool equal_fourier_magnitude(const LatticeSignal<Scalar>& f, const LatticeSignal<Scalar>& g,
                             double tol = kCompareTolerance) {
  return compare_fourier_magnitude(f, g, tol).equal;
}

// ---------------------------------------------------------------------------
// Trivial ambiguities: g = u f(. - y) or g = u conj(f(-. + y)) with |u| = 1.

enum class AssociationKind { Shift, ConjReflect };

inline const char* to_string(AssociationKind k) { return k == AssociationKind::Shift ? "shift" : "conj_reflect"; }

template <typename Scalar>
struct AssociationWitness {
  AssociationKind kind;
  Scalar phase;  // the unit factor e^{i alpha}
  LatticePoint shift;

  double alpha() const { return phase_angle(to_complex(phase)); }
};

template <typename Scalar>
LatticeSignal<Scalar> apply_witness(const AssociationWitness<Scalar>& w, const LatticeSignal<Scalar>& f) {
  if (w.kind == AssociationKind::Shift) return scaled(shifted(f, w.shift), w.phase);
  return scaled(conj_reflected(f, w.shift), w.phase);
}

namespace detail {

template <typename Scalar>
double association_tolerance(const LatticeSignal<Scalar>& f) {
  double peak = 1.0;
  for (const auto& [x, v] : f) peak = std::max(peak, magnitude(v));
  return kCompareTolerance * peak;
}

/// Tests the single candidate forced by aligning extreme support points.
template <typename Scalar>
std::optional<AssociationWitness<Scalar>> try_candidate(const LatticeSignal<Scalar>& f, const LatticeSignal<Scalar>& g,
                                                        AssociationKind kind) {
  const double tol = association_tolerance(f);
  const LatticePoint& g0 = g.min_point();
  AssociationWitness<Scalar> w{kind, Scalar(0), LatticePoint()};
  if (kind == AssociationKind::Shift) {
    w.shift = g0 - f.min_point();
    w.phase = g.at(g0) / f.at(f.min_point());
  } else {
    // reflection reverses lexicographic order: min of g pairs with max of f
    w.shift = g0 + f.max_point();
    w.phase = g.at(g0) / conj(f.at(f.max_point()));
  }
  if (!is_unit(w.phase, tol)) return std::nullopt;
  for (const auto& [x, v] : f) {
    const LatticePoint target = kind == AssociationKind::Shift ? LatticePoint(x + w.shift) : LatticePoint(w.shift - x);
    const Scalar expected = kind == AssociationKind::Shift ? Scalar(w.phase * v) : Scalar(w.phase * conj(v));
    if (!nearly_equal(g.at(target), expected, tol)) return std::nullopt;
  }
  return w;
}

}  // namespace detail

/// Finds (alpha, y) with g = e^{i alpha} f(. - y) or g = e^{i alpha} conj(f(-. + y)).
/// At most one candidate per kind exists, so the search is finite and exact.
/// `only` restricts the search to one kind.
template <typename Scalar>
std::optional<AssociationWitness<Scalar>> find_association(const LatticeSignal<Scalar>& f,
                                                           const LatticeSignal<Scalar>& g,
                                                           std::optional<AssociationKind> only = std::nullopt) {
  if (f.dim() != g.dim()) throw DimensionMismatch(f.dim(), g.dim());
  if (f.empty() || g.empty()) throw std::invalid_argument("association search needs nonzero signals");
  if (f.size() != g.size()) return std::nullopt;
  for (AssociationKind kind : {AssociationKind::Shift, AssociationKind::ConjReflect}) {
    if (only && *only != kind) continue;
    if (auto w = detail::try_candidate(f, g, kind)) return w;
  }
  return std::nullopt;
}

/// True iff w = e^{i alpha} conj(w(-. + y)) for some alpha, y.
template <typename Scalar>
bool is_self_conj_associated(const LatticeSignal<Scalar>& w) {
  return find_association(w, w, AssociationKind::ConjReflect).has_value();
}

}  // namespace forge
