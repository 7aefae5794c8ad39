#pragma once

// Signals on R^d built from complex-weighted box atoms (or Dirac atoms, for
// delta trains) with closed-form Fourier transforms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "forge/lattice.hpp"

namespace forge {

/// Absolute tolerance for comparing atom geometry.
inline constexpr double kGeometryTolerance = 1e-12;

enum class AtomShape { Box, Dirac };

/// Open axis-aligned box center +- halfwidth, or a point mass at center.
struct AtomGeometry {
  AtomShape shape = AtomShape::Box;
  RealVector center;
  RealVector halfwidth;  // empty for Dirac atoms

  static AtomGeometry box(RealVector center, RealVector halfwidth) {
    if (center.size() != halfwidth.size()) throw DimensionMismatch(static_cast<int>(center.size()), halfwidth.size());
    if ((halfwidth.array() <= 0).any()) throw std::invalid_argument("box halfwidths must be positive");
    return {AtomShape::Box, std::move(center), std::move(halfwidth)};
  }
  static AtomGeometry dirac(RealVector center) { return {AtomShape::Dirac, std::move(center), RealVector()}; }

  int dim() const { return static_cast<int>(center.size()); }

  AtomGeometry translated(const RealVector& y) const { return {shape, center + y, halfwidth}; }
  AtomGeometry reflected(const RealVector& y) const { return {shape, y - center, halfwidth}; }
};

inline bool same_geometry(const AtomGeometry& a, const AtomGeometry& b, double tol = kGeometryTolerance) {
  if (a.shape != b.shape || a.center.size() != b.center.size()) return false;
  if ((a.center - b.center).cwiseAbs().maxCoeff() > tol) return false;
  return a.shape == AtomShape::Dirac || (a.halfwidth - b.halfwidth).cwiseAbs().maxCoeff() <= tol;
}

/// True when the closures of the two atoms do not meet.
inline bool closures_disjoint(const AtomGeometry& a, const AtomGeometry& b, double tol = kGeometryTolerance) {
  const Eigen::Index d = a.center.size();
  RealVector ha = a.shape == AtomShape::Box ? a.halfwidth : RealVector::Zero(d);
  RealVector hb = b.shape == AtomShape::Box ? b.halfwidth : RealVector::Zero(d);
  for (Eigen::Index j = 0; j < d; ++j)
    if (std::abs(a.center(j) - b.center(j)) > ha(j) + hb(j) + tol) return true;
  return false;
}

inline bool geometry_less(const AtomGeometry& a, const AtomGeometry& b) {
  if (std::lexicographical_compare(a.center.begin(), a.center.end(), b.center.begin(), b.center.end())) return true;
  if (std::lexicographical_compare(b.center.begin(), b.center.end(), a.center.begin(), a.center.end())) return false;
  if (a.shape != b.shape) return a.shape < b.shape;
  return std::lexicographical_compare(a.halfwidth.begin(), a.halfwidth.end(), b.halfwidth.begin(), b.halfwidth.end());
}

template <typename Scalar>
struct WeightedAtom {
  Scalar coef;
  AtomGeometry geometry;
};

/// Finite sum of weighted atoms. Atoms with identical geometry are merged
/// on insertion; distinct atoms whose closures meet must be declared with
/// declare_overlap(), since pointwise and association checks need a
/// canonical decomposition.
template <typename Scalar>
class ContinuousSignal {
 public:
  using scalar_type = Scalar;

  explicit ContinuousSignal(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
  }

  int dim() const noexcept { return dim_; }
  const std::vector<WeightedAtom<Scalar>>& atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return atoms_.empty(); }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool overlap_declared() const noexcept { return overlap_declared_; }
  void declare_overlap(bool on = true) { overlap_declared_ = on; }

  void add(const AtomGeometry& g, const Scalar& coef) {
    if (g.dim() != dim_) throw DimensionMismatch(dim_, g.dim());
    for (auto it = atoms_.begin(); it != atoms_.end(); ++it) {
      if (same_geometry(it->geometry, g)) {
        it->coef += coef;
        if (is_zero(it->coef)) atoms_.erase(it);
        return;
      }
    }
    if (is_zero(coef)) return;
    auto pos = std::upper_bound(atoms_.begin(), atoms_.end(), g,
                                [](const AtomGeometry& x, const WeightedAtom<Scalar>& a) { return geometry_less(x, a.geometry); });
    atoms_.insert(pos, WeightedAtom<Scalar>{coef, g});
  }

  /// Floating mode: drop atoms with |c| <= kPruneRelative * max|c|.
  void prune() {
    if constexpr (!is_exact_v<Scalar>) {
      double peak = 0;
      for (const auto& a : atoms_) peak = std::max(peak, std::abs(a.coef));
      std::erase_if(atoms_, [&](const auto& a) { return std::abs(a.coef) <= kPruneRelative * peak; });
    }
  }

  bool has_overlaps() const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      for (std::size_t j = i + 1; j < atoms_.size(); ++j)
        if (!closures_disjoint(atoms_[i].geometry, atoms_[j].geometry)) return true;
    return false;
  }

  /// Throws if distinct atoms overlap without a declaration.
  void validate() const {
    if (!overlap_declared_ && has_overlaps()) throw std::invalid_argument("overlapping atoms must be declared");
  }

  /// Throws when the atom list is not a canonical decomposition.
  void require_disjoint(const char* what) const {
    if (has_overlaps())
      throw std::invalid_argument(std::string(what) + ": overlapping atoms make the check undecidable by coefficient comparison");
  }

  bool is_delta_train() const {
    return std::all_of(atoms_.begin(), atoms_.end(), [](const auto& a) { return a.geometry.shape == AtomShape::Dirac; });
  }

  /// Smallest box halfwidth, or nullopt for pure delta trains.
  std::optional<double> min_halfwidth() const {
    std::optional<double> h;
    for (const auto& a : atoms_)
      if (a.geometry.shape == AtomShape::Box) {
        double m = a.geometry.halfwidth.minCoeff();
        h = h ? std::min(*h, m) : m;
      }
    return h;
  }

  const WeightedAtom<Scalar>* find(const AtomGeometry& g) const {
    for (const auto& a : atoms_)
      if (same_geometry(a.geometry, g)) return &a;
    return nullptr;
  }

 private:
  int dim_;
  std::vector<WeightedAtom<Scalar>> atoms_;
  bool overlap_declared_ = false;
};

/// Real-offset finite difference operator: (A psi)(x) = sum_y a_y psi(x + y).
template <typename Scalar>
class ContinuousStencil {
 public:
  using scalar_type = Scalar;

  explicit ContinuousStencil(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
  }

  int dim() const noexcept { return dim_; }
  const std::vector<std::pair<RealVector, Scalar>>& taps() const noexcept { return taps_; }
  std::size_t size() const noexcept { return taps_.size(); }

  void add_tap(const RealVector& y, const Scalar& a) {
    if (y.size() != dim_) throw DimensionMismatch(dim_, y.size());
    if (is_zero(a)) throw std::invalid_argument("stencil coefficients must be nonzero");
    for (const auto& [t, c] : taps_)
      if ((t - y).cwiseAbs().maxCoeff() <= kGeometryTolerance) throw std::invalid_argument("duplicate stencil tap");
    taps_.emplace_back(y, a);
  }

  void validate() const {
    if (taps_.empty()) throw std::invalid_argument("stencil needs at least one tap");
  }

  const Scalar* coefficient(const RealVector& y) const {
    for (const auto& [t, c] : taps_)
      if ((t - y).cwiseAbs().maxCoeff() <= kGeometryTolerance) return &c;
    return nullptr;
  }

  std::vector<RealVector> offsets() const {
    std::vector<RealVector> out;
    for (const auto& [t, c] : taps_) out.push_back(t);
    return out;
  }

 private:
  int dim_;
  std::vector<std::pair<RealVector, Scalar>> taps_;
};

// ---------------------------------------------------------------------------

/// Closed-form transform (2 pi)^{-d} int e^{i p.x} w(x) dx.
template <typename Scalar>
Complex ft_eval(const ContinuousSignal<Scalar>& w, const RealVector& p) {
  if (p.size() != w.dim()) throw DimensionMismatch(w.dim(), p.size());
  Complex acc(0.0, 0.0);
  for (const auto& atom : w.atoms()) {
    const auto& g = atom.geometry;
    double envelope = 1.0;
    if (g.shape == AtomShape::Box) {
      for (Eigen::Index j = 0; j < p.size(); ++j) {
        const double pj = p(j), hj = g.halfwidth(j);
        envelope *= pj == 0.0 ? 2 * hj : 2 * std::sin(pj * hj) / pj;
      }
    }
    acc += to_complex(atom.coef) * std::polar(1.0, p.dot(g.center)) * envelope;
  }
  return acc / std::pow(2 * std::numbers::pi, w.dim());
}

template <typename Scalar>
ContinuousSignal<Scalar> apply_continuous(const ContinuousStencil<Scalar>& s, const ContinuousSignal<Scalar>& w) {
  if (s.dim() != w.dim()) throw DimensionMismatch(s.dim(), w.dim());
  ContinuousSignal<Scalar> out(w.dim());
  for (const auto& atom : w.atoms())
    for (const auto& [y, a] : s.taps()) out.add(atom.geometry.translated(-y), a * atom.coef);
  out.prune();
  out.declare_overlap(out.has_overlaps());
  return out;
}

/// (A* psi)(x) = sum_y conj(a_y) psi(x - y)
template <typename Scalar>
ContinuousSignal<Scalar> apply_continuous_adjoint(const ContinuousStencil<Scalar>& s, const ContinuousSignal<Scalar>& w) {
  if (s.dim() != w.dim()) throw DimensionMismatch(s.dim(), w.dim());
  ContinuousSignal<Scalar> out(w.dim());
  for (const auto& atom : w.atoms())
    for (const auto& [y, a] : s.taps()) out.add(atom.geometry.translated(y), conj(a) * atom.coef);
  out.prune();
  out.declare_overlap(out.has_overlaps());
  return out;
}

template <typename Scalar>
Complex sigma_hat(const ContinuousStencil<Scalar>& s, const RealVector& p) {
  if (p.size() != s.dim()) throw DimensionMismatch(s.dim(), p.size());
  Complex acc(0.0, 0.0);
  for (const auto& [y, a] : s.taps()) acc += to_complex(a) * std::polar(1.0, -p.dot(y));
  return acc;
}

/// Dirac kernel x -> sum_y a_y delta(x + y) (without the (2 pi)^d factor).
template <typename Scalar>
ContinuousSignal<Scalar> sigma_signal(const ContinuousStencil<Scalar>& s) {
  ContinuousSignal<Scalar> out(s.dim());
  for (const auto& [y, a] : s.taps()) out.add(AtomGeometry::dirac(-y), a);
  return out;
}

/// u(x) = sum_y v(y) delta(x - y)
template <typename Scalar>
ContinuousSignal<Scalar> delta_train(const LatticeSignal<Scalar>& v) {
  ContinuousSignal<Scalar> out(v.dim());
  for (const auto& [x, c] : v) out.add(AtomGeometry::dirac(to_real(x)), c);
  return out;
}

/// Inverse of delta_train. Throws unless every atom is a Dirac mass at an
/// integer point.
template <typename Scalar>
LatticeSignal<Scalar> lattice_reduce(const ContinuousSignal<Scalar>& u) {
  LatticeSignal<Scalar> v(u.dim());
  for (const auto& atom : u.atoms()) {
    if (atom.geometry.shape != AtomShape::Dirac) throw std::invalid_argument("lattice_reduce: input is not a delta train");
    const RealVector rounded = atom.geometry.center.array().round().matrix();
    if ((rounded - atom.geometry.center).cwiseAbs().maxCoeff() > kGeometryTolerance)
      throw std::invalid_argument("lattice_reduce: delta train has a non-integer node");
    v.add(rounded.cast<std::int64_t>(), atom.coef);
  }
  return v;
}

template <typename Scalar>
LatticeSignal<Scalar> lattice_reduce(const LatticeSignal<Scalar>& v) {
  return v;
}

// ---------------------------------------------------------------------------
// Algebra

template <typename Scalar>
ContinuousSignal<Scalar> combine(const ContinuousSignal<Scalar>& a, const ContinuousSignal<Scalar>& b, const Scalar& sb) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  ContinuousSignal<Scalar> out = a;
  for (const auto& atom : b.atoms()) out.add(atom.geometry, sb * atom.coef);
  out.prune();
  out.declare_overlap(out.has_overlaps());
  return out;
}

template <typename Scalar>
ContinuousSignal<Scalar> operator+(const ContinuousSignal<Scalar>& a, const ContinuousSignal<Scalar>& b) {
  return combine(a, b, Scalar(1));
}

template <typename Scalar>
ContinuousSignal<Scalar> operator-(const ContinuousSignal<Scalar>& a, const ContinuousSignal<Scalar>& b) {
  return combine(a, b, Scalar(-1));
}

template <typename Scalar>
ContinuousSignal<Scalar> scaled(const ContinuousSignal<Scalar>& w, const Scalar& c) {
  ContinuousSignal<Scalar> out(w.dim());
  for (const auto& atom : w.atoms()) out.add(atom.geometry, c * atom.coef);
  out.declare_overlap(w.overlap_declared());
  return out;
}

/// x -> w(x - y)
template <typename Scalar>
ContinuousSignal<Scalar> shifted(const ContinuousSignal<Scalar>& w, const RealVector& y) {
  ContinuousSignal<Scalar> out(w.dim());
  for (const auto& atom : w.atoms()) out.add(atom.geometry.translated(y), atom.coef);
  out.declare_overlap(w.overlap_declared());
  return out;
}

/// x -> conj(w(-x + y))
template <typename Scalar>
ContinuousSignal<Scalar> conj_reflected(const ContinuousSignal<Scalar>& w, const RealVector& y) {
  ContinuousSignal<Scalar> out(w.dim());
  for (const auto& atom : w.atoms()) out.add(atom.geometry.reflected(y), Scalar(conj(atom.coef)));
  out.declare_overlap(w.overlap_declared());
  return out;
}

template <typename Scalar>
ContinuousSignal<Scalar> conj_reflected(const ContinuousSignal<Scalar>& w) {
  return conj_reflected(w, RealVector::Zero(w.dim()).eval());
}

template <typename Scalar>
bool approx_equal(const ContinuousSignal<Scalar>& a, const ContinuousSignal<Scalar>& b, double tol = kCompareTolerance) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  for (const auto& atom : a.atoms()) {
    const auto* other = b.find(atom.geometry);
    if (!other || !nearly_equal(atom.coef, other->coef, tol)) return false;
  }
  return true;
}

/// |f| == |g| almost everywhere, decided atom by atom. Both signals must be
/// canonical (pairwise disjoint atoms).
template <typename Scalar>
bool pointwise_modulus_equal(const ContinuousSignal<Scalar>& f, const ContinuousSignal<Scalar>& g,
                             double tol = kCompareTolerance) {
  if (f.dim() != g.dim()) throw DimensionMismatch(f.dim(), g.dim());
  f.require_disjoint("pointwise_modulus_equal");
  g.require_disjoint("pointwise_modulus_equal");
  if (f.size() != g.size()) return false;
  for (const auto& atom : f.atoms()) {
    const auto* other = g.find(atom.geometry);
    if (!other || !equal_modulus(atom.coef, other->coef, tol)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sampled magnitude comparison

struct SampledComparison {
  bool equal = false;
  double max_deviation = 0;
  double peak = 0;
  double span = 0;  // grid covers [-span, span]^d
  long samples = 0;
};

/// Half-width of the sampling window: four sinc lobes of the narrowest box,
/// or two periods of the lattice torus for pure delta trains.
template <typename Scalar>
double sampling_span(const ContinuousSignal<Scalar>& f, const ContinuousSignal<Scalar>& g) {
  auto hf = f.min_halfwidth(), hg = g.min_halfwidth();
  std::optional<double> h = hf;
  if (hg) h = h ? std::min(*h, *hg) : hg;
  return h ? 4 * std::numbers::pi / *h : 2 * std::numbers::pi;
}

/// Visits the grid^d sample points of [-span, span]^d in row-major order.
template <typename Visit>
void for_each_grid_point(int dim, int grid, double span, Visit&& visit) {
  if (grid < 2) throw std::invalid_argument("sampling grid needs at least 2 points per axis");
  std::vector<int> idx(dim, 0);
  RealVector p(dim);
  while (true) {
    for (int j = 0; j < dim; ++j) p(j) = -span + 2 * span * idx[j] / (grid - 1);
    visit(p);
    int j = dim - 1;
    while (j >= 0 && ++idx[j] == grid) idx[j--] = 0;
    if (j < 0) break;
  }
}

template <typename Scalar>
SampledComparison sampled_magnitude_equal(const ContinuousSignal<Scalar>& f, const ContinuousSignal<Scalar>& g, int grid,
                                          double rel_tol = 1e-10) {
  if (f.dim() != g.dim()) throw DimensionMismatch(f.dim(), g.dim());
  SampledComparison out;
  out.span = sampling_span(f, g);
  for_each_grid_point(f.dim(), grid, out.span, [&](const RealVector& p) {
    const double a = std::norm(ft_eval(f, p)), b = std::norm(ft_eval(g, p));
    out.max_deviation = std::max(out.max_deviation, std::abs(a - b));
    out.peak = std::max(out.peak, a);
    ++out.samples;
  });
  out.equal = out.peak > 0 && out.max_deviation <= rel_tol * out.peak;
  return out;
}

// ---------------------------------------------------------------------------
// Trivial ambiguities for atom signals

template <typename Scalar>
struct ContinuousWitness {
  AssociationKind kind;
  Scalar phase;
  RealVector shift;

  double alpha() const { return phase_angle(to_complex(phase)); }
};

template <typename Scalar>
ContinuousSignal<Scalar> apply_witness(const ContinuousWitness<Scalar>& w, const ContinuousSignal<Scalar>& f) {
  if (w.kind == AssociationKind::Shift) return scaled(shifted(f, w.shift), w.phase);
  return scaled(conj_reflected(f, w.shift), w.phase);
}

/// Same alignment search as the lattice version, on canonical atom lists.
template <typename Scalar>
std::optional<ContinuousWitness<Scalar>> find_association(const ContinuousSignal<Scalar>& f,
                                                          const ContinuousSignal<Scalar>& g,
                                                          std::optional<AssociationKind> only = std::nullopt) {
  if (f.dim() != g.dim()) throw DimensionMismatch(f.dim(), g.dim());
  if (f.empty() || g.empty()) throw std::invalid_argument("association search needs nonzero signals");
  f.require_disjoint("find_association");
  g.require_disjoint("find_association");
  if (f.size() != g.size()) return std::nullopt;

  double peak = 1.0;
  for (const auto& a : f.atoms()) peak = std::max(peak, magnitude(a.coef));
  const double tol = kCompareTolerance * peak;

  const auto& g0 = g.atoms().front();
  for (AssociationKind kind : {AssociationKind::Shift, AssociationKind::ConjReflect}) {
    if (only && *only != kind) continue;
    ContinuousWitness<Scalar> w{kind, Scalar(0), RealVector()};
    if (kind == AssociationKind::Shift) {
      const auto& f0 = f.atoms().front();
      w.shift = g0.geometry.center - f0.geometry.center;
      w.phase = g0.coef / f0.coef;
    } else {
      const auto& f1 = f.atoms().back();
      w.shift = g0.geometry.center + f1.geometry.center;
      w.phase = g0.coef / conj(f1.coef);
    }
    if (!is_unit(w.phase, tol)) continue;
    bool ok = true;
    for (const auto& a : f.atoms()) {
      const AtomGeometry target =
          kind == AssociationKind::Shift ? a.geometry.translated(w.shift) : a.geometry.reflected(w.shift);
      const Scalar expected = kind == AssociationKind::Shift ? Scalar(w.phase * a.coef) : Scalar(w.phase * conj(a.coef));
      const auto* other = g.find(target);
      if (!other || !nearly_equal(other->coef, expected, tol)) {
        ok = false;
        break;
      }
    }
    if (ok) return w;
  }
  return std::nullopt;
}

template <typename Scalar>
bool is_self_conj_associated(const ContinuousSignal<Scalar>& w) {
  return find_association(w, w, AssociationKind::ConjReflect).has_value();
}

}  // namespace forge
