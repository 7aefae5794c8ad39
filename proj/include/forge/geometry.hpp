#pragma once

// Ball-swept polytopes: hull(vertices) + radius * unit ball. Every support
// domain the constructions need (balls, boxes, hulls of translated balls)
// is of this form, and distance / diameter decompose exactly.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "forge/continuous.hpp"
#include "forge/lattice.hpp"

namespace forge {

/// Tolerance for strict inequalities on computed distances.
inline constexpr double kDistanceTolerance = 1e-10;

class ConvexBody {
 public:
  /// `vertices` holds one point per column.
  ConvexBody(Eigen::MatrixXd vertices, double radius = 0.0);

  static ConvexBody ball(const RealVector& center, double radius);
  static ConvexBody box(const RealVector& lo, const RealVector& hi);
  static ConvexBody interval(double lo, double hi);

  int dim() const noexcept { return static_cast<int>(vertices_.rows()); }
  const Eigen::MatrixXd& vertices() const noexcept { return vertices_; }
  double radius() const noexcept { return radius_; }

  ConvexBody translated(const RealVector& y) const;
  ConvexBody negated() const;

  /// Axis-aligned bounding box of the closure.
  std::pair<RealVector, RealVector> bounds() const;

 private:
  Eigen::MatrixXd vertices_;
  double radius_;
};

/// Point of minimum Euclidean norm in the convex hull of the columns of
/// `points` (GJK with an exhaustive sub-simplex solver).
RealVector min_norm_point(const Eigen::MatrixXd& points);

double distance_to_hull(const Eigen::MatrixXd& vertices, const RealVector& x);
bool hull_contains(const Eigen::MatrixXd& vertices, const RealVector& x, double tol = kDistanceTolerance);

/// ch(U (base + y)) = base + ch(offsets).
ConvexBody hull_of_translates(const ConvexBody& base, const std::vector<RealVector>& offsets);

/// ch(a U b); both bodies must share the same radius.
ConvexBody hull_of_union(const ConvexBody& a, const ConvexBody& b);

double distance(const ConvexBody& a, const ConvexBody& b);
double diameter(const ConvexBody& b);

/// Membership in the open body.
bool contains_open(const ConvexBody& b, const RealVector& x);
/// Open atom contained in the open body (closed box corners may touch the boundary).
bool contains_atom(const ConvexBody& b, const AtomGeometry& atom);
/// Same convex set, up to tolerance.
bool same_body(const ConvexBody& a, const ConvexBody& b);

/// True iff the open body contains at least one lattice point.
bool meets_lattice(const ConvexBody& b);

template <typename Scalar>
bool support_within(const LatticeSignal<Scalar>& w, const ConvexBody& b) {
  for (const auto& [x, v] : w)
    if (!contains_open(b, to_real(x))) return false;
  return true;
}

template <typename Scalar>
bool support_within(const ContinuousSignal<Scalar>& w, const ConvexBody& b) {
  for (const auto& atom : w.atoms())
    if (!contains_atom(b, atom.geometry)) return false;
  return true;
}

struct Problem3Report {
  double R = 0;
  double diam = 0;
  bool pass = false;
  std::string reason;
  std::optional<bool> lattice_ok;
};

/// R = dist(D, D0), diam(D); passes iff 0 < R < diam(D) (and, in discrete
/// mode, both bodies meet the lattice).
Problem3Report check_problem3_geometry(const ConvexBody& D0, const ConvexBody& D, bool discrete);

/// (T U -T) \ {y_star}; throws when y_star or -y_star is not a tap, or when
/// nothing remains.
std::vector<RealVector> remaining_offsets(const std::vector<RealVector>& taps, const RealVector& y_star);

/// dist(B + y_star, ch(U_{y in (T U -T)\{y_star}} (B + y))) > 0.
bool check_thm4_separation(const ConvexBody& B, const std::vector<RealVector>& taps, const RealVector& y_star);

struct Remark5Result {
  bool applicable = false;       // separation holds and T != -T
  bool y_star_outside_hull = false;
  bool holds = false;            // T != -T + z for every z
  std::string note;
};

/// Separation plus T != -T rules out T = -T + z for every z: y_star is
/// outside ch((T U -T)\{y_star}), which any such z would contradict.
Remark5Result check_remark5(const ConvexBody& B, const std::vector<RealVector>& taps, const RealVector& y_star);

/// T == -T as point sets (tolerance kGeometryTolerance).
bool is_symmetric(const std::vector<RealVector>& taps);

std::vector<RealVector> to_real(const std::vector<LatticePoint>& points);

}  // namespace forge
