#include "forge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace forge {

ConvexBody::ConvexBody(Eigen::MatrixXd vertices, double radius) : vertices_(std::move(vertices)), radius_(radius) {
  if (vertices_.rows() < 1) throw std::invalid_argument("convex body needs a positive dimension");
  if (vertices_.cols() < 1) throw std::invalid_argument("convex body needs at least one vertex");
  if (!(radius_ >= 0) || !std::isfinite(radius_)) throw std::invalid_argument("radius must be finite and >= 0");
  if (!vertices_.allFinite()) throw std::invalid_argument("vertices must be finite");
}

ConvexBody ConvexBody::ball(const RealVector& center, double radius) { return ConvexBody(center, radius); }

ConvexBody ConvexBody::box(const RealVector& lo, const RealVector& hi) {
  if (lo.size() != hi.size()) throw DimensionMismatch(static_cast<int>(lo.size()), hi.size());
  const int d = static_cast<int>(lo.size());
  Eigen::MatrixXd v(d, 1 << d);
  for (int mask = 0; mask < (1 << d); ++mask)
    for (int j = 0; j < d; ++j) v(j, mask) = (mask >> j & 1) ? hi(j) : lo(j);
  return ConvexBody(std::move(v));
}

ConvexBody ConvexBody::interval(double lo, double hi) {
  Eigen::MatrixXd v(1, 2);
  v << lo, hi;
  return ConvexBody(std::move(v));
}

ConvexBody ConvexBody::translated(const RealVector& y) const {
  if (y.size() != dim()) throw DimensionMismatch(dim(), y.size());
  return ConvexBody(vertices_.colwise() + y, radius_);
}

ConvexBody ConvexBody::negated() const { return ConvexBody(-vertices_, radius_); }

std::pair<RealVector, RealVector> ConvexBody::bounds() const {
  RealVector lo = vertices_.rowwise().minCoeff().array() - radius_;
  RealVector hi = vertices_.rowwise().maxCoeff().array() + radius_;
  return {lo, hi};
}

namespace {

/// Minimum-norm point of the affine hull of `s`, with its barycentric weights.
bool affine_min_norm(const std::vector<RealVector>& s, RealVector& point, Eigen::VectorXd& weights) {
  const Eigen::Index k = static_cast<Eigen::Index>(s.size());
  weights.resize(k);
  if (k == 1) {
    weights(0) = 1;
    point = s[0];
    return true;
  }
  Eigen::MatrixXd D(s[0].size(), k - 1);
  for (Eigen::Index i = 1; i < k; ++i) D.col(i - 1) = s[i] - s[0];
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(D);
  Eigen::VectorXd mu = cod.solve(-s[0]);
  weights(0) = 1 - mu.sum();
  weights.tail(k - 1) = mu;
  point = s[0] + D * mu;
  return weights.allFinite();
}

/// Exhaustive sub-simplex search: the minimum-norm point of a simplex lies
/// in the relative interior of one of its faces.
RealVector simplex_min_norm(std::vector<RealVector>& simplex) {
  const int k = static_cast<int>(simplex.size());
  double best = std::numeric_limits<double>::infinity();
  RealVector best_point;
  int best_mask = 0;
  for (int mask = 1; mask < (1 << k); ++mask) {
    std::vector<RealVector> face;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) face.push_back(simplex[i]);
    RealVector p;
    Eigen::VectorXd w;
    if (!affine_min_norm(face, p, w)) continue;
    if ((w.array() < -1e-12).any()) continue;
    const double n = p.squaredNorm();
    if (n < best) {
      best = n;
      best_point = p;
      best_mask = mask;
    }
  }
  std::vector<RealVector> kept;
  for (int i = 0; i < k; ++i)
    if (best_mask >> i & 1) kept.push_back(simplex[i]);
  simplex = std::move(kept);
  return best_point;
}

}  // namespace

RealVector min_norm_point(const Eigen::MatrixXd& points) {
  if (points.cols() == 0) throw std::invalid_argument("min_norm_point: empty point set");
  Eigen::Index start;
  points.colwise().squaredNorm().minCoeff(&start);
  std::vector<RealVector> simplex{points.col(start)};
  RealVector v = points.col(start);
  for (int iter = 0; iter < 1000; ++iter) {
    const double vv = v.squaredNorm();
    if (vv <= 1e-30) break;
    Eigen::Index idx;
    (points.transpose() * v).minCoeff(&idx);
    const RealVector w = points.col(idx);
    if (vv - v.dot(w) <= 1e-14 * vv) break;
    if (std::any_of(simplex.begin(), simplex.end(), [&](const RealVector& s) { return (s - w).squaredNorm() == 0; }))
      break;
    simplex.push_back(w);
    RealVector next = simplex_min_norm(simplex);
    if (next.squaredNorm() >= vv) break;  // no progress: numerically converged
    v = std::move(next);
  }
  return v;
}

double distance_to_hull(const Eigen::MatrixXd& vertices, const RealVector& x) {
  if (x.size() != vertices.rows()) throw DimensionMismatch(static_cast<int>(vertices.rows()), x.size());
  if (vertices.rows() == 1) {
    const double lo = vertices.minCoeff(), hi = vertices.maxCoeff();
    return std::max({0.0, lo - x(0), x(0) - hi});
  }
  return min_norm_point(vertices.colwise() - x).norm();
}

bool hull_contains(const Eigen::MatrixXd& vertices, const RealVector& x, double tol) {
  return distance_to_hull(vertices, x) <= tol;
}

ConvexBody hull_of_translates(const ConvexBody& base, const std::vector<RealVector>& offsets) {
  if (offsets.empty()) throw std::invalid_argument("hull_of_translates: no offsets");
  const Eigen::Index n = base.vertices().cols();
  Eigen::MatrixXd v(base.dim(), n * static_cast<Eigen::Index>(offsets.size()));
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    if (offsets[k].size() != base.dim()) throw DimensionMismatch(base.dim(), offsets[k].size());
    v.middleCols(static_cast<Eigen::Index>(k) * n, n) = base.vertices().colwise() + offsets[k];
  }
  return ConvexBody(std::move(v), base.radius());
}

ConvexBody hull_of_union(const ConvexBody& a, const ConvexBody& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  if (std::abs(a.radius() - b.radius()) > kGeometryTolerance)
    throw std::invalid_argument("hull_of_union: bodies must share the same radius");
  Eigen::MatrixXd v(a.dim(), a.vertices().cols() + b.vertices().cols());
  v << a.vertices(), b.vertices();
  return ConvexBody(std::move(v), a.radius());
}

double distance(const ConvexBody& a, const ConvexBody& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  double polytope;
  if (a.dim() == 1) {
    const double alo = a.vertices().minCoeff(), ahi = a.vertices().maxCoeff();
    const double blo = b.vertices().minCoeff(), bhi = b.vertices().maxCoeff();
    polytope = std::max({0.0, blo - ahi, alo - bhi});
  } else {
    const Eigen::Index n = a.vertices().cols(), m = b.vertices().cols();
    Eigen::MatrixXd diff(a.dim(), n * m);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j) diff.col(i * m + j) = a.vertices().col(i) - b.vertices().col(j);
    polytope = min_norm_point(diff).norm();
  }
  return std::max(0.0, polytope - a.radius() - b.radius());
}

double diameter(const ConvexBody& b) {
  double best = 0;
  const auto& v = b.vertices();
  for (Eigen::Index i = 0; i < v.cols(); ++i)
    for (Eigen::Index j = i + 1; j < v.cols(); ++j) best = std::max(best, (v.col(i) - v.col(j)).norm());
  return best + 2 * b.radius();
}

namespace {

Eigen::Index affine_rank(const Eigen::MatrixXd& v) {
  if (v.cols() < 2) return 0;
  Eigen::MatrixXd d = v.rightCols(v.cols() - 1).colwise() - v.col(0);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
  lu.setThreshold(1e-12);
  return lu.rank();
}

}  // namespace

bool contains_open(const ConvexBody& b, const RealVector& x) {
  if (x.size() != b.dim()) throw DimensionMismatch(b.dim(), x.size());
  if (b.radius() > 0) return distance_to_hull(b.vertices(), x) < b.radius() - kDistanceTolerance;
  if (b.dim() == 1) {
    return b.vertices().minCoeff() + kDistanceTolerance < x(0) && x(0) < b.vertices().maxCoeff() - kDistanceTolerance;
  }
  // Interior of a polytope: x is in the hull, and a small push away from an
  // interior reference point stays in the hull.
  if (affine_rank(b.vertices()) < b.dim()) return false;
  if (!hull_contains(b.vertices(), x, 1e-12)) return false;
  const RealVector c = b.vertices().rowwise().mean();
  const RealVector pushed = x + 1e-6 * (x - c);
  return (x - c).norm() == 0 || hull_contains(b.vertices(), pushed, 1e-12);
}

bool contains_atom(const ConvexBody& b, const AtomGeometry& atom) {
  if (atom.dim() != b.dim()) throw DimensionMismatch(b.dim(), atom.dim());
  if (atom.shape == AtomShape::Dirac) return contains_open(b, atom.center);
  if (!contains_open(b, atom.center)) return false;
  const int d = atom.dim();
  for (int mask = 0; mask < (1 << d); ++mask) {
    RealVector corner = atom.center;
    for (int j = 0; j < d; ++j) corner(j) += (mask >> j & 1) ? atom.halfwidth(j) : -atom.halfwidth(j);
    if (distance_to_hull(b.vertices(), corner) > b.radius() + kDistanceTolerance) return false;
  }
  return true;
}

bool same_body(const ConvexBody& a, const ConvexBody& b) {
  if (a.dim() != b.dim() || std::abs(a.radius() - b.radius()) > kGeometryTolerance) return false;
  for (Eigen::Index i = 0; i < a.vertices().cols(); ++i)
    if (!hull_contains(b.vertices(), a.vertices().col(i))) return false;
  for (Eigen::Index i = 0; i < b.vertices().cols(); ++i)
    if (!hull_contains(a.vertices(), b.vertices().col(i))) return false;
  return true;
}

bool meets_lattice(const ConvexBody& b) {
  auto [lo, hi] = b.bounds();
  const int d = b.dim();
  std::vector<std::int64_t> first(d), last(d);
  double count = 1;
  for (int j = 0; j < d; ++j) {
    first[j] = static_cast<std::int64_t>(std::ceil(lo(j)));
    last[j] = static_cast<std::int64_t>(std::floor(hi(j)));
    if (last[j] < first[j]) return false;
    count *= static_cast<double>(last[j] - first[j] + 1);
  }
  if (count > 1e7) throw std::invalid_argument("meets_lattice: bounding box too large to scan");
  std::vector<std::int64_t> idx = first;
  RealVector x(d);
  while (true) {
    for (int j = 0; j < d; ++j) x(j) = static_cast<double>(idx[j]);
    if (contains_open(b, x)) return true;
    int j = d - 1;
    while (j >= 0 && ++idx[j] > last[j]) {
      idx[j] = first[j];
      --j;
    }
    if (j < 0) return false;
  }
}

Problem3Report check_problem3_geometry(const ConvexBody& D0, const ConvexBody& D, bool discrete) {
  Problem3Report r;
  r.R = distance(D, D0);
  r.diam = diameter(D);
  if (r.R <= kDistanceTolerance) {
    r.reason = "bodies touch or overlap (R = 0)";
  } else if (r.R >= r.diam - kDistanceTolerance) {
    r.reason = "uniqueness regime: dist(D, D0) >= diam(D)";
  } else {
    r.pass = true;
  }
  if (discrete) {
    r.lattice_ok = meets_lattice(D) && meets_lattice(D0);
    if (!*r.lattice_ok) {
      r.pass = false;
      if (r.reason.empty()) r.reason = "a body contains no lattice point";
    }
  }
  return r;
}

namespace {

bool contains_point(const std::vector<RealVector>& set, const RealVector& p) {
  return std::any_of(set.begin(), set.end(),
                     [&](const RealVector& q) { return (q - p).cwiseAbs().maxCoeff() <= kGeometryTolerance; });
}

}  // namespace

bool is_symmetric(const std::vector<RealVector>& taps) {
  return std::all_of(taps.begin(), taps.end(), [&](const RealVector& t) { return contains_point(taps, -t); });
}

std::vector<RealVector> remaining_offsets(const std::vector<RealVector>& taps, const RealVector& y_star) {
  if (!contains_point(taps, y_star)) throw std::invalid_argument("y_star is not a tap");
  if (!contains_point(taps, -y_star)) throw std::invalid_argument("y_star is not in -T");
  std::vector<RealVector> out;
  auto push = [&](const RealVector& p) {
    if ((p - y_star).cwiseAbs().maxCoeff() <= kGeometryTolerance) return;
    if (!contains_point(out, p)) out.push_back(p);
  };
  for (const auto& t : taps) push(t);
  for (const auto& t : taps) push(-t);
  if (out.empty()) throw std::invalid_argument("no remaining offsets: (T U -T) \\ {y_star} is empty");
  return out;
}

bool check_thm4_separation(const ConvexBody& B, const std::vector<RealVector>& taps, const RealVector& y_star) {
  const auto rest = remaining_offsets(taps, y_star);
  return distance(B.translated(y_star), hull_of_translates(B, rest)) > kDistanceTolerance;
}

Remark5Result check_remark5(const ConvexBody& B, const std::vector<RealVector>& taps, const RealVector& y_star) {
  Remark5Result r;
  if (!check_thm4_separation(B, taps, y_star)) {
    r.note = "separation precondition fails";
    return r;
  }
  if (is_symmetric(taps)) {
    r.note = "T = -T: inapplicable";
    return r;
  }
  r.applicable = true;
  const auto rest = remaining_offsets(taps, y_star);
  Eigen::MatrixXd v(B.dim(), static_cast<Eigen::Index>(rest.size()));
  for (std::size_t k = 0; k < rest.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = rest[k];
  r.y_star_outside_hull = !hull_contains(v, y_star);
  r.holds = r.y_star_outside_hull;
  r.note = r.holds ? "T != -T + z for every z" : "y_star lies in the hull of the remaining offsets";
  return r;
}

std::vector<RealVector> to_real(const std::vector<LatticePoint>& points) {
  std::vector<RealVector> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(to_real(p));
  return out;
}

}  // namespace forge
