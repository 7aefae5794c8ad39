#pragma once

// Tap-set and support predicates shared by the builders (which refuse
// inputs that fail them) and the verifier (which re-checks them).

#include <optional>
#include <set>
#include <vector>

#include "forge/continuous.hpp"
#include "forge/geometry.hpp"
#include "forge/lattice.hpp"

namespace forge {

inline std::optional<LatticePoint> as_lattice_point(const RealVector& y) {
  const RealVector r = y.array().round().matrix();
  if ((r - y).cwiseAbs().maxCoeff() > kGeometryTolerance) return std::nullopt;
  return r.cast<std::int64_t>();
}

template <typename Scalar>
std::optional<Scalar> coefficient_at(const Stencil<Scalar>& A, const RealVector& y) {
  auto p = as_lattice_point(y);
  if (!p || !A.contains(*p)) return std::nullopt;
  return A.at(*p);
}

template <typename Scalar>
std::optional<Scalar> coefficient_at(const ContinuousStencil<Scalar>& A, const RealVector& y) {
  const Scalar* c = A.coefficient(y);
  if (!c) return std::nullopt;
  return *c;
}

template <typename Scalar>
std::vector<std::pair<RealVector, Scalar>> tap_list(const Stencil<Scalar>& A) {
  std::vector<std::pair<RealVector, Scalar>> out;
  for (const auto& [y, a] : A) out.emplace_back(to_real(y), a);
  return out;
}

template <typename Scalar>
std::vector<std::pair<RealVector, Scalar>> tap_list(const ContinuousStencil<Scalar>& A) {
  return A.taps();
}

template <typename Op>
std::vector<RealVector> tap_offsets(const Op& A) {
  std::vector<RealVector> out;
  for (const auto& [y, a] : tap_list(A)) out.push_back(y);
  return out;
}

template <typename Op>
bool taps_symmetric(const Op& A) {
  return is_symmetric(tap_offsets(A));
}

/// |a_y| == |a_{-y}| for every tap (requires T = -T).
template <typename Op>
bool tap_modulus_symmetric(const Op& A) {
  for (const auto& [y, a] : tap_list(A)) {
    auto mirror = coefficient_at(A, RealVector(-y));
    if (!mirror || !equal_modulus(a, *mirror)) return false;
  }
  return true;
}

/// The unit u with a_y = u conj(a_{-y}) for every y, if one exists.
template <typename Op>
auto global_conjugate_phase(const Op& A) -> std::optional<typename Op::scalar_type> {
  using Scalar = typename Op::scalar_type;
  const auto taps = tap_list(A);
  std::optional<Scalar> u;
  for (const auto& [y, a] : taps) {
    auto mirror = coefficient_at(A, RealVector(-y));
    if (!mirror) return std::nullopt;
    if (!u) {
      u = a / conj(*mirror);
      if (!is_unit(*u)) return std::nullopt;
    }
    if (!nearly_equal(a, Scalar(*u * conj(*mirror)))) return std::nullopt;
  }
  return u;
}

/// (supp psi - y_i) and (supp psi - y_j) are disjoint for distinct taps.
template <typename Scalar>
bool translates_disjoint(const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi) {
  std::set<LatticePoint, LexLess> diffs;
  for (const auto& [x1, v1] : psi)
    for (const auto& [x2, v2] : psi) diffs.insert(x1 - x2);
  for (const auto& [yi, ai] : A)
    for (const auto& [yj, aj] : A)
      if (LexLess{}(yi, yj) && diffs.count(yi - yj)) return false;
  return true;
}

template <typename Scalar>
bool translates_disjoint(const ContinuousStencil<Scalar>& A, const ContinuousSignal<Scalar>& psi) {
  const auto& taps = A.taps();
  for (std::size_t i = 0; i < taps.size(); ++i)
    for (std::size_t j = i + 1; j < taps.size(); ++j)
      for (const auto& p : psi.atoms())
        for (const auto& q : psi.atoms())
          if (!closures_disjoint(p.geometry.translated(-taps[i].first), q.geometry.translated(-taps[j].first)))
            return false;
  return true;
}

template <typename Scalar>
bool sigma_self_conj_associated(const Stencil<Scalar>& A) {
  return is_self_conj_associated(sigma_signal(A));
}

template <typename Scalar>
bool sigma_self_conj_associated(const ContinuousStencil<Scalar>& A) {
  return is_self_conj_associated(sigma_signal(A));
}

}  // namespace forge
