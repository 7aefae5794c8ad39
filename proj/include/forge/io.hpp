#pragma once

// JSON formats.
//   signal:   {"dim": d, "entries": [{"x": [ints], "re": v, "im": v}]}
//   stencil:  {"dim": d, "taps":    [{"x": [ints], "re": v, "im": v}]}
//   continuous signal: {"dim": d, "atoms": [{"coef": {"re", "im"}, "center": [..], "halfwidth": [..]}]}
//                      "halfwidth": null marks a point mass; "overlap": true declares overlapping atoms
//   continuous stencil: {"dim": d, "offsets": [{"y": [reals], "coef": {"re", "im"}}]}
//   body:     {"dim": d, "vertices": [[..], ..], "radius": r}
// Values are JSON numbers in floating mode and "p/q" strings in exact mode.

#include <iosfwd>
#include <string>

#include "forge/bundle.hpp"

namespace forge {

ordered_json scalar_to_json(const Complex& z);
ordered_json scalar_to_json(const GaussianRational& z);

/// Reads {"re": .., "im": ..}; numbers or rational strings.
template <typename Scalar>
Scalar scalar_from_json(const ordered_json& j);

/// True when every "re"/"im" value below `j` is an integer or a rational string.
bool json_is_exact(const ordered_json& j);

ordered_json point_to_json(const LatticePoint& p);
LatticePoint point_from_json(const ordered_json& j, int dim);
ordered_json vector_to_json(const RealVector& v);
RealVector vector_from_json(const ordered_json& j, int dim);

template <typename Scalar>
ordered_json to_json(const LatticeSignal<Scalar>& w);
template <typename Scalar>
ordered_json to_json(const Stencil<Scalar>& s);
template <typename Scalar>
ordered_json to_json(const ContinuousSignal<Scalar>& w);
template <typename Scalar>
ordered_json to_json(const ContinuousStencil<Scalar>& s);
ordered_json to_json(const ConvexBody& b);
ordered_json to_json(const Claim& c);

template <typename Scalar>
LatticeSignal<Scalar> lattice_signal_from_json(const ordered_json& j);
template <typename Scalar>
Stencil<Scalar> stencil_from_json(const ordered_json& j);
template <typename Scalar>
ContinuousSignal<Scalar> continuous_signal_from_json(const ordered_json& j);
template <typename Scalar>
ContinuousStencil<Scalar> continuous_stencil_from_json(const ordered_json& j);
ConvexBody body_from_json(const ordered_json& j);
Claim claim_from_json(const ordered_json& j);

/// Signal files of either kind ("entries" vs "atoms").
template <typename Scalar>
AnySignal<Scalar> signal_from_json(const ordered_json& j);
/// Stencil files of either kind ("taps" vs "offsets").
template <typename Scalar>
AnyStencil<Scalar> any_stencil_from_json(const ordered_json& j);

/// {"construction", "mode", "arithmetic", "parameters", "pair", "triple",
///  "stencils", "signals", "bodies", "claims"}
template <typename Scalar>
ordered_json to_json(const Bundle<Scalar>& b);
AnyBundle bundle_from_json(const ordered_json& j);

/// Reads a file, "-" for stdin, or an inline document starting with '{'.
ordered_json read_json_source(const std::string& source);

}  // namespace forge
