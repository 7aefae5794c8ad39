#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "forge/continuous.hpp"
#include "forge/geometry.hpp"
#include "forge/lattice.hpp"

namespace forge {

using ordered_json = nlohmann::ordered_json;

enum class Mode { Discrete, Continuous };

inline const char* to_string(Mode m) { return m == Mode::Discrete ? "discrete" : "continuous"; }

/// One machine-checkable statement about the signals in a bundle.
struct Claim {
  std::string name;
  std::string kind;                // dispatch key for the verifier
  std::vector<std::string> args;   // names of bundle members
  bool expected = true;
  std::string verifier;            // module::operation that decides it
  ordered_json params = ordered_json::object();
};

using ClaimList = std::vector<Claim>;

template <typename Scalar>
using AnySignal = std::variant<LatticeSignal<Scalar>, ContinuousSignal<Scalar>>;

template <typename Scalar>
using AnyStencil = std::variant<Stencil<Scalar>, ContinuousStencil<Scalar>>;

/// Output of a builder: the constructed objects, the inputs that
/// reproduce them, and the claims they are expected to satisfy.
template <typename Scalar>
struct Bundle {
  std::string construction;
  Mode mode = Mode::Discrete;
  ordered_json parameters = ordered_json::object();
  std::map<std::string, AnyStencil<Scalar>> stencils;
  std::map<std::string, AnySignal<Scalar>> signals;
  std::map<std::string, ConvexBody> bodies;
  ClaimList claims;

  template <typename Signal>
  const Signal& signal(const std::string& name) const {
    auto it = signals.find(name);
    if (it == signals.end()) throw std::out_of_range("bundle has no signal '" + name + "'");
    const Signal* s = std::get_if<Signal>(&it->second);
    if (!s) throw std::invalid_argument("signal '" + name + "' has the wrong mode");
    return *s;
  }

  const LatticeSignal<Scalar>& lattice(const std::string& name) const { return signal<LatticeSignal<Scalar>>(name); }
  const ContinuousSignal<Scalar>& continuous(const std::string& name) const {
    return signal<ContinuousSignal<Scalar>>(name);
  }

  const ConvexBody& body(const std::string& name) const {
    auto it = bodies.find(name);
    if (it == bodies.end()) throw std::out_of_range("bundle has no body '" + name + "'");
    return it->second;
  }

  template <typename Signal>
  void put(const std::string& name, Signal s) {
    signals.insert_or_assign(name, AnySignal<Scalar>(std::move(s)));
  }

  bool has_claim(const std::string& name) const {
    for (const auto& c : claims)
      if (c.name == name) return true;
    return false;
  }
};

using AnyBundle = std::variant<Bundle<Complex>, Bundle<GaussianRational>>;

}  // namespace forge
