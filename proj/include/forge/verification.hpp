#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "forge/bundle.hpp"

namespace forge {

class UnknownClaimKind : public std::invalid_argument {
 public:
  explicit UnknownClaimKind(const std::string& kind) : std::invalid_argument("unknown claim kind '" + kind + "'") {}
};

struct ClaimResult {
  std::string name;
  std::string kind;
  std::string verifier;
  std::string role;
  bool expected = true;
  bool observed = false;
  bool pass = false;
  ordered_json certificate = ordered_json::object();
};

struct VerificationReport {
  std::string construction;
  std::string mode;
  std::string arithmetic;
  std::vector<ClaimResult> claims;
  bool pass = false;
  double seconds = 0;

  const ClaimResult* find(const std::string& name) const {
    for (const auto& c : claims)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Decides every claim of the bundle. Malformed claims (missing members,
/// wrong argument types) throw std::invalid_argument; a claim whose
/// decision throws a domain error is recorded as failed with the message.
template <typename Scalar>
VerificationReport run_claims(const Bundle<Scalar>& bundle);

VerificationReport run_claims(const AnyBundle& bundle);

/// Stable field order; `timing` adds the wall-clock seconds.
ordered_json to_json(const VerificationReport& report, bool timing = false);

}  // namespace forge
