#pragma once

// Builders for the finite-difference ambiguity constructions. Each builder
// validates its premises, refusing (never repairing) bad input, and emits a
// Bundle holding the constructed signals plus the claims they satisfy.
//
//   f = A psi, g = A* psi          Fourier-magnitude partners
//   + symmetric taps, |a_y| = |a_-y|, disjoint translates   -> |f| = |g| too
//   + a separated tap y*           -> background (holography) ambiguities

#include <optional>
#include <stdexcept>
#include <string>

#include "forge/bundle.hpp"

namespace forge {

enum class Provenance { Thm1, Thm2, Ex1, Ex2 };

const char* to_string(Provenance p);

template <typename Signal, typename Operator>
struct ConstructionPair {
  Provenance provenance;
  Operator stencil;
  Signal psi;
  Signal f;
  Signal g;
};

template <typename Signal>
struct BackgroundTriple {
  Signal w0;
  Signal w1;
  Signal w2;
  ConvexBody D0;
  ConvexBody D;
  std::optional<typename Signal::scalar_type> phase;
};

/// A premise of a construction does not hold. `condition` is a stable
/// identifier, `statement` the premise in mathematical form.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(std::string condition, std::string statement, const std::string& detail = "")
      : std::invalid_argument(condition + ": " + statement + (detail.empty() ? "" : " (" + detail + ")")),
        condition_(std::move(condition)),
        statement_(std::move(statement)) {}

  const std::string& condition() const noexcept { return condition_; }
  const std::string& statement() const noexcept { return statement_; }

 private:
  std::string condition_;
  std::string statement_;
};

namespace conditions {
// identifiers used in PreconditionError::condition()
inline constexpr const char* kSigmaNotSelfAssociated = "sigma-not-self-conj-associated";
inline constexpr const char* kPsiNotSelfAssociated = "psi-not-self-conj-associated";
inline constexpr const char* kPsiNonzero = "psi-nonzero";
inline constexpr const char* kTapsSymmetric = "taps-symmetric";
inline constexpr const char* kTapModulusSymmetric = "tap-modulus-symmetric";
inline constexpr const char* kNoGlobalConjugatePhase = "no-global-conjugate-phase";
inline constexpr const char* kTranslatesDisjoint = "translates-disjoint";
inline constexpr const char* kExample1Premises = "example1-premises";
inline constexpr const char* kExample2Coefficients = "example2-coefficients";
inline constexpr const char* kExample2Support = "example2-support-in-ball";
inline constexpr const char* kExample2NestedPsi = "example2-nested-psi";
inline constexpr const char* kBackgroundSupports = "background-supports";
inline constexpr const char* kSymmetricReference = "reference-domain-symmetric";
inline constexpr const char* kDomainsSeparated = "domains-separated";
inline constexpr const char* kPhiNotSelfReflected = "phi-not-self-reflected";
inline constexpr const char* kSeparatedTap = "separated-tap";
inline constexpr const char* kSeparatedTapPhase = "separated-tap-phase";
inline constexpr const char* kAtomsDisjoint = "atoms-disjoint";
}  // namespace conditions

// ---------------------------------------------------------------------------
// Pairs

/// f = A psi, g = A* psi without premise checks.
template <typename Scalar>
ConstructionPair<LatticeSignal<Scalar>, Stencil<Scalar>> make_pair(Provenance p, const Stencil<Scalar>& A,
                                                                   const LatticeSignal<Scalar>& psi);
template <typename Scalar>
ConstructionPair<ContinuousSignal<Scalar>, ContinuousStencil<Scalar>> make_pair(Provenance p,
                                                                                const ContinuousStencil<Scalar>& A,
                                                                                const ContinuousSignal<Scalar>& psi);

/// Bundle with the claims of the given provenance but no premise checks;
/// used for negative controls.
template <typename Scalar>
Bundle<Scalar> unchecked_pair_bundle(Provenance p, const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi);

template <typename Scalar>
Bundle<Scalar> theorem1_pair(const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi);
template <typename Scalar>
Bundle<Scalar> theorem1_pair(const ContinuousStencil<Scalar>& A, const ContinuousSignal<Scalar>& psi);

template <typename Scalar>
Bundle<Scalar> theorem2_pauli_pair(const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi);
template <typename Scalar>
Bundle<Scalar> theorem2_pauli_pair(const ContinuousStencil<Scalar>& A, const ContinuousSignal<Scalar>& psi);

/// sigma = a1 delta(x) + a2 delta(x + y); psi = b1 chi_r(x) + b2 chi_r(x - z).
/// chi_r is the indicator of |x| < r: lattice points in discrete mode, an
/// interval (a box for d >= 2) in continuous mode.
template <typename Scalar>
struct Example1Params {
  Scalar a1, a2, b1, b2;
  RealVector y, z;
  double r = 1.0;
  Mode mode = Mode::Discrete;
};

template <typename Scalar>
Bundle<Scalar> example1(const Example1Params<Scalar>& p);

/// Two-bump psi of the first example, used as the default psi here.
template <typename Scalar>
struct TwoBumpPsi {
  Scalar b1, b2;
  RealVector z;
  double r;
};

/// sigma = a1 delta(x) + a2 delta(x + y) + a2 e^{i phi} delta(x - y), with
/// psi supported in the ball B_rho(center), 0 < rho < |y| / 2.
template <typename Scalar>
struct Example2Params {
  Scalar a1, a2;
  Scalar phase = Scalar(1);  // e^{i phi}
  RealVector y;
  double rho = 0;
  RealVector center;
  Mode mode = Mode::Discrete;
  std::optional<LatticeSignal<Scalar>> psi;  // discrete only; overrides two_bump
  std::optional<TwoBumpPsi<Scalar>> two_bump;
};

template <typename Scalar>
Bundle<Scalar> example2(const Example2Params<Scalar>& p);

// ---------------------------------------------------------------------------
// Background triples

template <typename Scalar>
Bundle<Scalar> theorem3_background(const LatticeSignal<Scalar>& psi, const LatticeSignal<Scalar>& phi,
                                   const ConvexBody& U0, const ConvexBody& U1);

/// Require: the sigma condition must hold (checked directly, with the
/// symmetric-taps certificate accepted as well). Drop: the condition is not
/// assumed and the non-associatedness claim is left out.
enum class SigmaCondition { Require, Drop };

template <typename Scalar>
Bundle<Scalar> theorem4_background(const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi, const ConvexBody& B,
                                   const LatticePoint& y_star, std::optional<Scalar> phase,
                                   SigmaCondition sigma = SigmaCondition::Require);

/// Certificate for the sigma condition from T = -T, a_{-y*} = e^{i phi}
/// conj(a_{y*}) and a_{-y} != e^{i phi} conj(a_y) for some y.
template <typename Scalar>
bool symmetric_taps_certificate(const Stencil<Scalar>& A, const LatticePoint& y_star, const Scalar& phase);

// ---------------------------------------------------------------------------
// Views

template <typename Scalar>
ConstructionPair<LatticeSignal<Scalar>, Stencil<Scalar>> lattice_pair(const Bundle<Scalar>& b);

template <typename Scalar>
BackgroundTriple<LatticeSignal<Scalar>> lattice_triple(const Bundle<Scalar>& b);

/// Claims of the two pair theorems for signals of dimension `dim`.
ClaimList theorem1_claims(Mode mode, int dim);
ClaimList theorem2_claims(Mode mode, int dim);

/// Samples per axis for continuous magnitude claims (about 4096 in total).
int continuous_grid(int dim);

}  // namespace forge
