#include "forge/verification.hpp"

#include <chrono>

#include "forge/constructions.hpp"
#include "forge/io.hpp"
#include "forge/premises.hpp"

namespace forge {

namespace {

class MalformedClaim : public std::invalid_argument {
 public:
  MalformedClaim(const Claim& c, const std::string& what)
      : std::invalid_argument("claim '" + c.name + "': " + what) {}
};

ordered_json witness_json(AssociationKind kind, const ordered_json& phase, double alpha, const ordered_json& shift) {
  ordered_json j;
  j["kind"] = to_string(kind);
  j["phase"] = phase;
  j["alpha"] = alpha;
  j["shift"] = shift;
  return j;
}

template <typename Scalar>
ordered_json witness_json(const AssociationWitness<Scalar>& w) {
  return witness_json(w.kind, scalar_to_json(w.phase), w.alpha(), point_to_json(w.shift));
}

template <typename Scalar>
ordered_json witness_json(const ContinuousWitness<Scalar>& w) {
  return witness_json(w.kind, scalar_to_json(w.phase), w.alpha(), vector_to_json(w.shift));
}

RealVector shift_vector(const LatticePoint& p) { return to_real(p); }
RealVector shift_vector(const RealVector& v) { return v; }

template <typename Scalar>
class ClaimRunner {
 public:
  using Lattice = LatticeSignal<Scalar>;
  using Atoms = ContinuousSignal<Scalar>;

  ClaimRunner(const Bundle<Scalar>& b, const Claim& c, ClaimResult& r) : b_(b), c_(c), r_(r) {}

  bool decide() {
    const std::string& k = c_.kind;
    if (k == "self_conj_associated") return self_conj_associated();
    if (k == "taps_symmetric") return on_stencil(0, [](const auto& A) { return taps_symmetric(A); });
    if (k == "tap_modulus_symmetric") return on_stencil(0, [](const auto& A) { return tap_modulus_symmetric(A); });
    if (k == "global_conjugate_phase") return global_phase();
    if (k == "translates_disjoint") return disjoint_translates();
    if (k == "stencil_action") return stencil_action();
    if (k == "finite_support") return finite_support();
    if (k == "fourier_magnitude_equal") return magnitude_equal();
    if (k == "association") return association();
    if (k == "pointwise_modulus_equal")
      return on_pair(0, 1, [](const auto& f, const auto& g) { return pointwise_modulus_equal(f, g); });
    if (k == "signal_equal") return signal_equal();
    if (k == "support_within") return support();
    if (k == "support_in_translates") return support_in_translates();
    if (k == "problem3_geometry") return problem3();
    if (k == "distance_equals") return distance_equals();
    if (k == "sum_equal") return sum_equal();
    if (k == "nonzero") return on_signal(0, [](const auto& w) { return !w.empty(); });
    if (k == "distinct") return on_pair(0, 1, [](const auto& f, const auto& g) { return !approx_equal(f, g); });
    if (k == "thm4_separation") return separation();
    if (k == "masking") return masking();
    throw UnknownClaimKind(k);
  }

 private:
  const Bundle<Scalar>& b_;
  const Claim& c_;
  ClaimResult& r_;

  const std::string& arg(std::size_t i) const {
    if (i >= c_.args.size()) throw MalformedClaim(c_, "expects at least " + std::to_string(i + 1) + " arguments");
    return c_.args[i];
  }

  const AnySignal<Scalar>& signal(std::size_t i) const {
    auto it = b_.signals.find(arg(i));
    if (it == b_.signals.end()) throw MalformedClaim(c_, "bundle has no signal '" + arg(i) + "'");
    return it->second;
  }

  const AnyStencil<Scalar>& stencil(std::size_t i) const {
    auto it = b_.stencils.find(arg(i));
    if (it == b_.stencils.end()) throw MalformedClaim(c_, "bundle has no stencil '" + arg(i) + "'");
    return it->second;
  }

  const ConvexBody& body(std::size_t i) const {
    auto it = b_.bodies.find(arg(i));
    if (it == b_.bodies.end()) throw MalformedClaim(c_, "bundle has no body '" + arg(i) + "'");
    return it->second;
  }

  Scalar scale() const {
    return c_.params.contains("scale_a") ? scalar_from_json<Scalar>(c_.params.at("scale_a")) : Scalar(1);
  }

  template <typename F>
  bool on_signal(std::size_t i, F&& f) {
    return std::visit(f, signal(i));
  }

  template <typename F>
  bool on_stencil(std::size_t i, F&& f) {
    return std::visit(f, stencil(i));
  }

  template <typename F>
  bool on_pair(std::size_t i, std::size_t j, F&& f) {
    return std::visit(
        [&](const auto& a, const auto& b) -> bool {
          if constexpr (std::is_same_v<std::decay_t<decltype(a)>, std::decay_t<decltype(b)>>)
            return f(a, b);
          else
            throw MalformedClaim(c_, "arguments mix lattice and continuous signals");
        },
        signal(i), signal(j));
  }

  /// Stencil with a signal of the matching mode.
  template <typename F>
  bool on_operator(std::size_t i, std::size_t j, F&& f) {
    return std::visit(
        [&](const auto& A, const auto& w) -> bool {
          using Op = std::decay_t<decltype(A)>;
          using Sig = std::decay_t<decltype(w)>;
          constexpr bool lattice = std::is_same_v<Op, Stencil<Scalar>> && std::is_same_v<Sig, Lattice>;
          constexpr bool atoms = std::is_same_v<Op, ContinuousStencil<Scalar>> && std::is_same_v<Sig, Atoms>;
          if constexpr (lattice || atoms)
            return f(A, w);
          else
            throw MalformedClaim(c_, "stencil and signal modes differ");
        },
        stencil(i), signal(j));
  }

  bool self_conj_associated() {
    auto check = [&](const auto& w) {
      auto found = find_association(w, w, AssociationKind::ConjReflect);
      if (found) r_.certificate["witness"] = witness_json(*found);
      r_.certificate["support_size"] = w.size();
      return found.has_value();
    };
    if (b_.stencils.count(arg(0))) {
      r_.certificate["object"] = "sigma";
      return on_stencil(0, [&](const auto& A) { return check(sigma_signal(A)); });
    }
    return on_signal(0, check);
  }

  bool global_phase() {
    return on_stencil(0, [&](const auto& A) {
      auto u = global_conjugate_phase(A);
      if (u) {
        r_.certificate["phase"] = scalar_to_json(*u);
        r_.certificate["alpha"] = phase_angle(to_complex(*u));
      }
      return u.has_value();
    });
  }

  bool disjoint_translates() {
    return on_operator(0, 1, [](const auto& A, const auto& psi) { return translates_disjoint(A, psi); });
  }

  bool stencil_action() {
    return std::visit(
        [&](const auto& A) {
          using Op = std::decay_t<decltype(A)>;
          using Sig = std::conditional_t<std::is_same_v<Op, Stencil<Scalar>>, Lattice, Atoms>;
          const auto* psi = std::get_if<Sig>(&signal(1));
          const auto* f = std::get_if<Sig>(&signal(2));
          const auto* g = std::get_if<Sig>(&signal(3));
          if (!psi || !f || !g) throw MalformedClaim(c_, "stencil and signal modes differ");
          Sig f2(psi->dim()), g2(psi->dim());
          if constexpr (std::is_same_v<Sig, Lattice>) {
            f2 = apply_stencil(A, *psi);
            g2 = apply_adjoint(A, *psi);
          } else {
            f2 = apply_continuous(A, *psi);
            g2 = apply_continuous_adjoint(A, *psi);
          }
          const bool ok_f = approx_equal(*f, f2), ok_g = approx_equal(*g, g2);
          r_.certificate["f_reproduced"] = ok_f;
          r_.certificate["g_reproduced"] = ok_g;
          return ok_f && ok_g;
        },
        stencil(0));
  }

  bool finite_support() {
    return on_pair(0, 1, [&](const auto& f, const auto& g) {
      r_.certificate["support_sizes"] = {f.size(), g.size()};
      return !f.empty() && !g.empty();
    });
  }

  bool magnitude_equal() {
    return on_pair(0, 1, [&](const auto& f, const auto& g) {
      using Sig = std::decay_t<decltype(f)>;
      if constexpr (std::is_same_v<Sig, Lattice>) {
        const auto cmp = compare_fourier_magnitude(f, g);
        r_.certificate["route"] = "autocorrelation";
        r_.certificate["lags"] = autocorrelation(f).size();
        r_.certificate["lag"] = point_to_json(cmp.lag);
        r_.certificate["lhs"] = scalar_to_json(cmp.lhs);
        r_.certificate["rhs"] = scalar_to_json(cmp.rhs);
        return cmp.equal;
      } else {
        const int grid = c_.params.value("grid", continuous_grid(f.dim()));
        const auto s = sampled_magnitude_equal(f, g, grid);
        r_.certificate["route"] = "sampled";
        r_.certificate["grid"] = grid;
        r_.certificate["samples"] = s.samples;
        r_.certificate["span"] = s.span;
        r_.certificate["max_deviation"] = s.max_deviation;
        r_.certificate["peak"] = s.peak;
        if (f.is_delta_train() && g.is_delta_train()) {
          try {
            r_.certificate["lattice_route_equal"] = equal_fourier_magnitude(lattice_reduce(f), lattice_reduce(g));
          } catch (const std::invalid_argument&) {
            // point masses off the lattice: the sampled route is the only one
          }
        }
        return s.equal;
      }
    });
  }

  bool association() {
    return on_pair(0, 1, [&](const auto& f, const auto& g) {
      auto found = find_association(f, g);
      if (!found) return false;
      r_.certificate["witness"] = witness_json(*found);
      if (c_.params.contains("witness")) {
        const auto& want = c_.params.at("witness");
        bool match = want.value("kind", std::string()) == to_string(found->kind);
        if (want.contains("phase")) match = match && nearly_equal(found->phase, scalar_from_json<Scalar>(want.at("phase")));
        if (want.contains("shift")) {
          const RealVector s = vector_from_json(want.at("shift"), f.dim());
          match = match && (shift_vector(found->shift) - s).cwiseAbs().maxCoeff() <= kGeometryTolerance;
        }
        r_.certificate["witness_matches"] = match;
      }
      return true;
    });
  }

  bool signal_equal() {
    const Scalar a = scale();
    return on_pair(0, 1, [&](const auto& f, const auto& g) { return approx_equal(scaled(f, a), g); });
  }

  bool support() {
    const ConvexBody& D = body(1);
    return on_signal(0, [&](const auto& w) { return support_within(w, D); });
  }

  /// supp w inside the union of the open translates B + sign * y over taps y.
  bool support_in_translates() {
    const ConvexBody& B = body(1);
    const double sign = c_.params.value("sign", -1.0);
    std::vector<ConvexBody> pieces;
    std::visit(
        [&](const auto& A) {
          for (const auto& y : tap_offsets(A)) pieces.push_back(B.translated(RealVector(sign * y)));
        },
        stencil(2));
    return on_signal(0, [&](const auto& w) {
      using Sig = std::decay_t<decltype(w)>;
      if constexpr (std::is_same_v<Sig, Lattice>) {
        for (const auto& [x, v] : w) {
          const RealVector p = to_real(x);
          if (std::none_of(pieces.begin(), pieces.end(), [&](const ConvexBody& P) { return contains_open(P, p); }))
            return false;
        }
      } else {
        for (const auto& a : w.atoms())
          if (std::none_of(pieces.begin(), pieces.end(),
                           [&](const ConvexBody& P) { return contains_atom(P, a.geometry); }))
            return false;
      }
      return true;
    });
  }

  bool problem3() {
    const auto rep = check_problem3_geometry(body(0), body(1), c_.params.value("discrete", false));
    r_.certificate["R"] = rep.R;
    r_.certificate["diam"] = rep.diam;
    r_.certificate["reason"] = rep.reason;
    if (rep.lattice_ok) r_.certificate["lattice_ok"] = *rep.lattice_ok;
    return rep.pass;
  }

  bool distance_equals() {
    if (!c_.params.contains("value")) throw MalformedClaim(c_, "missing params.value");
    const double want = c_.params.at("value").get<double>();
    const double tol = c_.params.value("tolerance", kDistanceTolerance);
    const double got = distance(body(0), body(1));
    r_.certificate["distance"] = got;
    r_.certificate["value"] = want;
    r_.certificate["deviation"] = std::abs(got - want);
    return std::abs(got - want) <= tol;
  }

  bool sum_equal() {
    return on_pair(0, 1, [&](const auto& a, const auto& b) {
      using Sig = std::decay_t<decltype(a)>;
      const auto* c = std::get_if<Sig>(&signal(2));
      if (!c) throw MalformedClaim(c_, "arguments mix lattice and continuous signals");
      return approx_equal(a + b, *c);
    });
  }

  bool separation() {
    const ConvexBody& B = body(0);
    if (!c_.params.contains("y_star")) throw MalformedClaim(c_, "missing params.y_star");
    const RealVector y_star = vector_from_json(c_.params.at("y_star"), B.dim());
    const auto taps = std::visit([](const auto& A) { return tap_offsets(A); }, stencil(1));
    const bool ok = check_thm4_separation(B, taps, y_star);
    const auto r5 = check_remark5(B, taps, y_star);
    r_.certificate["gap"] = distance(B.translated(y_star), hull_of_translates(B, remaining_offsets(taps, y_star)));
    r_.certificate["remark5_applicable"] = r5.applicable;
    if (r5.applicable) r_.certificate["taps_not_shifted_reflection"] = r5.holds;
    if (!r5.note.empty()) r_.certificate["remark5_note"] = r5.note;
    return ok;
  }

  /// scale * arg0 restricted to the open body equals arg2.
  bool masking() {
    const ConvexBody& D0 = body(1);
    const Scalar a = scale();
    return on_pair(0, 2, [&](const auto& f, const auto& w0) {
      using Sig = std::decay_t<decltype(f)>;
      Sig masked(f.dim());
      if constexpr (std::is_same_v<Sig, Lattice>) {
        for (const auto& [x, v] : f)
          if (contains_open(D0, to_real(x))) masked.set(x, a * v);
      } else {
        for (const auto& at : f.atoms())
          if (contains_atom(D0, at.geometry)) masked.add(at.geometry, a * at.coef);
      }
      r_.certificate["masked_size"] = masked.size();
      return approx_equal(masked, w0);
    });
  }
};

}  // namespace

template <typename Scalar>
VerificationReport run_claims(const Bundle<Scalar>& bundle) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.construction = bundle.construction;
  rep.mode = to_string(bundle.mode);
  rep.arithmetic = ScalarTraits<Scalar>::name;
  rep.pass = true;
  for (const auto& c : bundle.claims) {
    ClaimResult r;
    r.name = c.name;
    r.kind = c.kind;
    r.verifier = c.verifier;
    r.role = c.params.value("role", std::string());
    r.expected = c.expected;
    try {
      r.observed = ClaimRunner<Scalar>(bundle, c, r).decide();
      r.pass = r.observed == r.expected && r.certificate.value("witness_matches", true);
    } catch (const MalformedClaim&) {
      throw;
    } catch (const UnknownClaimKind&) {
      throw;
    } catch (const std::exception& e) {
      r.observed = false;
      r.pass = false;
      r.certificate["error"] = e.what();
    }
    rep.pass = rep.pass && r.pass;
    rep.claims.push_back(std::move(r));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

VerificationReport run_claims(const AnyBundle& bundle) {
  return std::visit([](const auto& b) { return run_claims(b); }, bundle);
}

ordered_json to_json(const VerificationReport& report, bool timing) {
  ordered_json j;
  j["construction"] = report.construction;
  j["mode"] = report.mode;
  j["arithmetic"] = report.arithmetic;
  j["pass"] = report.pass;
  j["claims"] = ordered_json::array();
  for (const auto& c : report.claims) {
    ordered_json e;
    e["name"] = c.name;
    e["kind"] = c.kind;
    e["role"] = c.role;
    e["verifier"] = c.verifier;
    e["expected"] = c.expected;
    e["observed"] = c.observed;
    e["pass"] = c.pass;
    e["certificate"] = c.certificate;
    j["claims"].push_back(std::move(e));
  }
  if (timing) j["seconds"] = report.seconds;
  return j;
}

template VerificationReport run_claims(const Bundle<Complex>&);
template VerificationReport run_claims(const Bundle<GaussianRational>&);

}  // namespace forge
