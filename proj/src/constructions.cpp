#include "forge/constructions.hpp"

#include <cmath>

#include "forge/io.hpp"
#include "forge/premises.hpp"

namespace forge {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Thm1: return "thm1";
    case Provenance::Thm2: return "thm2";
    case Provenance::Ex1: return "example1";
    case Provenance::Ex2: return "example2";
  }
  return "?";
}

int continuous_grid(int dim) {
  switch (dim) {
    case 1: return 4096;
    case 2: return 64;
    case 3: return 16;
    default: return 8;
  }
}

namespace {

const char* module_of(Mode m) { return m == Mode::Discrete ? "lattice_core" : "continuous_model"; }

Claim make_claim(std::string name, std::string kind, std::vector<std::string> args, bool expected, std::string verifier,
                 const char* role, ordered_json params = ordered_json::object()) {
  params["role"] = role;
  return Claim{std::move(name), std::move(kind), std::move(args), expected, std::move(verifier), std::move(params)};
}

constexpr const char* kPremise = "premise";
constexpr const char* kConclusion = "conclusion";

ClaimList pair_claims(Mode mode, int dim, bool pauli) {
  const std::string mod = module_of(mode);
  ClaimList c;
  c.push_back(make_claim("psi_not_self_associated", "self_conj_associated", {"psi"}, false,
                         mod + "::is_self_conj_associated", kPremise));
  c.push_back(make_claim("sigma_not_self_associated", "self_conj_associated", {"A"}, false,
                         mod + "::is_self_conj_associated", kPremise));
  if (pauli) {
    c.push_back(make_claim("taps_symmetric", "taps_symmetric", {"A"}, true, "geometry::is_symmetric", kPremise));
    c.push_back(make_claim("tap_modulus_symmetric", "tap_modulus_symmetric", {"A"}, true,
                           "constructions::tap_modulus_symmetric", kPremise));
    c.push_back(make_claim("no_global_conjugate_phase", "global_conjugate_phase", {"A"}, false,
                           "constructions::global_conjugate_phase", kPremise));
    c.push_back(make_claim("translates_disjoint", "translates_disjoint", {"A", "psi"}, true,
                           "constructions::translates_disjoint", kPremise));
  }
  c.push_back(make_claim("stencil_action", "stencil_action", {"A", "psi", "f", "g"}, true,
                         mode == Mode::Discrete ? "lattice_core::apply_stencil" : "continuous_model::apply_continuous",
                         kConclusion));
  c.push_back(make_claim("finite_support", "finite_support", {"f", "g"}, true, mod + "::support", kConclusion));
  ordered_json mag = ordered_json::object();
  if (mode == Mode::Continuous) mag["grid"] = continuous_grid(dim);
  c.push_back(make_claim("fourier_magnitude_equal", "fourier_magnitude_equal", {"f", "g"}, true,
                         mode == Mode::Discrete ? "lattice_core::equal_fourier_magnitude"
                                                : "continuous_model::sampled_magnitude_equal",
                         kConclusion, mag));
  c.push_back(make_claim("not_associated", "association", {"f", "g"}, false, mod + "::find_association", kConclusion));
  if (pauli)
    c.push_back(make_claim("pointwise_modulus_equal", "pointwise_modulus_equal", {"f", "g"}, true,
                           mod + "::pointwise_modulus_equal", kConclusion));
  return c;
}

// --- mode-generic helpers --------------------------------------------------

template <typename Scalar>
LatticeSignal<Scalar> apply_op(const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi) {
  return apply_stencil(A, psi);
}
template <typename Scalar>
LatticeSignal<Scalar> adjoint_op(const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi) {
  return apply_adjoint(A, psi);
}
template <typename Scalar>
ContinuousSignal<Scalar> apply_op(const ContinuousStencil<Scalar>& A, const ContinuousSignal<Scalar>& psi) {
  return apply_continuous(A, psi);
}
template <typename Scalar>
ContinuousSignal<Scalar> adjoint_op(const ContinuousStencil<Scalar>& A, const ContinuousSignal<Scalar>& psi) {
  return apply_continuous_adjoint(A, psi);
}

template <typename Scalar>
constexpr Mode mode_of(const LatticeSignal<Scalar>&) {
  return Mode::Discrete;
}
template <typename Scalar>
constexpr Mode mode_of(const ContinuousSignal<Scalar>&) {
  return Mode::Continuous;
}

template <typename Scalar>
void require_canonical(const LatticeSignal<Scalar>&, const char*) {}

template <typename Scalar>
void require_canonical(const ContinuousSignal<Scalar>& w, const char* what) {
  if (w.has_overlaps())
    throw PreconditionError(conditions::kAtomsDisjoint, "atoms of " + std::string(what) + " have disjoint closures",
                            "overlapping atoms make association checks undecidable; shrink the atoms");
}

template <typename Signal>
void check_psi(const Signal& psi) {
  if (psi.empty()) throw PreconditionError(conditions::kPsiNonzero, "psi != 0");
  require_canonical(psi, "psi");
  if (is_self_conj_associated(psi))
    throw PreconditionError(conditions::kPsiNotSelfAssociated,
                            "psi != e^{i alpha} conj(psi(-x + y)) for every alpha, y");
}

template <typename Op>
void check_sigma(const Op& A) {
  if (sigma_self_conj_associated(A))
    throw PreconditionError(conditions::kSigmaNotSelfAssociated,
                            "sigma != e^{i alpha} conj(sigma(-x + y)) for every alpha, y");
}

template <typename Op>
void check_pauli_taps(const Op& A) {
  if (!taps_symmetric(A)) throw PreconditionError(conditions::kTapsSymmetric, "T = -T");
  if (!tap_modulus_symmetric(A))
    throw PreconditionError(conditions::kTapModulusSymmetric, "|a_y| = |a_{-y}| for every y in T");
  if (auto u = global_conjugate_phase(A))
    throw PreconditionError(conditions::kNoGlobalConjugatePhase,
                            "no alpha with a_y = e^{i alpha} conj(a_{-y}) for every y in T",
                            "alpha = " + std::to_string(phase_angle(to_complex(*u))) + " works");
}

template <typename Signal, typename Op>
Bundle<typename Signal::scalar_type> pair_bundle(Provenance p, const Op& A, const Signal& psi, ClaimList claims) {
  using Scalar = typename Signal::scalar_type;
  auto pair = make_pair(p, A, psi);
  Bundle<Scalar> b;
  b.construction = to_string(p);
  b.mode = mode_of(psi);
  b.parameters["provenance"] = to_string(p);
  b.parameters["dim"] = psi.dim();
  b.stencils.emplace("A", A);
  b.put("psi", pair.psi);
  b.put("f", pair.f);
  b.put("g", pair.g);
  b.claims = std::move(claims);
  return b;
}

template <typename Signal, typename Op>
Bundle<typename Signal::scalar_type> theorem1_impl(Provenance p, const Op& A, const Signal& psi) {
  A.validate();
  if (A.dim() != psi.dim()) throw DimensionMismatch(A.dim(), psi.dim());
  check_psi(psi);
  check_sigma(A);
  auto b = pair_bundle(p, A, psi, pair_claims(mode_of(psi), psi.dim(), false));
  require_canonical(b.template signal<Signal>("f"), "f");
  require_canonical(b.template signal<Signal>("g"), "g");
  return b;
}

template <typename Signal, typename Op>
Bundle<typename Signal::scalar_type> theorem2_impl(Provenance p, const Op& A, const Signal& psi) {
  A.validate();
  if (A.dim() != psi.dim()) throw DimensionMismatch(A.dim(), psi.dim());
  check_pauli_taps(A);
  if (!translates_disjoint(A, psi))
    throw PreconditionError(conditions::kTranslatesDisjoint,
                            "(supp psi - y_i) and (supp psi - y_j) disjoint for distinct y_i, y_j in T");
  check_psi(psi);
  // the symmetric-tap premises imply the sigma condition; both are checked
  if (sigma_self_conj_associated(A))
    throw std::logic_error("symmetric-tap premises hold but sigma is self-associated");
  auto b = pair_bundle(p, A, psi, pair_claims(mode_of(psi), psi.dim(), true));
  require_canonical(b.template signal<Signal>("f"), "f");
  require_canonical(b.template signal<Signal>("g"), "g");
  return b;
}

// --- bumps -------------------------------------------------------------------

/// Lattice points with Euclidean norm < r.
template <typename Scalar>
LatticeSignal<Scalar> discrete_ball(int dim, double r, const Scalar& value) {
  LatticeSignal<Scalar> out(dim);
  const auto reach = static_cast<std::int64_t>(std::ceil(r));
  LatticePoint x = LatticePoint::Constant(dim, -reach);
  while (true) {
    if (x.cast<double>().norm() < r) out.set(x, value);
    int j = dim - 1;
    while (j >= 0 && ++x(j) > reach) x(j--) = -reach;
    if (j < 0) break;
  }
  return out;
}

LatticePoint require_lattice(const RealVector& v, const char* what) {
  auto p = as_lattice_point(v);
  if (!p) throw std::invalid_argument(std::string(what) + " must be an integer vector in discrete mode");
  return *p;
}

/// Returns c * chi_r(x - center) in the requested mode.
template <typename Scalar>
struct BumpFactory {
  Mode mode;
  int dim;
  double r;

  template <typename Signal>
  Signal make(const RealVector& center, const Scalar& c) const;
};

template <typename Scalar>
template <typename Signal>
Signal BumpFactory<Scalar>::make(const RealVector& center, const Scalar& c) const {
  if constexpr (std::is_same_v<Signal, LatticeSignal<Scalar>>) {
    return shifted(discrete_ball(dim, r, c), require_lattice(center, "bump center"));
  } else {
    ContinuousSignal<Scalar> w(dim);
    w.add(AtomGeometry::box(center, RealVector::Constant(dim, r)), c);
    return w;
  }
}

template <typename Signal>
Signal sum_of(int dim, std::initializer_list<Signal> parts) {
  Signal out(dim);
  for (const auto& p : parts) out = out + p;
  return out;
}

template <typename Scalar, typename Signal, typename Op>
Bundle<Scalar> example1_impl(const Example1Params<Scalar>& p, const Op& A) {
  const int d = static_cast<int>(p.y.size());
  BumpFactory<Scalar> bump{p.mode, d, p.r};
  auto chi = [&](const RealVector& at, const Scalar& c) { return bump.template make<Signal>(at, c); };
  const RealVector zero = RealVector::Zero(d);
  const RealVector& y = p.y;
  const RealVector& z = p.z;
  const Scalar &a1 = p.a1, &a2 = p.a2, &b1 = p.b1, &b2 = p.b2;
  const Scalar ca1 = conj(a1), ca2 = conj(a2);

  const Signal psi = sum_of<Signal>(d, {chi(zero, b1), chi(z, b2)});
  auto b = theorem1_impl(Provenance::Ex1, A, psi);
  b.construction = "example1";

  const Signal& g = b.template signal<Signal>("g");
  const RealVector zy = z - y, zpy = z + y;
  b.put("f_closed", sum_of<Signal>(d, {chi(zero, a1 * b1), chi(z, a1 * b2), chi(RealVector(-y), a2 * b1),
                                       chi(zy, a2 * b2)}));
  b.put("g_closed", sum_of<Signal>(d, {chi(zero, ca1 * b1), chi(z, ca1 * b2), chi(y, ca2 * b1), chi(zpy, ca2 * b2)}));
  Signal g_y = [&] {
    if constexpr (std::is_same_v<Signal, LatticeSignal<Scalar>>)
      return shifted(g, LatticePoint(-require_lattice(y, "y")));
    else
      return shifted(g, RealVector(-y));
  }();
  b.put("g_y", g_y);
  b.put("g_y_closed",
        sum_of<Signal>(d, {chi(zero, ca2 * b1), chi(z, ca2 * b2), chi(RealVector(-y), ca1 * b1), chi(zy, ca1 * b2)}));

  const std::string mod = module_of(p.mode);
  auto add = [&](std::string name, std::string kind, std::vector<std::string> args, bool expected, std::string verifier,
                 ordered_json params = ordered_json::object()) {
    b.claims.push_back(make_claim(std::move(name), std::move(kind), std::move(args), expected, std::move(verifier),
                                  kConclusion, std::move(params)));
  };
  add("closed_form_f", "signal_equal", {"f", "f_closed"}, true, mod + "::apply_stencil");
  add("closed_form_g", "signal_equal", {"g", "g_closed"}, true, mod + "::apply_adjoint");
  ordered_json shift_witness;
  shift_witness["kind"] = "shift";
  shift_witness["phase"] = scalar_to_json(Scalar(1));
  shift_witness["shift"] = vector_to_json(RealVector(-y));
  add("g_y_shift_of_g", "association", {"g", "g_y"}, true, mod + "::find_association",
      ordered_json{{"witness", shift_witness}});
  add("closed_form_g_y", "signal_equal", {"g_y", "g_y_closed"}, true, mod + "::shifted");

  const bool z_equals_y = (z - y).cwiseAbs().maxCoeff() <= kGeometryTolerance;
  b.parameters["z_equals_y"] = z_equals_y;
  if (z_equals_y) {
    b.put("f_merged", sum_of<Signal>(d, {chi(zero, a1 * b1 + a2 * b2), chi(z, a1 * b2), chi(RealVector(-z), a2 * b1)}));
    b.put("g_y_merged",
          sum_of<Signal>(d, {chi(zero, ca1 * b2 + ca2 * b1), chi(z, ca2 * b2), chi(RealVector(-z), ca1 * b1)}));
    add("merged_form_f", "signal_equal", {"f", "f_merged"}, true, mod + "::apply_stencil");
    add("merged_form_g_y", "signal_equal", {"g_y", "g_y_merged"}, true, mod + "::shifted");
    const bool reduced = nearly_equal(b1, a2) && nearly_equal(b2, Scalar(-a1));
    b.parameters["reduced"] = reduced;
    if (reduced) {
      b.put("f_reduced", sum_of<Signal>(d, {chi(RealVector(-z), a2 * a2), chi(z, Scalar(-(a1 * a1)))}));
      b.put("g_y_reduced", sum_of<Signal>(d, {chi(RealVector(-z), ca1 * a2), chi(zero, Scalar(-a1 * ca1 + a2 * ca2)),
                                              chi(z, Scalar(-(a1 * ca2)))}));
      add("reduced_form_f", "signal_equal", {"f", "f_reduced"}, true, mod + "::apply_stencil");
      add("reduced_form_g_y", "signal_equal", {"g_y", "g_y_reduced"}, true, mod + "::shifted");
    }
  }
  return b;
}

double euclid(const RealVector& v) { return v.norm(); }

template <typename Scalar>
bool is_real(const Scalar& a) {
  if constexpr (is_exact_v<Scalar>)
    return sgn(a.imag()) == 0;
  else
    return a.imag() == 0.0;
}

/// Background claims shared by the holography constructions. Expects
/// w0, w1, w2, u1 = w1 + w0, u2 = w2 + w0 and bodies D0, D in the bundle.
template <typename Scalar>
void add_background_claims(Bundle<Scalar>& b, bool discrete_geometry, std::optional<bool> associated,
                           std::optional<double> expected_R, const ordered_json& witness = {}) {
  const std::string mod = module_of(b.mode);
  auto add = [&](std::string name, std::string kind, std::vector<std::string> args, bool expected, std::string verifier,
                 ordered_json params = ordered_json::object()) {
    b.claims.push_back(make_claim(std::move(name), std::move(kind), std::move(args), expected, std::move(verifier),
                                  kConclusion, std::move(params)));
  };
  add("w0_support", "support_within", {"w0", "D0"}, true, "geometry::contains_open");
  add("w1_support", "support_within", {"w1", "D"}, true, "geometry::contains_open");
  add("w2_support", "support_within", {"w2", "D"}, true, "geometry::contains_open");
  add("problem3_geometry", "problem3_geometry", {"D0", "D"}, true, "geometry::check_problem3_geometry",
      ordered_json{{"discrete", discrete_geometry}});
  if (expected_R)
    add("separation_distance", "distance_equals", {"D", "D0"}, true, "geometry::distance",
        ordered_json{{"value", *expected_R}, {"tolerance", 1e-10}});
  add("sum_w1_w0", "sum_equal", {"w1", "w0", "u1"}, true, mod + "::add");
  add("sum_w2_w0", "sum_equal", {"w2", "w0", "u2"}, true, mod + "::add");
  ordered_json mag = ordered_json::object();
  if (b.mode == Mode::Continuous) mag["grid"] = continuous_grid(b.parameters.value("dim", 1));
  add("background_magnitude_equal", "fourier_magnitude_equal", {"u1", "u2"}, true,
      b.mode == Mode::Discrete ? "lattice_core::equal_fourier_magnitude" : "continuous_model::sampled_magnitude_equal",
      mag);
  add("w0_nonzero", "nonzero", {"w0"}, true, mod + "::support");
  add("w1_w2_distinct", "distinct", {"w1", "w2"}, true, mod + "::approx_equal");
  if (associated) {
    ordered_json params = ordered_json::object();
    if (!witness.is_null()) params["witness"] = witness;
    add(*associated ? "background_associated" : "background_not_associated", "association", {"u1", "u2"}, *associated,
        mod + "::find_association", params);
  }
}

template <typename Scalar, typename Signal, typename Op>
Bundle<Scalar> example2_impl(const Example2Params<Scalar>& p, const Signal& psi, const Op& A) {
  const int d = static_cast<int>(p.y.size());
  const ConvexBody ball = ConvexBody::ball(p.center, p.rho);
  if (!support_within(psi, ball))
    throw PreconditionError(conditions::kExample2Support, "supp psi inside B_rho(a)");
  check_psi(psi);

  auto b = theorem2_impl(Provenance::Ex2, A, psi);
  b.construction = "example2";
  b.parameters["phase"] = scalar_to_json(p.phase);
  b.parameters["rho"] = p.rho;
  b.parameters["center"] = vector_to_json(p.center);
  b.parameters["y"] = vector_to_json(p.y);
  const double R = euclid(p.y) - 2 * p.rho;
  b.parameters["expected_R"] = R;

  auto shift_by = [&](const Signal& w, const RealVector& v) {
    if constexpr (std::is_same_v<Signal, LatticeSignal<Scalar>>)
      return shifted(w, require_lattice(v, "y"));
    else
      return shifted(w, v);
  };
  const Scalar a3 = p.a2 * p.phase;
  const Signal psi_plus = shift_by(psi, RealVector(-p.y));  // psi(x + y)
  const Signal psi_minus = shift_by(psi, p.y);              // psi(x - y)
  b.put("f_closed", sum_of<Signal>(d, {scaled(psi, p.a1), scaled(psi_plus, p.a2), scaled(psi_minus, a3)}));
  b.put("g_rotated_closed",
        sum_of<Signal>(d, {scaled(psi, Scalar(conj(p.a1) * p.phase)), scaled(psi_plus, p.a2), scaled(psi_minus, a3)}));

  const Signal w0 = scaled(psi_minus, a3);
  const Signal w1 = sum_of<Signal>(d, {scaled(psi, p.a1), scaled(psi_plus, p.a2)});
  const Signal w2 = sum_of<Signal>(d, {scaled(psi, Scalar(conj(p.a1) * p.phase)), scaled(psi_plus, p.a2)});
  b.put("w0", w0);
  b.put("w1", w1);
  b.put("w2", w2);
  b.put("u1", w1 + w0);
  b.put("u2", w2 + w0);
  b.bodies.emplace("D0", ball.translated(p.y));
  b.bodies.emplace("D", hull_of_translates(ball, {RealVector::Zero(d), RealVector(-p.y)}));

  const std::string mod = module_of(p.mode);
  b.claims.push_back(make_claim("closed_form_f", "signal_equal", {"f", "f_closed"}, true, mod + "::apply_stencil",
                                kConclusion));
  b.claims.push_back(make_claim("rotated_closed_form_g", "signal_equal", {"g", "g_rotated_closed"}, true,
                                mod + "::apply_adjoint", kConclusion,
                                ordered_json{{"scale_a", scalar_to_json(p.phase)}}));
  add_background_claims(b, p.mode == Mode::Discrete, false, R);
  return b;
}

}  // namespace

ClaimList theorem1_claims(Mode mode, int dim) { return pair_claims(mode, dim, false); }
ClaimList theorem2_claims(Mode mode, int dim) { return pair_claims(mode, dim, true); }

template <typename Scalar>
ConstructionPair<LatticeSignal<Scalar>, Stencil<Scalar>> make_pair(Provenance p, const Stencil<Scalar>& A,
                                                                   const LatticeSignal<Scalar>& psi) {
  return {p, A, psi, apply_stencil(A, psi), apply_adjoint(A, psi)};
}

template <typename Scalar>
ConstructionPair<ContinuousSignal<Scalar>, ContinuousStencil<Scalar>> make_pair(Provenance p,
                                                                                const ContinuousStencil<Scalar>& A,
                                                                                const ContinuousSignal<Scalar>& psi) {
  return {p, A, psi, apply_continuous(A, psi), apply_continuous_adjoint(A, psi)};
}

template <typename Scalar>
Bundle<Scalar> unchecked_pair_bundle(Provenance p, const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi) {
  return pair_bundle(p, A, psi, pair_claims(Mode::Discrete, psi.dim(), p == Provenance::Thm2 || p == Provenance::Ex2));
}

template <typename Scalar>
Bundle<Scalar> theorem1_pair(const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi) {
  return theorem1_impl(Provenance::Thm1, A, psi);
}
template <typename Scalar>
Bundle<Scalar> theorem1_pair(const ContinuousStencil<Scalar>& A, const ContinuousSignal<Scalar>& psi) {
  return theorem1_impl(Provenance::Thm1, A, psi);
}
template <typename Scalar>
Bundle<Scalar> theorem2_pauli_pair(const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi) {
  return theorem2_impl(Provenance::Thm2, A, psi);
}
template <typename Scalar>
Bundle<Scalar> theorem2_pauli_pair(const ContinuousStencil<Scalar>& A, const ContinuousSignal<Scalar>& psi) {
  return theorem2_impl(Provenance::Thm2, A, psi);
}

template <typename Scalar>
Bundle<Scalar> example1(const Example1Params<Scalar>& p) {
  const int d = static_cast<int>(p.y.size());
  if (d < 1 || p.z.size() != d) throw std::invalid_argument("example1: y and z must be nonempty and of equal length");
  auto premise = [](bool ok, const std::string& detail) {
    if (!ok)
      throw PreconditionError(conditions::kExample1Premises,
                              "a1, a2, b1, b2 != 0, y != 0, z != 0, |a1| != |a2|, |b1| != |b2|, r > 0", detail);
  };
  premise(!is_zero(p.a1) && !is_zero(p.a2) && !is_zero(p.b1) && !is_zero(p.b2), "a coefficient is zero");
  premise(p.y.cwiseAbs().maxCoeff() > kGeometryTolerance, "y = 0");
  premise(p.z.cwiseAbs().maxCoeff() > kGeometryTolerance, "z = 0");
  premise(!equal_modulus(p.a1, p.a2), "|a1| = |a2|");
  premise(!equal_modulus(p.b1, p.b2), "|b1| = |b2|");
  premise(p.r > 0, "r <= 0");

  if (p.mode == Mode::Discrete) {
    Stencil<Scalar> A(d);
    A.add_tap(LatticePoint::Zero(d), p.a1);
    A.add_tap(require_lattice(p.y, "y"), p.a2);
    require_lattice(p.z, "z");
    auto b = example1_impl<Scalar, LatticeSignal<Scalar>>(p, A);
    b.parameters["r"] = p.r;
    return b;
  }
  ContinuousStencil<Scalar> A(d);
  A.add_tap(RealVector::Zero(d), p.a1);
  A.add_tap(p.y, p.a2);
  auto b = example1_impl<Scalar, ContinuousSignal<Scalar>>(p, A);
  b.parameters["r"] = p.r;
  return b;
}

template <typename Scalar>
Bundle<Scalar> example2(const Example2Params<Scalar>& p) {
  const int d = static_cast<int>(p.y.size());
  if (d < 1 || p.center.size() != d) throw std::invalid_argument("example2: y and center must have equal length");
  auto coeff = [](bool ok, const std::string& detail) {
    if (!ok)
      throw PreconditionError(conditions::kExample2Coefficients,
                              "a1 != 0, a2 real nonzero, |e^{i phi}| = 1, a1 != conj(a1) e^{i phi}", detail);
  };
  coeff(!is_zero(p.a1), "a1 = 0");
  coeff(!is_zero(p.a2) && is_real(p.a2), "a2 must be real and nonzero");
  coeff(is_unit(p.phase), "phase is not unit modulus");
  coeff(!nearly_equal(p.a1, Scalar(conj(p.a1) * p.phase)), "a1 = conj(a1) e^{i phi}");
  if (!(p.rho > 0) || !(p.rho < euclid(p.y) / 2))
    throw PreconditionError(conditions::kExample2Support, "0 < rho < |y| / 2");

  if (p.two_bump) {
    const auto& tb = *p.two_bump;
    const bool ok = (tb.z - 2 * p.center).cwiseAbs().maxCoeff() <= kGeometryTolerance && euclid(tb.z) < 2 * p.rho &&
                    tb.r <= p.rho - euclid(tb.z) / 2 + kGeometryTolerance;
    if (!ok) throw PreconditionError(conditions::kExample2NestedPsi, "z = 2a, |z| < 2 rho, r <= rho - |z| / 2");
  }

  auto build_psi = [&](auto tag) {
    using Signal = decltype(tag);
    const auto& tb = *p.two_bump;
    BumpFactory<Scalar> bump{p.mode, d, tb.r};
    return sum_of<Signal>(d, {bump.template make<Signal>(RealVector::Zero(d), tb.b1),
                              bump.template make<Signal>(tb.z, tb.b2)});
  };

  if (p.mode == Mode::Discrete) {
    Stencil<Scalar> A(d);
    const LatticePoint y = require_lattice(p.y, "y");
    A.add_tap(LatticePoint::Zero(d), p.a1);
    A.add_tap(y, p.a2);
    A.add_tap(LatticePoint(-y), Scalar(p.a2 * p.phase));
    LatticeSignal<Scalar> psi(d);
    if (p.psi)
      psi = *p.psi;
    else if (p.two_bump)
      psi = build_psi(LatticeSignal<Scalar>(d));
    else
      throw std::invalid_argument("example2: no psi given");
    return example2_impl(p, psi, A);
  }
  if (!p.two_bump) throw std::invalid_argument("example2: continuous mode needs the two-bump psi");
  ContinuousStencil<Scalar> A(d);
  A.add_tap(RealVector::Zero(d), p.a1);
  A.add_tap(p.y, p.a2);
  A.add_tap(RealVector(-p.y), Scalar(p.a2 * p.phase));
  return example2_impl(p, build_psi(ContinuousSignal<Scalar>(d)), A);
}

template <typename Scalar>
Bundle<Scalar> theorem3_background(const LatticeSignal<Scalar>& psi, const LatticeSignal<Scalar>& phi,
                                   const ConvexBody& U0, const ConvexBody& U1) {
  const int d = psi.dim();
  if (phi.dim() != d || U0.dim() != d || U1.dim() != d) throw DimensionMismatch(d, phi.dim());
  if (psi.empty() || phi.empty()) throw PreconditionError(conditions::kPsiNonzero, "psi != 0 and phi != 0");
  if (!support_within(psi, U0) || !support_within(phi, U1))
    throw PreconditionError(conditions::kBackgroundSupports, "supp psi inside U0, supp phi inside U1");
  if (!same_body(U1, U1.negated())) throw PreconditionError(conditions::kSymmetricReference, "U1 = -U1");
  if (!(distance(U1, U0) > kDistanceTolerance))
    throw PreconditionError(conditions::kDomainsSeparated, "dist(U1, U0) > 0");
  const auto phi_tilde = conj_reflected(phi);
  if (approx_equal(phi, phi_tilde))
    throw PreconditionError(conditions::kPhiNotSelfReflected, "phi != conj(phi(-x))");

  const auto psi_tilde = conj_reflected(psi);
  Bundle<Scalar> b;
  b.construction = "thm3";
  b.mode = Mode::Discrete;
  b.parameters["dim"] = d;
  b.put("psi", psi);
  b.put("phi", phi);
  b.put("w0", psi);
  b.put("w1", psi_tilde + phi);
  b.put("w2", psi_tilde + phi_tilde);
  b.put("u1", b.lattice("w1") + psi);
  b.put("u2", b.lattice("w2") + psi);
  b.bodies.emplace("U0", U0);
  b.bodies.emplace("U1", U1);
  b.bodies.emplace("D0", U0);
  b.bodies.emplace("D", hull_of_union(U1, U0.negated()));

  ordered_json witness;
  witness["kind"] = "conj_reflect";
  witness["phase"] = scalar_to_json(Scalar(1));
  witness["shift"] = vector_to_json(RealVector::Zero(d));
  add_background_claims(b, true, true, std::nullopt, witness);
  return b;
}

template <typename Scalar>
bool symmetric_taps_certificate(const Stencil<Scalar>& A, const LatticePoint& y_star, const Scalar& phase) {
  if (!taps_symmetric(A) || !A.contains(y_star) || !A.contains(LatticePoint(-y_star))) return false;
  if (!nearly_equal(A.at(LatticePoint(-y_star)), Scalar(phase * conj(A.at(y_star))))) return false;
  for (const auto& [y, a] : A)
    if (!nearly_equal(A.at(LatticePoint(-y)), Scalar(phase * conj(a)))) return true;
  return false;
}

template <typename Scalar>
Bundle<Scalar> theorem4_background(const Stencil<Scalar>& A, const LatticeSignal<Scalar>& psi, const ConvexBody& B,
                                   const LatticePoint& y_star, std::optional<Scalar> phase, SigmaCondition sigma) {
  A.validate();
  const int d = A.dim();
  if (psi.dim() != d || B.dim() != d || y_star.size() != d) throw DimensionMismatch(d, psi.dim());
  if (psi.empty()) throw PreconditionError(conditions::kPsiNonzero, "psi != 0");
  if (!support_within(psi, B)) throw PreconditionError(conditions::kBackgroundSupports, "supp psi inside B");
  const LatticePoint minus_star = -y_star;
  if (!A.contains(y_star) || !A.contains(minus_star))
    throw PreconditionError(conditions::kSeparatedTap, "y* in T and y* in -T");
  const auto taps = to_real(A.offsets());
  if (!check_thm4_separation(B, taps, to_real(y_star)))
    throw PreconditionError(conditions::kSeparatedTap, "D0 and D disjoint, D0 = B + y*, D = ch(U_{y in (T U -T)\\{y*}} (B + y))");

  const Scalar derived = A.at(minus_star) / conj(A.at(y_star));
  if (!is_unit(derived))
    throw PreconditionError(conditions::kSeparatedTapPhase, "a_{-y*} = e^{i phi} conj(a_{y*})", "|a_{-y*}| != |a_{y*}|");
  if (phase && !nearly_equal(*phase, derived))
    throw PreconditionError(conditions::kSeparatedTapPhase, "a_{-y*} = e^{i phi} conj(a_{y*})",
                            "given phase does not match the taps");
  const Scalar u = phase.value_or(derived);

  check_psi(psi);
  if (sigma == SigmaCondition::Require) {
    const bool direct = !sigma_self_conj_associated(A);
    const bool certificate = symmetric_taps_certificate(A, y_star, u);
    if (certificate && !direct) throw std::logic_error("symmetric-taps certificate contradicts the direct sigma check");
    if (!direct)
      throw PreconditionError(conditions::kSigmaNotSelfAssociated,
                              "sigma != e^{i alpha} conj(sigma(-x + y)) for every alpha, y");
  }

  auto pair = make_pair(Provenance::Thm1, A, psi);
  Bundle<Scalar> b;
  b.construction = "thm4";
  b.mode = Mode::Discrete;
  b.parameters["dim"] = d;
  b.parameters["y_star"] = point_to_json(y_star);
  b.parameters["phase"] = scalar_to_json(u);
  b.parameters["sigma_condition"] = sigma == SigmaCondition::Require ? "required" : "dropped";
  b.stencils.emplace("A", A);
  b.put("psi", psi);
  b.put("f", pair.f);
  b.put("g", pair.g);
  const auto w0 = scaled(shifted(psi, y_star), A.at(minus_star));
  const auto rotated_g = scaled(pair.g, u);
  b.put("w0", w0);
  b.put("w1", pair.f - w0);
  b.put("w2", rotated_g - w0);
  b.put("u1", b.lattice("w1") + w0);
  b.put("u2", b.lattice("w2") + w0);
  b.bodies.emplace("B", B);
  b.bodies.emplace("D0", B.translated(to_real(y_star)));
  b.bodies.emplace("D", hull_of_translates(B, remaining_offsets(taps, to_real(y_star))));

  auto add = [&](std::string name, std::string kind, std::vector<std::string> args, bool expected, std::string verifier,
                 const char* role, ordered_json params = ordered_json::object()) {
    b.claims.push_back(make_claim(std::move(name), std::move(kind), std::move(args), expected, std::move(verifier), role,
                                  std::move(params)));
  };
  add("psi_not_self_associated", "self_conj_associated", {"psi"}, false, "lattice_core::is_self_conj_associated",
      kPremise);
  if (sigma == SigmaCondition::Require)
    add("sigma_not_self_associated", "self_conj_associated", {"A"}, false, "lattice_core::is_self_conj_associated",
        kPremise);
  add("separation", "thm4_separation", {"B", "A"}, true, "geometry::check_thm4_separation", kPremise,
      ordered_json{{"y_star", point_to_json(y_star)}});
  add("stencil_action", "stencil_action", {"A", "psi", "f", "g"}, true, "lattice_core::apply_stencil", kConclusion);
  add("masking_f", "masking", {"f", "D0", "w0"}, true, "geometry::contains_open", kConclusion);
  add("masking_g", "masking", {"g", "D0", "w0"}, true, "geometry::contains_open", kConclusion,
      ordered_json{{"scale_a", scalar_to_json(u)}});
  add("support_f", "support_in_translates", {"f", "B", "A"}, true, "geometry::contains_open", kConclusion,
      ordered_json{{"sign", -1}});
  add("support_g", "support_in_translates", {"g", "B", "A"}, true, "geometry::contains_open", kConclusion,
      ordered_json{{"sign", 1}});
  std::optional<bool> associated;
  if (sigma == SigmaCondition::Require) associated = false;
  add_background_claims(b, true, associated, std::nullopt);
  return b;
}

template <typename Scalar>
ConstructionPair<LatticeSignal<Scalar>, Stencil<Scalar>> lattice_pair(const Bundle<Scalar>& b) {
  const auto& A = std::get<Stencil<Scalar>>(b.stencils.at("A"));
  Provenance p = Provenance::Thm1;
  for (Provenance q : {Provenance::Thm1, Provenance::Thm2, Provenance::Ex1, Provenance::Ex2})
    if (b.parameters.value("provenance", std::string()) == to_string(q)) p = q;
  return {p, A, b.lattice("psi"), b.lattice("f"), b.lattice("g")};
}

template <typename Scalar>
BackgroundTriple<LatticeSignal<Scalar>> lattice_triple(const Bundle<Scalar>& b) {
  BackgroundTriple<LatticeSignal<Scalar>> t{b.lattice("w0"), b.lattice("w1"), b.lattice("w2"),
                                            b.body("D0"),    b.body("D"),     std::nullopt};
  if (b.parameters.contains("phase")) t.phase = scalar_from_json<Scalar>(b.parameters["phase"]);
  return t;
}

#define FORGE_INSTANTIATE(S)                                                                                          \
  template ConstructionPair<LatticeSignal<S>, Stencil<S>> make_pair(Provenance, const Stencil<S>&,                   \
                                                                    const LatticeSignal<S>&);                         \
  template ConstructionPair<ContinuousSignal<S>, ContinuousStencil<S>> make_pair(                                    \
      Provenance, const ContinuousStencil<S>&, const ContinuousSignal<S>&);                                           \
  template Bundle<S> unchecked_pair_bundle(Provenance, const Stencil<S>&, const LatticeSignal<S>&);                  \
  template Bundle<S> theorem1_pair(const Stencil<S>&, const LatticeSignal<S>&);                                       \
  template Bundle<S> theorem1_pair(const ContinuousStencil<S>&, const ContinuousSignal<S>&);                          \
  template Bundle<S> theorem2_pauli_pair(const Stencil<S>&, const LatticeSignal<S>&);                                 \
  template Bundle<S> theorem2_pauli_pair(const ContinuousStencil<S>&, const ContinuousSignal<S>&);                    \
  template Bundle<S> example1(const Example1Params<S>&);                                                              \
  template Bundle<S> example2(const Example2Params<S>&);                                                              \
  template Bundle<S> theorem3_background(const LatticeSignal<S>&, const LatticeSignal<S>&, const ConvexBody&,         \
                                         const ConvexBody&);                                                          \
  template Bundle<S> theorem4_background(const Stencil<S>&, const LatticeSignal<S>&, const ConvexBody&,               \
                                         const LatticePoint&, std::optional<S>, SigmaCondition);                      \
  template bool symmetric_taps_certificate(const Stencil<S>&, const LatticePoint&, const S&);                         \
  template ConstructionPair<LatticeSignal<S>, Stencil<S>> lattice_pair(const Bundle<S>&);                             \
  template BackgroundTriple<LatticeSignal<S>> lattice_triple(const Bundle<S>&);

FORGE_INSTANTIATE(Complex)
FORGE_INSTANTIATE(GaussianRational)

#undef FORGE_INSTANTIATE

}  // namespace forge
