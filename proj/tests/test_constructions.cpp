#include <doctest.h>

#include "forge/campaign.hpp"
#include "forge/constructions.hpp"
#include "forge/premises.hpp"
#include "forge/verification.hpp"
#include "support.hpp"

using namespace forge;
using namespace testing;
using GR = GaussianRational;

namespace {

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index j = 0;
  for (double x : v) out(j++) = x;
  return out;
}

LatticeSignal<GR> line(std::initializer_list<std::pair<long, GR>> values) {
  LatticeSignal<GR> w(1);
  for (const auto& [x, v] : values) w.set(lattice_point({x}), v);
  return w;
}

Stencil<GR> taps(std::initializer_list<std::pair<long, GR>> values) {
  Stencil<GR> s(1);
  for (const auto& [y, a] : values) s.add_tap(lattice_point({y}), a);
  return s;
}

const GR I(0, 1);

template <typename F>
std::string condition_of(F&& build) {
  try {
    build();
  } catch (const PreconditionError& e) {
    return e.condition();
  }
  return "accepted";
}

void check_all_pass(const Bundle<GR>& b) {
  const auto report = run_claims(b);
  for (const auto& c : report.claims) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
  CHECK(report.pass);
}

Example1Params<GR> example1_defaults() {
  return {GR(1), GR(2), GR(1), GR(3), vec({1}), vec({2}), 1.0, Mode::Discrete};
}

Example2Params<GR> example2_defaults() {
  Example2Params<GR> p;
  p.a1 = I;
  p.a2 = GR(1);
  p.y = vec({2});
  p.rho = 0.75;
  p.center = vec({0.5});
  p.psi = line({{0, GR(1)}, {1, GR(3)}});
  return p;
}

}  // namespace

TEST_CASE("stencil pair: acceptance and rejection") {
  const auto A = taps({{0, GR(1)}, {1, GR(2)}});
  const auto psi = line({{0, GR(1)}, {2, GR(3)}});
  const auto b = theorem1_pair(A, psi);
  CHECK(b.lattice("f") == line({{-1, GR(2)}, {0, GR(1)}, {1, GR(6)}, {2, GR(3)}}));
  CHECK(b.lattice("g") == line({{0, GR(1)}, {1, GR(2)}, {2, GR(3)}, {3, GR(6)}}));
  check_all_pass(b);

  CHECK(condition_of([&] { theorem1_pair(taps({{0, GR(1)}}), line({{0, GR(1)}, {1, GR(3)}})); }) ==
        conditions::kSigmaNotSelfAssociated);
  CHECK(condition_of([&] { theorem1_pair(A, line({{0, GR(1)}})); }) == conditions::kPsiNotSelfAssociated);
  CHECK(condition_of([&] { theorem1_pair(A, LatticeSignal<GR>(1)); }) == conditions::kPsiNonzero);
  CHECK_THROWS_AS(theorem1_pair(A, LatticeSignal<GR>(2)), DimensionMismatch);
}

TEST_CASE("symmetric-tap pair: acceptance and rejection") {
  const auto psi = line({{0, GR(1)}, {1, GR(3)}});
  const auto b = theorem2_pauli_pair(taps({{0, I}, {2, GR(1)}, {-2, GR(1)}}), psi);
  const auto& f = b.lattice("f");
  const auto& g = b.lattice("g");
  // f and g differ only in the central coefficient, i against -i
  CHECK(f.at(lattice_point({0})) == I);
  CHECK(g.at(lattice_point({0})) == -I);
  CHECK(f.at(lattice_point({1})) == GR(0, 3));
  CHECK(g.at(lattice_point({1})) == GR(0, -3));
  for (const auto& [x, v] : f)
    if (x(0) != 0 && x(0) != 1) CHECK(g.at(x) == v);
  check_all_pass(b);

  CHECK(condition_of([&] { theorem2_pauli_pair(taps({{0, GR(1)}, {2, GR(1)}, {-2, GR(1)}}), psi); }) ==
        conditions::kNoGlobalConjugatePhase);
  CHECK(condition_of([&] { theorem2_pauli_pair(taps({{0, I}, {1, GR(1)}, {-1, GR(1)}}), psi); }) ==
        conditions::kTranslatesDisjoint);
  CHECK(condition_of([&] { theorem2_pauli_pair(taps({{0, I}, {2, GR(1)}}), psi); }) == conditions::kTapsSymmetric);
  CHECK(condition_of([&] { theorem2_pauli_pair(taps({{0, I}, {2, GR(1)}, {-2, GR(2)}}), psi); }) ==
        conditions::kTapModulusSymmetric);
  CHECK(condition_of([&] { theorem2_pauli_pair(taps({{0, I}, {2, GR(1)}, {-2, GR(1)}}), line({{0, GR(1)}})); }) ==
        conditions::kPsiNotSelfAssociated);
}

TEST_CASE("example1 builder") {
  const auto b = example1(example1_defaults());
  check_all_pass(b);
  CHECK(b.lattice("f") == line({{-1, GR(2)}, {0, GR(1)}, {1, GR(6)}, {2, GR(3)}}));
  CHECK_FALSE(b.parameters["z_equals_y"].get<bool>());

  SUBCASE("reduced form when z = y, b1 = a2, b2 = -a1") {
    Example1Params<GR> p{GR(1), GR(0, 2), GR(0, 2), GR(-1), vec({1}), vec({1}), 1.0, Mode::Discrete};
    const auto r = example1(p);
    check_all_pass(r);
    const auto& f = r.lattice("f");
    CHECK(f.size() == 2);
    CHECK(f.at(lattice_point({-1})) == GR(-4));  // a2^2
    CHECK(f.at(lattice_point({1})) == GR(-1));   // -a1^2
    CHECK(r.has_claim("reduced_form_f"));
  }

  SUBCASE("continuous") {
    auto p = example1_defaults();
    p.mode = Mode::Continuous;
    p.r = 0.25;
    check_all_pass(example1(p));
  }

  SUBCASE("rejections") {
    auto p = example1_defaults();
    p.a2 = GR(-1);
    CHECK(condition_of([&] { example1(p); }) == conditions::kExample1Premises);
    p = example1_defaults();
    p.b2 = GR(0, 1);
    CHECK(condition_of([&] { example1(p); }) == conditions::kExample1Premises);
    p = example1_defaults();
    p.y = vec({0});
    CHECK(condition_of([&] { example1(p); }) == conditions::kExample1Premises);
    // bumps wider than their spacing overlap in continuous mode
    p = example1_defaults();
    p.mode = Mode::Continuous;
    p.r = 1.0;
    CHECK(condition_of([&] { example1(p); }) == conditions::kAtomsDisjoint);
  }
}

TEST_CASE("example2 builder") {
  const auto b = example2(example2_defaults());
  check_all_pass(b);
  const auto report = run_claims(b);
  const auto* sep = report.find("separation_distance");
  REQUIRE(sep);
  CHECK(std::abs(distance(b.body("D"), b.body("D0")) - 0.5) < 1e-10);

  SUBCASE("quarter-turn phase with a real a1") {
    auto p = example2_defaults();
    p.a1 = GR(1);
    p.phase = I;
    check_all_pass(example2(p));
  }
  SUBCASE("real a1 with zero phase is rejected") {
    auto p = example2_defaults();
    p.a1 = GR(1);
    CHECK(condition_of([&] { example2(p); }) == conditions::kExample2Coefficients);
  }
  SUBCASE("complex a2 is rejected") {
    auto p = example2_defaults();
    p.a2 = I;
    CHECK(condition_of([&] { example2(p); }) == conditions::kExample2Coefficients);
  }
  SUBCASE("radius must stay below |y| / 2") {
    auto p = example2_defaults();
    p.rho = 1.0;
    CHECK(condition_of([&] { example2(p); }) == conditions::kExample2Support);
  }
  SUBCASE("psi must lie in the ball") {
    auto p = example2_defaults();
    p.psi = line({{0, GR(1)}, {2, GR(3)}});
    CHECK(condition_of([&] { example2(p); }) == conditions::kExample2Support);
  }
  SUBCASE("nested two-bump psi") {
    auto p = example2_defaults();
    p.psi.reset();
    p.mode = Mode::Continuous;
    p.two_bump = TwoBumpPsi<GR>{GR(1), GR(3), vec({1}), 0.25};
    check_all_pass(example2(p));
    p.two_bump->r = 0.3;
    CHECK(condition_of([&] { example2(p); }) == conditions::kExample2NestedPsi);
  }
}

TEST_CASE("associated background triple") {
  const auto psi = line({{5, GR(1)}});
  const auto phi = line({{-1, GR(1)}, {1, GR(2)}});
  const auto U0 = ConvexBody::interval(4.5, 5.5), U1 = ConvexBody::interval(-1.5, 1.5);
  const auto b = theorem3_background(psi, phi, U0, U1);
  CHECK(b.lattice("w0") == psi);
  CHECK(b.lattice("w1") == line({{-5, GR(1)}, {-1, GR(1)}, {1, GR(2)}}));
  CHECK(b.lattice("w2") == line({{-5, GR(1)}, {-1, GR(2)}, {1, GR(1)}}));
  check_all_pass(b);

  CHECK(condition_of([&] { theorem3_background(psi, line({{0, GR(1)}}), U0, U1); }) ==
        conditions::kPhiNotSelfReflected);
  CHECK(condition_of([&] { theorem3_background(psi, phi, U0, ConvexBody::interval(-1.5, 2.5)); }) ==
        conditions::kSymmetricReference);
  CHECK(condition_of([&] { theorem3_background(psi, phi, ConvexBody::interval(0.5, 5.5), U1); }) ==
        conditions::kDomainsSeparated);
  CHECK(condition_of([&] { theorem3_background(line({{7, GR(1)}}), phi, U0, U1); }) ==
        conditions::kBackgroundSupports);
}

TEST_CASE("separated-tap background triple") {
  const auto A = taps({{0, I}, {2, GR(1)}, {-2, GR(1)}});
  const auto psi = line({{0, GR(1)}, {1, GR(3)}});
  const auto B = ConvexBody::ball(vec({0.5}), 0.75);
  const auto b = theorem4_background(A, psi, B, lattice_point({2}), std::optional<GR>{}, SigmaCondition::Require);
  check_all_pass(b);

  SUBCASE("same triple as the second example") {
    const auto e = example2(example2_defaults());
    for (const char* name : {"f", "g", "w0", "w1", "w2", "u1", "u2"}) {
      CAPTURE(name);
      CHECK(b.lattice(name) == e.lattice(name));
    }
    CHECK(same_body(b.body("D0"), e.body("D0")));
    CHECK(std::abs(distance(b.body("D"), b.body("D0")) - distance(e.body("D"), e.body("D0"))) < 1e-12);
  }

  SUBCASE("masking: restricting f to D0 gives w0") {
    LatticeSignal<GR> masked(1), masked_g(1);
    const GR u = *lattice_triple(b).phase;
    for (const auto& [x, v] : b.lattice("f"))
      if (contains_open(b.body("D0"), to_real(x))) masked.set(x, v);
    for (const auto& [x, v] : b.lattice("g"))
      if (contains_open(b.body("D0"), to_real(x))) masked_g.set(x, u * v);
    CHECK(masked == b.lattice("w0"));
    CHECK(masked_g == b.lattice("w0"));
  }

  SUBCASE("tap phase mismatch") {
    const auto bad = taps({{0, I}, {2, GR(1)}, {-2, GR(2)}});
    CHECK(condition_of([&] { theorem4_background(bad, psi, B, lattice_point({2}), std::optional<GR>{}); }) ==
          conditions::kSeparatedTapPhase);
    CHECK(condition_of([&] { theorem4_background(A, psi, B, lattice_point({2}), std::optional<GR>{I}); }) ==
          conditions::kSeparatedTapPhase);
  }

  SUBCASE("separation failure and missing tap") {
    CHECK(condition_of([&] {
            theorem4_background(A, psi, ConvexBody::ball(vec({0.5}), 1.5), lattice_point({2}), std::optional<GR>{});
          }) == conditions::kSeparatedTap);
    CHECK(condition_of([&] {
            theorem4_background(A, psi, ConvexBody::ball(vec({5}), 0.5), lattice_point({2}), std::optional<GR>{});
          }) == conditions::kBackgroundSupports);
    CHECK(condition_of([&] { theorem4_background(A, psi, B, lattice_point({1}), std::optional<GR>{}); }) ==
          conditions::kSeparatedTap);
  }

  SUBCASE("dropped sigma condition") {
    const auto dropped = theorem4_background(A, psi, B, lattice_point({2}), std::optional<GR>{}, SigmaCondition::Drop);
    CHECK_FALSE(dropped.has_claim("sigma_not_self_associated"));
    CHECK_FALSE(dropped.has_claim("background_not_associated"));
    CHECK_FALSE(dropped.has_claim("background_associated"));
    std::vector<std::string> names, full;
    for (const auto& c : dropped.claims) names.push_back(c.name);
    for (const auto& c : b.claims)
      if (c.name != "sigma_not_self_associated" && c.name != "background_not_associated") full.push_back(c.name);
    CHECK(names == full);
    check_all_pass(dropped);

    // real symmetric taps: sigma is self-associated, so A = A* and w1 = w2
    const auto sym = taps({{0, GR(1)}, {2, GR(1)}, {-2, GR(1)}});
    CHECK(condition_of([&] { theorem4_background(sym, psi, B, lattice_point({2}), std::optional<GR>{}); }) ==
          conditions::kSigmaNotSelfAssociated);
    const auto degenerate = theorem4_background(sym, psi, B, lattice_point({2}), std::optional<GR>{}, SigmaCondition::Drop);
    const auto report = run_claims(degenerate);
    for (const auto& c : report.claims) {
      CAPTURE(c.name);
      CHECK(c.pass == (c.name != "w1_w2_distinct"));
    }
  }

  SUBCASE("symmetric-taps certificate") {
    CHECK(symmetric_taps_certificate(A, lattice_point({2}), GR(1)));
    CHECK_FALSE(symmetric_taps_certificate(taps({{0, GR(1)}, {2, GR(1)}, {-2, GR(1)}}), lattice_point({2}), GR(1)));
  }
}

TEST_CASE("property: pairs re-evaluate and their verdicts match the claim lists") {
  Rng rng(67);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 3;
    const bool pauli = trial % 2;
    const auto inst = pauli ? random_theorem2_instance(rng, d) : random_theorem1_instance(rng, d);
    const auto b = pauli ? theorem2_pauli_pair(inst.A, inst.psi) : theorem1_pair(inst.A, inst.psi);
    const auto pair = lattice_pair(b);
    CHECK(pair.f == apply_stencil(inst.A, inst.psi));
    CHECK(pair.g == apply_adjoint(inst.A, inst.psi));
    CHECK(pair.f == brute_apply(inst.A, inst.psi, false, 6));
    CHECK(equal_fourier_magnitude(pair.f, pair.g));
    CHECK_FALSE(find_association(pair.f, pair.g));
    if (pauli) {
      for (const auto& [x, v] : pair.f) CHECK(norm(v) == norm(pair.g.at(x)));
      CHECK(pair.f.size() == pair.g.size());
    }
  }
}

TEST_CASE("property: separated-tap supports and masking on random instances") {
  Rng rng(71);
  int built = 0;
  for (int trial = 0; trial < 200 && built < 40; ++trial) {
    auto inst = random_theorem2_instance(rng, 1);
    const auto offsets = inst.A.offsets();
    LatticePoint y_star = offsets[uniform(rng, 0, static_cast<int>(offsets.size()) - 1)];
    if (y_star.isZero()) continue;
    std::int64_t lo = 0, hi = 0;
    for (const auto& [x, v] : inst.psi) lo = std::min(lo, x(0)), hi = std::max(hi, x(0));
    const auto B = ConvexBody::interval(static_cast<double>(lo) - 0.25, static_cast<double>(hi) + 0.25);
    Bundle<GR> b;
    try {
      b = theorem4_background(inst.A, inst.psi, B, y_star, std::optional<GR>{}, SigmaCondition::Require);
    } catch (const PreconditionError&) {
      continue;
    }
    ++built;
    const auto t = lattice_triple(b);
    CHECK(support_within(t.w0, t.D0));
    CHECK(support_within(t.w1, t.D));
    CHECK(support_within(t.w2, t.D));
    CHECK_FALSE(t.w0.empty());
    CHECK_FALSE(t.w1 == t.w2);
    check_all_pass(b);
  }
  CHECK(built > 5);
}
