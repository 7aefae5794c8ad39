#include <doctest.h>

#include "support.hpp"

using namespace forge;
using namespace testing;
using GR = GaussianRational;

namespace {

LatticeSignal<GR> line(std::initializer_list<std::pair<long, long>> values) {
  LatticeSignal<GR> w(1);
  for (const auto& [x, v] : values) w.set(lattice_point({x}), GR(v));
  return w;
}

const LatticeSignal<GR> kF = line({{-1, 2}, {0, 1}, {1, 6}, {2, 3}});
const LatticeSignal<GR> kG = line({{0, 1}, {1, 2}, {2, 3}, {3, 6}});

}  // namespace

TEST_CASE("gaussian rationals: arithmetic and canonical form") {
  const GR a(Rational(1, 2), Rational(-3, 4));
  const GR b(Rational(2, 4), Rational(-6, 8));
  CHECK(a == b);
  CHECK(to_string(a) == "1/2-3/4i");
  CHECK(a * conj(a) == GR(Rational(13, 16)));
  CHECK(norm(a) == Rational(13, 16));
  CHECK((a / a) == GR(1));
  CHECK_THROWS_AS(a / GR(0), std::domain_error);
  CHECK(parse_complex(to_string(GR(0, 1))).exact_value == GR(0, 1));
  CHECK(parse_complex(to_string(GR(0, -1))).exact_value == GR(0, -1));
}

TEST_CASE("complex literal parsing") {
  struct Case {
    const char* text;
    bool exact;
    Complex value;
  } cases[] = {{"3", true, {3, 0}},        {"-1/2", true, {-0.5, 0}},       {"2i", true, {0, 2}},
               {"-i", true, {0, -1}},      {"1/2-3/4i", true, {0.5, -0.75}}, {"0.25+1.5i", false, {0.25, 1.5}},
               {"1e-3", false, {1e-3, 0}}, {"i", true, {0, 1}}};
  for (const auto& c : cases) {
    CAPTURE(c.text);
    const auto p = parse_complex(c.text);
    CHECK(p.exact == c.exact);
    CHECK(std::abs(p.value - c.value) < 1e-15);
    if (c.exact) CHECK(std::abs(to_complex(p.exact_value) - c.value) < 1e-15);
  }
  CHECK_THROWS_AS(parse_complex("1+"), std::invalid_argument);
  CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_complex("1/0"), std::invalid_argument);
}

TEST_CASE("apply_stencil examples") {
  SUBCASE("identity stencil") {
    Rng rng(1);
    const auto psi = random_signal<GR>(rng, 2, 5, 3);
    CHECK(apply_stencil(Stencil<GR>(2, {{lattice_point({0, 0}), GR(1)}}), psi) == psi);
  }
  SUBCASE("two taps on delta_0 + 3 delta_2") {
    const Stencil<GR> A(1, {{lattice_point({0}), GR(1)}, {lattice_point({1}), GR(2)}});
    const auto psi = line({{0, 1}, {2, 3}});
    CHECK(apply_stencil(A, psi) == kF);
    CHECK(apply_adjoint(A, psi) == kG);
  }
  SUBCASE("cancellation against the convolution oracle") {
    const Stencil<GR> A(1, {{lattice_point({0}), GR(1)}, {lattice_point({1}), GR(-1)}});
    const auto psi = line({{0, 1}, {1, 1}});
    const auto f = apply_stencil(A, psi);
    CHECK(f == brute_apply(A, psi, false, 4));
    CHECK(f == line({{-1, -1}, {1, 1}}));
  }
  SUBCASE("adjoint conjugates a single tap") {
    const Stencil<GR> A(1, {{lattice_point({0}), GR(0, 1)}});
    CHECK(apply_adjoint(A, delta<GR>(lattice_point({0}))) == delta<GR>(lattice_point({0}), GR(0, -1)));
  }
}

TEST_CASE("property: stencil action matches the convolution oracle") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 3;
    const auto A = random_stencil<GR>(rng, d, uniform(rng, 1, 4), 2);
    const auto psi = random_signal<GR>(rng, d, uniform(rng, 1, 5), 2);
    CHECK(apply_stencil(A, psi) == brute_apply(A, psi, false, 4));
    CHECK(apply_adjoint(A, psi) == brute_apply(A, psi, true, 4));
  }
}

TEST_CASE("property: adjoint identity holds exactly") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 3;
    const auto A = random_stencil<GR>(rng, d, uniform(rng, 1, 4), 3);
    const auto psi = random_signal<GR>(rng, d, uniform(rng, 1, 6), 3);
    const auto chi = random_signal<GR>(rng, d, uniform(rng, 1, 6), 3);
    CHECK(inner_product(apply_stencil(A, psi), chi) == inner_product(psi, apply_adjoint(A, chi)));
  }
}

TEST_CASE("symbol") {
  CHECK(std::abs(sigma_hat(Stencil<GR>(1, {{lattice_point({0}), GR(3, 2)}}), RealVector::Constant(1, 0.7)) -
                 Complex(3, 2)) < 1e-15);
  const Stencil<GR> two(1, {{lattice_point({0}), GR(1)}, {lattice_point({1}), GR(1)}});
  CHECK(std::abs(sigma_hat(two, RealVector::Constant(1, std::numbers::pi))) < 1e-15);
}

TEST_CASE("property: symbol identities at 128 random frequencies") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 3;
    const auto A = random_stencil<Complex>(rng, d, uniform(rng, 1, 4), 3);
    const auto psi = random_signal<Complex>(rng, d, uniform(rng, 1, 6), 3);
    const auto f = apply_stencil(A, psi), g = apply_adjoint(A, psi);
    for (int k = 0; k < 128; ++k) {
      const RealVector p = random_vector(rng, d, std::numbers::pi);
      const Complex s = sigma_hat(A, p), h = dft_eval(psi, p);
      const double scale = std::max(1e-300, std::abs(s * h)) + std::abs(h);
      CHECK(std::abs(dft_eval(f, p) - s * h) <= 1e-12 * scale);
      CHECK(std::abs(dft_eval(g, p) - std::conj(s) * h) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("dft_eval") {
  const double c = std::pow(2 * std::numbers::pi, -2);
  const RealVector p = (RealVector(2) << 0.3, -1.1).finished();
  CHECK(std::abs(dft_eval(delta<Complex>(lattice_point({0, 0})), p) - c) < 1e-15);
  const LatticePoint y = lattice_point({2, -3});
  CHECK(std::abs(dft_eval(delta<Complex>(y), p) - c * std::polar(1.0, p.dot(to_real(y)))) < 1e-15);

  Rng rng(3);
  const auto w = random_signal<Complex>(rng, 2, 6, 3);
  CHECK(std::abs(dft_eval(w, p) - brute_dft(w, p)) < 1e-14);

  SUBCASE("Parseval on a 4096-point grid") {
    const auto v = random_signal<Complex>(rng, 1, 6, 5);
    const int n = 4096;
    double integral = 0, energy = 0;
    for (int k = 0; k < n; ++k) {
      const RealVector q = RealVector::Constant(1, -std::numbers::pi + 2 * std::numbers::pi * k / n);
      integral += std::norm(dft_eval(v, q)) * (2 * std::numbers::pi / n);
    }
    for (const auto& [x, val] : v) energy += std::norm(val);
    CHECK(std::abs(2 * std::numbers::pi * integral - energy) <= 1e-6 * energy);
  }
}

TEST_CASE("autocorrelation tables") {
  CHECK(autocorrelation(delta<GR>(lattice_point({4}))) ==
        [] {
          Autocorrelation<GR> r(1);
          r.set(lattice_point({0}), GR(1));
          return r;
        }());

  std::map<long, Complex> dense_f, dense_g;
  for (const auto& [x, v] : kF) dense_f[x(0)] = to_complex(v);
  for (const auto& [x, v] : kG) dense_g[x(0)] = to_complex(v);
  const auto oracle_f = brute_autocorrelation_1d(dense_f), oracle_g = brute_autocorrelation_1d(dense_g);
  const long expected[] = {50, 26, 15, 6};
  for (long k = 0; k <= 3; ++k) {
    CHECK(oracle_f.at(k) == Complex(expected[k], 0));
    CHECK(oracle_f.at(-k) == Complex(expected[k], 0));
    CHECK(oracle_g.at(k) == oracle_f.at(k));
  }
  const auto rf = autocorrelation(kF), rg = autocorrelation(kG);
  CHECK(rf == rg);
  CHECK(rf.size() == 7);
  for (const auto& [k, v] : rf) CHECK(to_complex(v) == oracle_f.at(k(0)));
  CHECK(rf.is_hermitian());
}

TEST_CASE("equal_fourier_magnitude") {
  CHECK(equal_fourier_magnitude(kF, kG));
  const auto cmp = compare_fourier_magnitude(kF, scaled(kF, GR(2)));
  CHECK_FALSE(cmp.equal);
  CHECK(cmp.lag == lattice_point({0}));
  CHECK(cmp.lhs == GR(50));
  CHECK(cmp.rhs == GR(200));
  CHECK(equal_fourier_magnitude(kF, conj_reflected(kF, lattice_point({3}))));
  CHECK_FALSE(equal_fourier_magnitude(LatticeSignal<GR>(1), LatticeSignal<GR>(1)));
}

TEST_CASE("property: exact and sampled magnitude verdicts agree") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto A = random_stencil<GR>(rng, 1, uniform(rng, 1, 3), 3);
    const auto psi = random_signal<GR>(rng, 1, uniform(rng, 1, 4), 3);
    // alternate between a stencil pair and an arbitrary pair
    const auto f = apply_stencil(A, psi);
    const auto g = trial % 2 ? apply_adjoint(A, psi) : random_signal<GR>(rng, 1, uniform(rng, 1, 4), 3);
    if (f.empty() || g.empty()) continue;
    const auto ff = to_float(f), gf = to_float(g);
    double dev = 0;
    for (int k = 0; k < 4096; ++k) {
      const RealVector p = RealVector::Constant(1, -std::numbers::pi + 2 * std::numbers::pi * k / 4096);
      dev = std::max(dev, std::abs(std::norm(brute_dft(ff, p)) - std::norm(brute_dft(gf, p))));
    }
    CHECK(equal_fourier_magnitude(f, g) == (dev <= 1e-10));
  }
}

TEST_CASE("property: autocorrelations are Hermitian") {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 3;
    CHECK(autocorrelation(random_signal<GR>(rng, d, uniform(rng, 1, 6), 3)).is_hermitian());
    CHECK(autocorrelation(random_signal<Complex>(rng, d, uniform(rng, 1, 6), 3)).is_hermitian());
  }
}

TEST_CASE("find_association examples") {
  Rng rng(23);
  const auto f = random_signal<Complex>(rng, 2, 5, 3);
  const Complex u = std::polar(1.0, std::numbers::pi / 3);
  const LatticePoint y = lattice_point({2, 5});
  const auto w = find_association(f, scaled(shifted(f, y), u));
  REQUIRE(w);
  CHECK(w->kind == AssociationKind::Shift);
  CHECK(w->shift == y);
  CHECK(std::abs(w->alpha() - std::numbers::pi / 3) < 1e-12);

  const auto fe = random_signal<GR>(rng, 1, 4, 3);
  const auto r = find_association(fe, conj_reflected(fe));
  REQUIRE(r);
  if (fe.size() > 0 && r->kind == AssociationKind::ConjReflect) {
    CHECK(r->shift == lattice_point({0}));
    CHECK(r->phase == GR(1));
  }
  CHECK(apply_witness(*r, fe) == conj_reflected(fe));

  CHECK_FALSE(find_association(kF, kG));
  CHECK_THROWS_AS(find_association(kF, LatticeSignal<GR>(1)), std::invalid_argument);
}

TEST_CASE("is_self_conj_associated examples") {
  CHECK(is_self_conj_associated(delta<GR>(lattice_point({0}))));
  CHECK_FALSE(is_self_conj_associated(line({{0, 1}, {1, 3}})));
  const Stencil<GR> sigma_ex1(1, {{lattice_point({0}), GR(1)}, {lattice_point({1}), GR(2)}});
  CHECK_FALSE(is_self_conj_associated(sigma_signal(sigma_ex1)));
}

TEST_CASE("property: association witnesses reconstruct and f is associated to itself") {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 3;
    const auto f = random_signal<GR>(rng, d, uniform(rng, 1, 6), 3);
    const auto self = find_association(f, f);
    REQUIRE(self);
    CHECK(self->kind == AssociationKind::Shift);
    CHECK(self->phase == GR(1));
    CHECK(self->shift.isZero());

    static const GR units[] = {GR(1), GR(-1), GR(0, 1), GR(Rational(3, 5), Rational(4, 5))};
    const GR u = units[uniform(rng, 0, 3)];
    const LatticePoint y = random_point(rng, d, 4);
    const auto g = trial % 2 ? scaled(shifted(f, y), u) : scaled(conj_reflected(f, y), u);
    const auto w = find_association(f, g);
    REQUIRE(w);
    CHECK(apply_witness(*w, f) == g);
    CHECK(equal_fourier_magnitude(f, g));
  }
}

TEST_CASE("floating mode prunes cancellation noise") {
  LatticeSignal<Complex> w(1);
  w.set(lattice_point({0}), Complex(1, 0));
  w.set(lattice_point({1}), Complex(1e-16, 0));
  w.prune();
  CHECK(w.size() == 1);
  LatticeSignal<GR> e(1);
  e.set(lattice_point({0}), GR(0));
  CHECK(e.empty());
}
