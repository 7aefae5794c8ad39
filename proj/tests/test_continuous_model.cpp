#include <doctest.h>

#include "forge/constructions.hpp"
#include "support.hpp"

using namespace forge;
using namespace testing;

namespace {

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index j = 0;
  for (double x : v) out(j++) = x;
  return out;
}

ContinuousSignal<Complex> random_boxes(Rng& rng, int dim, int count) {
  ContinuousSignal<Complex> w(dim);
  // place atoms on a coarse grid so the closures stay disjoint
  for (int k = 0; k < count; ++k) {
    const RealVector c = 3.0 * random_point(rng, dim, 3).cast<double>();
    const bool taken = std::any_of(w.atoms().begin(), w.atoms().end(),
                                   [&](const auto& a) { return (a.geometry.center - c).norm() < 1e-9; });
    if (!taken)
      w.add(AtomGeometry::box(c, RealVector::Constant(dim, uniform_real(rng, 0.2, 1.0))), random_scalar<Complex>(rng));
  }
  return w;
}

/// Midpoint-rule quadrature of (2 pi)^{-1} int e^{ipx} w(x) dx for a 1-d box signal.
Complex quadrature_ft(const ContinuousSignal<Complex>& w, double p) {
  Complex acc(0, 0);
  for (const auto& atom : w.atoms()) {
    const double lo = atom.geometry.center(0) - atom.geometry.halfwidth(0);
    const double width = 2 * atom.geometry.halfwidth(0);
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
      const double x = lo + width * (k + 0.5) / n;
      acc += atom.coef * std::polar(1.0, p * x) * (width / n);
    }
  }
  return acc / (2 * std::numbers::pi);
}

}  // namespace

TEST_CASE("box transform") {
  ContinuousSignal<Complex> unit(1);
  unit.add(AtomGeometry::box(vec({0}), vec({0.5})), Complex(1, 0));
  CHECK(std::abs(ft_eval(unit, vec({0})) - 1 / (2 * std::numbers::pi)) < 1e-15);
  CHECK(std::abs(ft_eval(unit, vec({2 * std::numbers::pi}))) < 1e-15);

  ContinuousSignal<Complex> dirac(2);
  dirac.add(AtomGeometry::dirac(vec({1, -2})), Complex(0, 1));
  const RealVector p = vec({0.4, 1.3});
  CHECK(std::abs(ft_eval(dirac, p) - Complex(0, 1) * std::polar(1.0, p.dot(vec({1, -2}))) /
                                         std::pow(2 * std::numbers::pi, 2)) < 1e-15);
}

TEST_CASE("property: shift rule at 64 random frequencies") {
  Rng rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 3;
    const auto w = random_boxes(rng, d, 4);
    const RealVector y = random_vector(rng, d, 3.0);
    const auto ws = shifted(w, y);
    for (int k = 0; k < 64; ++k) {
      const RealVector p = random_vector(rng, d, 10.0);
      const Complex expect = std::polar(1.0, p.dot(y)) * ft_eval(w, p);
      CHECK(std::abs(ft_eval(ws, p) - expect) <= 1e-12 * (1 + std::abs(expect)));
    }
  }
}

TEST_CASE("property: closed-form transform matches quadrature") {
  Rng rng(37);
  for (int trial = 0; trial < 6; ++trial) {
    const auto w = random_boxes(rng, 1, 3);
    for (int k = 0; k < 8; ++k) {
      const double p = uniform_real(rng, -8, 8);
      CHECK(std::abs(ft_eval(w, vec({p})) - quadrature_ft(w, p)) < 1e-6);
    }
  }
}

TEST_CASE("property: continuous symbol identities") {
  Rng rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 3;
    ContinuousStencil<Complex> A(d);
    const int taps = uniform(rng, 1, 3);
    while (static_cast<int>(A.size()) < taps) {
      const RealVector y = random_vector(rng, d, 2.5);
      if (!A.coefficient(y)) A.add_tap(y, random_scalar<Complex>(rng));
    }
    const auto psi = random_boxes(rng, d, 3);
    const auto f = apply_continuous(A, psi), g = apply_continuous_adjoint(A, psi);
    for (int k = 0; k < 64; ++k) {
      const RealVector p = random_vector(rng, d, 6.0);
      const Complex s = sigma_hat(A, p), h = ft_eval(psi, p);
      CHECK(std::abs(ft_eval(f, p) - s * h) <= 1e-12 * (1 + std::abs(s * h)));
      CHECK(std::abs(ft_eval(g, p) - std::conj(s) * h) <= 1e-12 * (1 + std::abs(s * h)));
    }
  }
}

TEST_CASE("lattice_reduce") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const auto v = random_signal<GaussianRational>(rng, d, uniform(rng, 1, 6), 4);
    const auto u = delta_train(v);
    CHECK(lattice_reduce(u) == v);
    const auto vf = to_float(v);
    const auto uf = delta_train(vf);
    for (int k = 0; k < 64; ++k) {
      const RealVector p = random_vector(rng, d, std::numbers::pi);
      CHECK(std::abs(ft_eval(uf, p) - dft_eval(vf, p)) <= 1e-12);
    }
  }
  CHECK(lattice_reduce(ContinuousSignal<Complex>(2)).empty());

  ContinuousSignal<Complex> off(1);
  off.add(AtomGeometry::dirac(vec({0.5})), Complex(1, 0));
  CHECK_THROWS_AS(lattice_reduce(off), std::invalid_argument);
  ContinuousSignal<Complex> box(1);
  box.add(AtomGeometry::box(vec({0}), vec({0.5})), Complex(1, 0));
  CHECK_THROWS_AS(lattice_reduce(box), std::invalid_argument);
}

TEST_CASE("sampled magnitude comparison") {
  Example1Params<Complex> p{Complex(1), Complex(2), Complex(1), Complex(3), vec({1}), vec({2}), 0.25, Mode::Continuous};
  const auto b = example1(p);
  const auto& f = b.continuous("f");
  const auto& g = b.continuous("g");
  const auto cmp = sampled_magnitude_equal(f, g, 4096);
  CHECK(cmp.equal);
  CHECK(cmp.samples == 4096);
  CHECK(cmp.max_deviation <= 1e-10 * cmp.peak);

  CHECK_FALSE(sampled_magnitude_equal(f, scaled(f, Complex(2)), 4096).equal);
  CHECK(sampled_magnitude_equal(f, scaled(shifted(f, vec({1.75})), std::polar(1.0, 0.4)), 4096).equal);
  CHECK(sampled_magnitude_equal(f, conj_reflected(f, vec({-0.3})), 4096).equal);
  CHECK_FALSE(find_association(f, g));
}

TEST_CASE("pointwise modulus") {
  Example2Params<Complex> p;
  p.a1 = Complex(0, 1);
  p.a2 = Complex(1, 0);
  p.y = vec({2});
  p.rho = 0.75;
  p.center = vec({0.5});
  p.mode = Mode::Continuous;
  p.two_bump = TwoBumpPsi<Complex>{Complex(1), Complex(3), vec({1.0}), 0.25};
  const auto b = example2(p);
  const auto& f = b.continuous("f");
  const auto& g = b.continuous("g");
  CHECK(pointwise_modulus_equal(f, g));
  CHECK(pointwise_modulus_equal(f, scaled(f, std::polar(1.0, 1.1))));

  ContinuousSignal<Complex> doubled(1);
  for (const auto& atom : g.atoms()) doubled.add(atom.geometry, atom.coef);
  doubled.add(g.atoms().front().geometry, g.atoms().front().coef);
  CHECK_FALSE(pointwise_modulus_equal(f, doubled));
}

TEST_CASE("overlapping atoms") {
  ContinuousSignal<Complex> w(1);
  w.add(AtomGeometry::box(vec({0}), vec({1})), Complex(1, 0));
  w.add(AtomGeometry::box(vec({1}), vec({1})), Complex(2, 0));
  CHECK(w.has_overlaps());
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w.declare_overlap();
  CHECK_NOTHROW(w.validate());
  CHECK_THROWS_AS(pointwise_modulus_equal(w, w), std::invalid_argument);
  CHECK_THROWS_AS(find_association(w, w), std::invalid_argument);

  CHECK_THROWS_AS(AtomGeometry::box(vec({0}), vec({0})), std::invalid_argument);
  CHECK_THROWS_AS(AtomGeometry::box(vec({0, 0}), vec({1})), DimensionMismatch);
}

TEST_CASE("continuous association witnesses") {
  Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const auto f = random_boxes(rng, d, 4);
    if (f.empty()) continue;
    const RealVector y = random_vector(rng, d, 2.0);
    const Complex u = std::polar(1.0, uniform_real(rng, -3, 3));
    const auto g = trial % 2 ? scaled(shifted(f, y), u) : scaled(conj_reflected(f, y), u);
    const auto w = find_association(f, g);
    REQUIRE(w);
    CHECK(approx_equal(apply_witness(*w, f), g));
  }
}
