// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "forge/campaign.hpp"
#include "forge/constructions.hpp"
#include "forge/solver.hpp"
#include "forge/verification.hpp"
#include "support.hpp"

using namespace forge;
using GR = GaussianRational;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

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

Outcome ac1() {
  const auto t0 = Clock::now();
  const auto b = example1(Example1Params<GR>{GR(1), GR(2), GR(1), GR(3), vec({1}), vec({2}), 1.0, Mode::Discrete});
  const auto& f = b.lattice("f");
  const auto& g = b.lattice("g");
  const auto rf = autocorrelation(f), rg = autocorrelation(g);
  const bool associated = find_association(f, g).has_value();
  const double elapsed = seconds_since(t0);

  std::map<long, Complex> dense;
  for (const auto& [x, v] : f) dense[x(0)] = to_complex(v);
  const auto oracle = testing::brute_autocorrelation_1d(dense);
  bool table = rf == rg && rf.size() == oracle.size();
  const long expected[] = {50, 26, 15, 6};
  for (long k = 0; k <= 3; ++k) {
    table = table && rf.at(lattice_point({k})) == GR(expected[k]) && rf.at(lattice_point({-k})) == GR(expected[k]);
    table = table && oracle.at(k) == Complex(expected[k], 0);
  }
  std::ostringstream d;
  d << "r(0..3) = " << to_string(rf.at(lattice_point({0}))) << ", " << to_string(rf.at(lattice_point({1}))) << ", "
    << to_string(rf.at(lattice_point({2}))) << ", " << to_string(rf.at(lattice_point({3})))
    << (table ? " (f and g identical, oracle agrees)" : " (MISMATCH)") << "; association "
    << (associated ? "found" : "absent") << "; " << elapsed << " s";
  return {table && !associated && elapsed < 1.0, d.str()};
}

Outcome ac2() {
  const GR I(0, 1);
  const auto psi = line({{0, GR(1)}, {1, GR(3)}});
  const auto b = theorem2_pauli_pair(taps({{0, I}, {2, GR(1)}, {-2, GR(1)}}), psi);
  const auto& f = b.lattice("f");
  const auto& g = b.lattice("g");
  bool pointwise = f.size() == g.size();
  for (const auto& [x, v] : f) pointwise = pointwise && norm(v) == norm(g.at(x));
  const bool magnitude = autocorrelation(f) == autocorrelation(g);
  const bool associated = find_association(f, g).has_value();

  // rotated closed form for a trivial and a non-trivial unit phase
  bool rotated = true;
  for (const GR& phase : {GR(1), GR(Rational(3, 5), Rational(4, 5))}) {
    Example2Params<GR> p;
    p.a1 = I;
    p.a2 = GR(1);
    p.phase = phase;
    p.y = vec({2});
    p.rho = 0.75;
    p.center = vec({0.5});
    p.psi = psi;
    const auto e = example2(p);
    rotated = rotated && scaled(e.lattice("g"), phase) == e.lattice("g_rotated_closed") &&
              e.lattice("f") == e.lattice("f_closed") && run_claims(e).pass;
  }
  std::ostringstream d;
  d << "|f| = |g| at " << f.size() << " points: " << (pointwise ? "exact" : "NO") << "; autocorrelations "
    << (magnitude ? "equal" : "DIFFER") << "; association " << (associated ? "found" : "absent")
    << "; rotated identity " << (rotated ? "exact" : "BROKEN");
  return {pointwise && magnitude && !associated && rotated, d.str()};
}

Outcome ac3() {
  const auto b = theorem3_background(line({{5, GR(1)}}), line({{-1, GR(1)}, {1, GR(2)}}),
                                     ConvexBody::interval(4.5, 5.5), ConvexBody::interval(-1.5, 1.5));
  const auto& u1 = b.lattice("u1");
  const auto& u2 = b.lattice("u2");
  const bool magnitude = autocorrelation(u1) == autocorrelation(u2);
  const auto w = find_association(u1, u2);
  const bool witness = w && w->kind == AssociationKind::ConjReflect && w->phase == GR(1) && w->shift.isZero();
  const auto geo = check_problem3_geometry(b.body("D0"), b.body("D"), true);
  const bool geometry = std::abs(geo.R - 3) < 1e-12 && std::abs(geo.diam - 7) < 1e-12 && geo.pass;
  std::ostringstream d;
  d << "magnitudes " << (magnitude ? "equal" : "DIFFER") << "; witness "
    << (w ? (w->kind == AssociationKind::ConjReflect ? "conj_reflect" : "shift") : "none");
  if (w) d << " phase " << to_string(w->phase) << " shift " << w->shift(0);
  d << "; R = " << geo.R << ", diam = " << geo.diam;
  return {magnitude && witness && geometry, d.str()};
}

Outcome ac4() {
  const GR I(0, 1);
  const auto A = taps({{0, I}, {2, GR(1)}, {-2, GR(1)}});
  const auto psi = line({{0, GR(1)}, {1, GR(3)}});
  const auto B = ConvexBody::ball(vec({0.5}), 0.75);
  const auto b = theorem4_background(A, psi, B, lattice_point({2}), std::optional<GR>{}, SigmaCondition::Require);
  const bool separated = check_thm4_separation(B, to_real(A.offsets()), vec({2}));
  const double R = distance(b.body("D"), b.body("D0"));
  const double closed = 2.0 - 2 * 0.75;
  const bool associated = find_association(b.lattice("u1"), b.lattice("u2")).has_value();
  const bool verified = run_claims(b).pass;

  const auto dropped = theorem4_background(A, psi, B, lattice_point({2}), std::optional<GR>{}, SigmaCondition::Drop);
  std::vector<std::string> reduced, expected;
  for (const auto& c : dropped.claims) reduced.push_back(c.name);
  for (const auto& c : b.claims)
    if (c.name != "sigma_not_self_associated" && c.name != "background_not_associated") expected.push_back(c.name);
  const bool drop_ok = reduced == expected && run_claims(dropped).pass;

  std::ostringstream d;
  d.precision(12);
  d << "separation " << (separated ? "holds" : "FAILS") << "; R = " << R << " vs |y| - 2 rho = " << closed
    << "; association " << (associated ? "found" : "absent") << "; claims " << (verified ? "pass" : "FAIL")
    << "; dropped-condition set " << reduced.size() << " claims " << (drop_ok ? "as expected" : "WRONG");
  return {separated && std::abs(R - closed) <= 1e-10 && !associated && verified && drop_ok, d.str()};
}

Outcome ac5() {
  CampaignConfig c;
  if (const char* s = std::getenv("FORGE_SEED")) c.seed = std::stoull(s);
  const auto t0 = Clock::now();
  const auto summary = run_campaign(c);
  const double elapsed = seconds_since(t0);
  int thm1 = 0, thm2 = 0;
  for (const auto& r : summary.records) {
    thm1 += r.family == "thm1";
    thm2 += r.family == "thm2";
  }
  std::ostringstream d;
  d.precision(3);
  d << thm1 << " + " << thm2 << " valid instances, " << summary.valid_failures << " claim failures, "
    << summary.agreement_mismatches << " exact/sampled mismatches, " << elapsed << " s; flip rates:";
  for (const auto& [family, rate] : summary.flips) d << " " << family << "=" << rate.rate();
  d << "; soft gate 95% " << (summary.soft_gate(0.95) ? "met" : "not met");
  return {summary.pass() && thm1 == c.theorem1 && thm2 == c.theorem2 && elapsed < 60.0, d.str()};
}

Outcome ac6() {
  const auto b = example1(
      Example1Params<Complex>{Complex(1), Complex(2), Complex(1), Complex(3), vec({1}), vec({2}), 0.25, Mode::Continuous});
  const auto cmp = sampled_magnitude_equal(b.continuous("f"), b.continuous("g"), 4096);

  const auto lattice =
      example1(Example1Params<Complex>{Complex(1), Complex(2), Complex(1), Complex(3), vec({1}), vec({2}), 1.0,
                                       Mode::Discrete});
  double worst = 0;
  bool round_trip = true;
  testing::Rng rng(2024);
  for (const char* name : {"f", "g"}) {
    const auto& v = lattice.lattice(name);
    const auto u = delta_train(v);
    const auto back = lattice_reduce(u);
    round_trip = round_trip && back == v;
    for (int k = 0; k < 64; ++k) {
      const RealVector p = testing::random_vector(rng, 1, std::numbers::pi);
      worst = std::max(worst, std::abs(std::norm(ft_eval(u, p)) - std::norm(dft_eval(back, p))));
    }
  }
  std::ostringstream d;
  d << cmp.samples << " samples, max deviation " << cmp.max_deviation << " vs peak " << cmp.peak
    << " (ratio " << cmp.max_deviation / cmp.peak << "); lattice_reduce round trip "
    << (round_trip ? "exact" : "BROKEN") << ", magnitude gap " << worst << " at 64 points";
  return {cmp.samples == 4096 && cmp.max_deviation <= 1e-10 * cmp.peak && round_trip && worst <= 1e-12, d.str()};
}

Outcome ac7() {
  const auto b = example1(Example1Params<GR>{GR(1), GR(2), GR(1), GR(3), vec({1}), vec({2}), 1.0, Mode::Discrete});
  const auto f = testing::to_float(b.lattice("f")), g = testing::to_float(b.lattice("g"));
  SolverConfig c;
  c.support_width = Eigen::VectorXi::Constant(1, 4);
  c.restarts = 50;
  c.real_signal = true;
  c.seed = 42;
  if (const char* s = std::getenv("FORGE_SEED")) c.seed = std::stoull(s);
  const auto res = solver_demo(autocorrelation(f), c, f, g, 1e-6);
  bool landed = true;
  for (const auto& r : res.runs)
    if (r.residual <= 1e-6) landed = landed && std::min(r.distance_f, r.distance_g) <= 1e-6;
  std::ostringstream d;
  d << res.converged << "/" << res.runs.size() << " restarts converged on a " << res.grid << "-point grid; landed f="
    << res.landed_f << " g=" << res.landed_g << " unresolved=" << res.unresolved;
  return {res.converged >= 1 && res.unresolved == 0 && landed, d.str()};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << name << " " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
