#include "forge/campaign.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <set>

#include "forge/constructions.hpp"
#include "forge/verification.hpp"

namespace forge {

namespace {

constexpr int kMaxDraws = 100000;

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Exact random_coefficient(std::mt19937_64& rng) {
  while (true) {
    const int re = uniform(rng, -3, 3), im = uniform(rng, -3, 3), s = uniform(rng, 1, 4);
    if (re == 0 && im == 0) continue;
    return Exact(Rational(re, s), Rational(im, s));
  }
}

/// Rational points on the unit circle.
Exact random_unit(std::mt19937_64& rng) {
  static const Exact units[] = {
      Exact(1), Exact(-1), Exact(0, 1), Exact(0, -1),
      Exact(Rational(3, 5), Rational(4, 5)), Exact(Rational(4, 5), Rational(-3, 5)),
      Exact(Rational(5, 13), Rational(12, 13)), Exact(Rational(-3, 5), Rational(4, 5)),
  };
  return units[uniform(rng, 0, 7)];
}

LatticePoint random_point(std::mt19937_64& rng, int dim, int reach) {
  LatticePoint x(dim);
  for (int j = 0; j < dim; ++j) x(j) = uniform(rng, -reach, reach);
  return x;
}

LatticeSignal<Exact> random_psi(std::mt19937_64& rng, int dim, int reach) {
  int box = 1;
  for (int j = 0; j < dim; ++j) box *= 2 * reach + 1;
  const int points = uniform(rng, 2, std::min(6, box));
  LatticeSignal<Exact> psi(dim);
  while (static_cast<int>(psi.size()) < points) {
    const LatticePoint x = random_point(rng, dim, reach);
    if (!psi.contains(x)) psi.set(x, random_coefficient(rng));
  }
  return psi;
}

template <typename Build>
bool accepted(Build&& build) {
  try {
    build();
    return true;
  } catch (const PreconditionError&) {
    return false;
  }
}

std::mt19937_64 instance_rng(std::uint64_t seed, int family, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(family), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

std::vector<LatticePoint> nonzero_taps(const Stencil<Exact>& A) {
  std::vector<LatticePoint> out;
  for (const auto& [y, a] : A)
    if (!y.isZero()) out.push_back(y);
  return out;
}

struct Outcome {
  int claims = 0;
  int failures = 0;
  bool conclusion_changed = false;
};

Outcome check(const Bundle<Exact>& b) {
  const auto rep = run_claims(b);
  Outcome o;
  o.claims = static_cast<int>(rep.claims.size());
  for (const auto& c : rep.claims) {
    if (!c.pass) ++o.failures;
    if (!c.pass && c.role == "conclusion") o.conclusion_changed = true;
  }
  return o;
}

}  // namespace

RandomInstance random_theorem1_instance(std::mt19937_64& rng, int dim) {
  for (int draw = 1; draw <= kMaxDraws; ++draw) {
    RandomInstance inst;
    inst.A = Stencil<Exact>(dim);
    const int taps = uniform(rng, 2, 4);
    while (static_cast<int>(inst.A.size()) < taps) {
      const LatticePoint y = random_point(rng, dim, 3);
      if (!inst.A.contains(y)) inst.A.add_tap(y, random_coefficient(rng));
    }
    inst.psi = random_psi(rng, dim, 2);
    inst.attempts = draw;
    if (accepted([&] { theorem1_pair(inst.A, inst.psi); })) return inst;
  }
  throw std::runtime_error("no valid instance drawn");
}

RandomInstance random_theorem2_instance(std::mt19937_64& rng, int dim) {
  for (int draw = 1; draw <= kMaxDraws; ++draw) {
    RandomInstance inst;
    inst.A = Stencil<Exact>(dim);
    if (uniform(rng, 0, 1)) inst.A.add_tap(LatticePoint::Zero(dim), random_coefficient(rng));
    const int pairs = uniform(rng, 1, 2);
    for (int k = 0; k < pairs; ++k) {
      const LatticePoint y = random_point(rng, dim, 3);
      if (y.isZero() || inst.A.contains(y)) continue;
      const Exact a = random_coefficient(rng);
      inst.A.add_tap(y, a);
      inst.A.add_tap(LatticePoint(-y), random_unit(rng) * conj(a));
    }
    if (inst.A.empty()) continue;
    inst.psi = random_psi(rng, dim, 1);
    inst.attempts = draw;
    if (accepted([&] { theorem2_pauli_pair(inst.A, inst.psi); })) return inst;
  }
  throw std::runtime_error("no valid instance drawn");
}

std::optional<RandomInstance> break_modulus_symmetry(const RandomInstance& base, std::mt19937_64& rng) {
  const auto taps = nonzero_taps(base.A);
  if (taps.empty()) return std::nullopt;
  const LatticePoint y = taps[uniform(rng, 0, static_cast<int>(taps.size()) - 1)];
  RandomInstance out = base;
  out.A.set(y, base.A.at(y) * Exact(uniform(rng, 2, 3)));
  return out;
}

std::optional<RandomInstance> break_disjointness(const RandomInstance& base, std::mt19937_64& rng) {
  const auto offsets = base.A.offsets();
  if (offsets.size() < 2) return std::nullopt;
  const int n = static_cast<int>(offsets.size());
  const int i = uniform(rng, 0, n - 1);
  int j = uniform(rng, 0, n - 2);
  if (j >= i) ++j;
  std::vector<LatticePoint> support;
  for (const auto& [x, v] : base.psi) support.push_back(x);
  const LatticePoint x0 = support[uniform(rng, 0, static_cast<int>(support.size()) - 1)];
  // x0 - y_i and x1 - y_j coincide
  const LatticePoint x1 = x0 + offsets[j] - offsets[i];
  RandomInstance out = base;
  out.psi.set(x1, random_coefficient(rng));
  return out;
}

std::optional<RandomInstance> symmetrize_coefficients(const RandomInstance& base, std::mt19937_64& rng) {
  Exact u = random_unit(rng);
  while (u == Exact(-1)) u = random_unit(rng);
  RandomInstance out = base;
  std::set<LatticePoint, LexLess> done;
  for (const auto& [y, a] : base.A) {
    if (done.count(y)) continue;
    const LatticePoint m = -y;
    if (y.isZero()) {
      Exact a0 = a + u * conj(a);
      if (a0.is_zero()) a0 = Exact(1) + u;
      out.A.set(y, a0);
    } else {
      out.A.set(m, u * conj(a));
      done.insert(m);
    }
    done.insert(y);
  }
  return out;
}

bool sampled_torus_equal(const LatticeSignal<Exact>& f, const LatticeSignal<Exact>& g, int points) {
  const int d = f.dim();
  const int n = std::max(2, static_cast<int>(std::lround(std::pow(points, 1.0 / d))));
  LatticeSignal<Complex> fc(d), gc(d);
  for (const auto& [x, v] : f) fc.set(x, to_complex(v));
  for (const auto& [x, v] : g) gc.set(x, to_complex(v));
  double peak = 0, dev = 0;
  std::vector<int> idx(d, 0);
  RealVector p(d);
  while (true) {
    for (int j = 0; j < d; ++j) p(j) = -std::numbers::pi + 2 * std::numbers::pi * idx[j] / n;
    const double a = std::norm(dft_eval(fc, p)), b = std::norm(dft_eval(gc, p));
    peak = std::max(peak, a);
    dev = std::max(dev, std::abs(a - b));
    int j = d - 1;
    while (j >= 0 && ++idx[j] == n) idx[j--] = 0;
    if (j < 0) break;
  }
  return peak > 0 && dev <= 1e-10 * peak;
}

bool CampaignSummary::soft_gate(double threshold) const {
  for (const auto& [name, f] : flips)
    if (f.instances > 0 && f.rate() < threshold) return false;
  return true;
}

CampaignSummary run_campaign(const CampaignConfig& config) {
  for (int d : config.dims)
    if (d < 1 || d > 3) throw std::invalid_argument("campaign dimensions must lie in {1, 2, 3}");
  if (config.dims.empty() && config.theorem1 + config.theorem2 + config.controls > 0)
    throw std::invalid_argument("campaign needs at least one dimension");
  const auto start = std::chrono::steady_clock::now();
  CampaignSummary s;
  s.config = config;
  int index = 0;

  auto record = [&](const std::string& family, int dim, const RandomInstance& inst) {
    InstanceRecord r;
    r.index = index++;
    r.family = family;
    r.dim = dim;
    r.taps = static_cast<int>(inst.A.size());
    r.psi_points = static_cast<int>(inst.psi.size());
    r.attempts = inst.attempts;
    const auto pair = make_pair(Provenance::Thm1, inst.A, inst.psi);
    r.exact_equal = equal_fourier_magnitude(pair.f, pair.g);
    r.sampled_equal = sampled_torus_equal(pair.f, pair.g, config.grid_points);
    if (r.exact_equal != r.sampled_equal) ++s.agreement_mismatches;
    return r;
  };

  const struct {
    const char* name;
    int family;
    int count;
    bool pauli;
  } valid[] = {{"thm1", 1, config.theorem1, false}, {"thm2", 2, config.theorem2, true}};
  for (const auto& v : valid) {
    for (int i = 0; i < v.count; ++i) {
      const int d = config.dims[i % config.dims.size()];
      auto rng = instance_rng(config.seed, v.family, i);
      const auto inst = v.pauli ? random_theorem2_instance(rng, d) : random_theorem1_instance(rng, d);
      auto r = record(v.name, d, inst);
      const auto o = check(v.pauli ? theorem2_pauli_pair(inst.A, inst.psi) : theorem1_pair(inst.A, inst.psi));
      r.claims = o.claims;
      r.failures = o.failures;
      ++s.valid_instances;
      s.valid_failures += o.failures > 0;
      s.records.push_back(r);
    }
  }

  using Perturb = std::optional<RandomInstance> (*)(const RandomInstance&, std::mt19937_64&);
  const struct {
    const char* name;
    int family;
    Perturb perturb;
  } controls[] = {{"control_modulus", 3, &break_modulus_symmetry},
                  {"control_disjoint", 4, &break_disjointness},
                  {"control_symmetric", 5, &symmetrize_coefficients}};
  for (const auto& c : controls) {
    FlipRate& rate = s.flips[c.name];
    for (int i = 0; i < config.controls; ++i) {
      const int d = config.dims[i % config.dims.size()];
      auto rng = instance_rng(config.seed, c.family, i);
      const auto base = random_theorem2_instance(rng, d);
      const auto inst = c.perturb(base, rng);
      if (!inst) {
        ++rate.skipped;
        continue;
      }
      auto r = record(c.name, d, *inst);
      const auto o = check(unchecked_pair_bundle(Provenance::Thm2, inst->A, inst->psi));
      r.claims = o.claims;
      r.failures = o.failures;
      r.flipped = o.conclusion_changed;
      ++rate.instances;
      rate.flipped += r.flipped;
      s.records.push_back(r);
    }
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

ordered_json to_json(const CampaignSummary& s, bool timing) {
  ordered_json j;
  j["seed"] = s.config.seed;
  j["dims"] = s.config.dims;
  j["instances"] = s.records.size();
  j["valid_instances"] = s.valid_instances;
  j["valid_failures"] = s.valid_failures;
  j["agreement_mismatches"] = s.agreement_mismatches;
  j["controls"] = ordered_json::object();
  for (const auto& [name, f] : s.flips)
    j["controls"][name] = {{"instances", f.instances}, {"flipped", f.flipped}, {"skipped", f.skipped},
                           {"flip_rate", f.rate()}};
  j["soft_gate_95"] = s.soft_gate();
  j["pass"] = s.pass();
  if (timing) j["seconds"] = s.seconds;
  return j;
}

void write_csv(std::ostream& out, const CampaignSummary& s) {
  out << "index,family,dim,taps,psi_points,attempts,claims,failures,flipped,exact_equal,sampled_equal\n";
  for (const auto& r : s.records)
    out << r.index << ',' << r.family << ',' << r.dim << ',' << r.taps << ',' << r.psi_points << ',' << r.attempts
        << ',' << r.claims << ',' << r.failures << ',' << r.flipped << ',' << r.exact_equal << ',' << r.sampled_equal
        << '\n';
}

}  // namespace forge
