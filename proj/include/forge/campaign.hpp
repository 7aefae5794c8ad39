#pragma once

// Randomized property campaign over exact Gaussian-rational instances of
// the two pair theorems, with perturbed negative controls.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "forge/bundle.hpp"

namespace forge {

using Exact = GaussianRational;

struct RandomInstance {
  Stencil<Exact> A{1};
  LatticeSignal<Exact> psi{1};
  int attempts = 0;  // draws until the premises held
};

/// Taps in [-3, 3]^d, coefficients (p + q i) / s with small integers, psi
/// with at most 6 points. Redraws until the builder accepts.
RandomInstance random_theorem1_instance(std::mt19937_64& rng, int dim);
RandomInstance random_theorem2_instance(std::mt19937_64& rng, int dim);

/// Controls derived from a valid symmetric-tap instance; nullopt when the
/// perturbation cannot be applied to it.
std::optional<RandomInstance> break_modulus_symmetry(const RandomInstance& base, std::mt19937_64& rng);
std::optional<RandomInstance> break_disjointness(const RandomInstance& base, std::mt19937_64& rng);
std::optional<RandomInstance> symmetrize_coefficients(const RandomInstance& base, std::mt19937_64& rng);

/// |f_hat|^2 vs |g_hat|^2 on `points` samples of the torus (about
/// points^(1/d) per axis); equal when the deviation is <= 1e-10 * peak.
bool sampled_torus_equal(const LatticeSignal<Exact>& f, const LatticeSignal<Exact>& g, int points);

struct CampaignConfig {
  int theorem1 = 500;
  int theorem2 = 500;
  int controls = 200;  // per perturbation class
  std::vector<int> dims{1, 2, 3};
  std::uint64_t seed = 42;
  int grid_points = 4096;
};

struct InstanceRecord {
  int index = 0;
  std::string family;  // thm1, thm2, control_modulus, control_disjoint, control_symmetric
  int dim = 0;
  int taps = 0;
  int psi_points = 0;
  int attempts = 0;
  int claims = 0;
  int failures = 0;       // claims whose outcome differs from the expectation
  bool flipped = false;   // controls: some conclusion changed
  bool exact_equal = false;
  bool sampled_equal = false;
};

struct FlipRate {
  int instances = 0;
  int flipped = 0;
  int skipped = 0;
  double rate() const { return instances ? static_cast<double>(flipped) / instances : 0.0; }
};

struct CampaignSummary {
  CampaignConfig config;
  std::vector<InstanceRecord> records;
  int valid_instances = 0;
  int valid_failures = 0;
  int agreement_mismatches = 0;
  std::map<std::string, FlipRate> flips;
  double seconds = 0;

  bool pass() const { return valid_failures == 0 && agreement_mismatches == 0; }
  bool soft_gate(double threshold = 0.95) const;
};

/// Deterministic under config.seed: each instance draws from its own
/// generator seeded by (seed, family, index).
CampaignSummary run_campaign(const CampaignConfig& config);

ordered_json to_json(const CampaignSummary& summary, bool timing = false);
void write_csv(std::ostream& out, const CampaignSummary& summary);

}  // namespace forge
