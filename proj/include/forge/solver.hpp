#pragma once

// Alternating-projection phase retrieval on a 2^k grid per axis: HIO
// blocks followed by error-reduction blocks, restarted from random guesses.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forge/bundle.hpp"

namespace forge {

struct SolverConfig {
  Eigen::VectorXi support_width;  // box [0, W_j) per axis
  int restarts = 50;
  int iterations = 4000;           // cap per restart
  int block = 50;                  // HIO steps, then as many ER steps
  double beta = 0.9;
  double tolerance = 1e-13;        // stop once the residual drops below
  bool real_signal = false;        // add the realness constraint
  std::optional<int> grid;         // per axis; default smallest 2^k >= 4 W
  std::uint64_t seed = 0;
};

struct SolverRun {
  std::uint64_t seed = 0;
  int iterations = 0;
  double residual = 0;     // || |X| - M || / ||M||
  double distance_f = 0;   // to the trivial-ambiguity orbit of f
  double distance_g = 0;
  std::string landed;      // "f", "g", "both" or "none"
  LatticeSignal<Complex> estimate{1};
};

struct SolverResult {
  int grid = 0;
  std::vector<SolverRun> runs;
  int converged = 0;       // residual <= accept
  int landed_f = 0;
  int landed_g = 0;
  int unresolved = 0;      // converged but on neither orbit
  double accept = 1e-6;
};

/// Smallest power of two >= 4 * width.
int solver_grid(int width);

/// min over shifts, conjugate reflections and unit phases of ||x - T f||.
double orbit_distance(const LatticeSignal<Complex>& x, const LatticeSignal<Complex>& f);

/// |F|^2 on the grid from the autocorrelation (indices taken mod N).
std::vector<double> power_on_grid(const Autocorrelation<Complex>& r, int dim, int grid);

/// Runs the demo on the magnitude data `r`. The reference signals f and g
/// are used only for the landing statistics.
SolverResult solver_demo(const Autocorrelation<Complex>& r, const SolverConfig& config,
                         const LatticeSignal<Complex>& f, const LatticeSignal<Complex>& g, double accept = 1e-6);

ordered_json to_json(const SolverResult& result);

}  // namespace forge
