#include "forge/solver.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <random>
#include <set>

namespace forge {

namespace {

using Buffer = std::vector<Complex>;

/// Row-major grid of side n in `dim` dimensions, last axis fastest.
struct Grid {
  int dim;
  int n;
  std::size_t size;

  Grid(int d, int side) : dim(d), n(side), size(1) {
    for (int j = 0; j < d; ++j) size *= static_cast<std::size_t>(side);
  }

  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int j = axis + 1; j < dim; ++j) s *= n;
    return s;
  }

  std::size_t index(const LatticePoint& x) const {
    std::size_t idx = 0;
    for (int j = 0; j < dim; ++j) {
      const auto m = ((x(j) % n) + n) % n;
      idx = idx * n + static_cast<std::size_t>(m);
    }
    return idx;
  }

  LatticePoint point(std::size_t idx) const {
    LatticePoint x(dim);
    for (int j = dim - 1; j >= 0; --j) {
      x(j) = static_cast<std::int64_t>(idx % n);
      idx /= n;
    }
    return x;
  }
};

void fft_nd(const Grid& g, Buffer& data, bool inverse) {
  Eigen::FFT<double> fft;
  Buffer line(g.n), out(g.n);
  for (int axis = 0; axis < g.dim; ++axis) {
    const std::size_t s = g.stride(axis);
    const std::size_t block = s * g.n;
    for (std::size_t base = 0; base < g.size; base += block) {
      for (std::size_t off = 0; off < s; ++off) {
        for (int k = 0; k < g.n; ++k) line[k] = data[base + off + k * s];
        if (inverse)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (int k = 0; k < g.n; ++k) data[base + off + k * s] = out[k];
      }
    }
  }
}

double squared_norm(const LatticeSignal<Complex>& w) {
  double s = 0;
  for (const auto& [x, v] : w) s += std::norm(v);
  return s;
}

}  // namespace

int solver_grid(int width) {
  if (width < 1) throw std::invalid_argument("support width must be positive");
  int n = 1;
  while (n < 4 * width) n *= 2;
  return n;
}

std::vector<double> power_on_grid(const Autocorrelation<Complex>& r, int dim, int grid) {
  const Grid g(dim, grid);
  Buffer data(g.size, Complex(0, 0));
  for (const auto& [k, v] : r) data[g.index(k)] += v;
  fft_nd(g, data, false);
  std::vector<double> out(g.size);
  for (std::size_t i = 0; i < g.size; ++i) out[i] = std::max(0.0, data[i].real());
  return out;
}

double orbit_distance(const LatticeSignal<Complex>& x, const LatticeSignal<Complex>& f) {
  const double nx = squared_norm(x), nf = squared_norm(f);
  if (x.empty() || f.empty()) return std::sqrt(nx + nf);
  // pick the transform T maximizing |<x, T f>|, then measure ||x - u T f|| directly
  double best = -1;
  bool best_reflect = false;
  LatticePoint best_y;
  Complex best_s;
  std::set<LatticePoint, LexLess> shifts, reflections;
  for (const auto& [a, va] : x)
    for (const auto& [b, vb] : f) {
      shifts.insert(a - b);
      reflections.insert(a + b);
    }
  auto consider = [&](const LatticePoint& y, bool reflect) {
    Complex s(0, 0);
    for (const auto& [b, vb] : f)
      s += reflect ? std::conj(x.at(y - b)) * std::conj(vb) : std::conj(x.at(b + y)) * vb;
    if (std::abs(s) > best) best = std::abs(s), best_reflect = reflect, best_y = y, best_s = s;
  };
  for (const auto& y : shifts) consider(y, false);
  for (const auto& y : reflections) consider(y, true);

  const Complex u = best > 0 ? std::conj(best_s) / best : Complex(1, 0);
  LatticeSignal<Complex> diff = x;
  for (const auto& [b, vb] : f) {
    if (best_reflect)
      diff.add(best_y - b, -u * std::conj(vb));
    else
      diff.add(b + best_y, -u * vb);
  }
  return std::sqrt(squared_norm(diff));
}

SolverResult solver_demo(const Autocorrelation<Complex>& r, const SolverConfig& config,
                         const LatticeSignal<Complex>& f, const LatticeSignal<Complex>& g, double accept) {
  const int dim = r.dim();
  if (config.support_width.size() != dim) throw DimensionMismatch(dim, config.support_width.size());
  if (config.restarts < 0 || config.iterations < 0 || config.block < 1)
    throw std::invalid_argument("solver: restarts and iterations must be nonnegative, block positive");
  const int widest = config.support_width.maxCoeff();
  SolverResult result;
  result.accept = accept;
  result.grid = config.grid.value_or(solver_grid(widest));
  if (result.grid < 4 * widest || (result.grid & (result.grid - 1)) != 0)
    throw std::invalid_argument("solver: grid " + std::to_string(result.grid) +
                                " is too small or not a power of two (need 2^k >= " + std::to_string(4 * widest) + ")");
  // the lag table must fit without wrapping
  for (const auto& [k, v] : r)
    for (int j = 0; j < dim; ++j)
      if (std::abs(k(j)) >= config.support_width(j))
        throw std::invalid_argument("solver: support box narrower than the autocorrelation");

  const Grid grid(dim, result.grid);
  const auto power = power_on_grid(r, dim, result.grid);
  std::vector<double> M(grid.size);
  double m_norm = 0;
  for (std::size_t i = 0; i < grid.size; ++i) {
    M[i] = std::sqrt(power[i]);
    m_norm += power[i];
  }
  m_norm = std::sqrt(m_norm);

  std::vector<char> inside(grid.size, 0);
  for (std::size_t i = 0; i < grid.size; ++i) {
    const LatticePoint x = grid.point(i);
    bool in = true;
    for (int j = 0; j < dim; ++j) in = in && x(j) < config.support_width(j);
    inside[i] = in;
  }

  auto residual_of = [&](const Buffer& x) {
    Buffer X = x;
    fft_nd(grid, X, false);
    double s = 0;
    for (std::size_t i = 0; i < grid.size; ++i) s += std::pow(std::abs(X[i]) - M[i], 2);
    return std::sqrt(s) / m_norm;
  };

  auto magnitude_projection = [&](const Buffer& x) {
    Buffer X = x;
    fft_nd(grid, X, false);
    for (std::size_t i = 0; i < grid.size; ++i) {
      const double a = std::abs(X[i]);
      X[i] = a > 0 ? X[i] * (M[i] / a) : Complex(M[i], 0);
    }
    fft_nd(grid, X, true);
    return X;
  };

  for (int restart = 0; restart < config.restarts; ++restart) {
    SolverRun run;
    run.seed = config.seed + static_cast<std::uint64_t>(restart);
    run.estimate = LatticeSignal<Complex>(dim);
    Buffer x(grid.size, Complex(0, 0));

    if (m_norm == 0) {
      run.residual = 0;
    } else {
      std::mt19937_64 rng(run.seed);
      std::normal_distribution<double> normal;
      for (std::size_t i = 0; i < grid.size; ++i)
        if (inside[i]) x[i] = Complex(normal(rng), config.real_signal ? 0.0 : normal(rng));

      run.residual = residual_of(x);
      while (run.iterations < config.iterations && run.residual > config.tolerance) {
        for (int step = 0; step < config.block; ++step) {  // HIO
          const Buffer y = magnitude_projection(x);
          for (std::size_t i = 0; i < grid.size; ++i) {
            if (!inside[i]) {
              x[i] -= config.beta * y[i];
            } else if (config.real_signal) {
              x[i] = Complex(y[i].real(), x[i].imag() - config.beta * y[i].imag());
            } else {
              x[i] = y[i];
            }
          }
        }
        for (int step = 0; step < config.block; ++step) {  // error reduction
          const Buffer y = magnitude_projection(x);
          for (std::size_t i = 0; i < grid.size; ++i)
            x[i] = !inside[i] ? Complex(0, 0) : config.real_signal ? Complex(y[i].real(), 0) : y[i];
        }
        run.iterations += 2 * config.block;
        run.residual = residual_of(x);
      }
    }

    for (std::size_t i = 0; i < grid.size; ++i)
      if (inside[i] && x[i] != Complex(0, 0)) run.estimate.set(grid.point(i), x[i]);
    run.distance_f = orbit_distance(run.estimate, f);
    run.distance_g = orbit_distance(run.estimate, g);
    const bool near_f = run.distance_f <= accept, near_g = run.distance_g <= accept;
    run.landed = near_f && near_g ? "both" : near_f ? "f" : near_g ? "g" : "none";

    if (run.residual <= accept) {
      ++result.converged;
      if (near_f) ++result.landed_f;
      if (near_g) ++result.landed_g;
      if (!near_f && !near_g) ++result.unresolved;
    }
    result.runs.push_back(std::move(run));
  }
  return result;
}

ordered_json to_json(const SolverResult& result) {
  ordered_json j;
  j["grid"] = result.grid;
  j["accept"] = result.accept;
  j["restarts"] = result.runs.size();
  j["converged"] = result.converged;
  j["landed_f"] = result.landed_f;
  j["landed_g"] = result.landed_g;
  j["unresolved"] = result.unresolved;
  j["runs"] = ordered_json::array();
  for (const auto& r : result.runs)
    j["runs"].push_back({{"seed", r.seed},
                         {"iterations", r.iterations},
                         {"residual", r.residual},
                         {"distance_f", r.distance_f},
                         {"distance_g", r.distance_g},
                         {"landed", r.landed}});
  return j;
}

}  // namespace forge
