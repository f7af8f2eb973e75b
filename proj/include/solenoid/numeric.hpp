#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace solenoid {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

inline double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

bool all_finite(std::span<const double> v);

// Fixed-order pairwise (tree) reduction. Used for every sum whose value must
// not depend on thread count or accumulate O(n) rounding.
double pairwise_sum(std::span<const double> v);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;      // sample standard deviation
  double std_error = 0.0;   // stddev / sqrt(n)
  std::size_t n = 0;
};

MeanStd mean_std(std::span<const double> v);

// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Work is partitioned statically; callers must write results
// by index so the outcome is identical for every thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

int resolve_threads(int threads);

// Coarse-to-fine grid search for the maximum of f over an axis-aligned box.
// Deterministic; each pass shrinks the box around the best cell.
double grid_probe_max(const std::function<double(std::span<const double>)>& f,
                      Vec lo, Vec hi, int pts_per_dim, int passes);

// splitmix64 step; also used to derive decorrelated per-stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace solenoid
