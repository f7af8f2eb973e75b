#include "solenoid/numeric.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace solenoid {

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

namespace {

double pairwise_block(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_block(v, half) + pairwise_block(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_block(v.data(), v.size()); }

MeanStd mean_std(std::span<const double> v) {
  MeanStd r;
  r.n = v.size();
  if (r.n == 0) return r;
  r.mean = pairwise_sum(v) / static_cast<double>(r.n);
  if (r.n == 1) return r;
  std::vector<double> sq(r.n);
  for (std::size_t i = 0; i < r.n; ++i) {
    const double d = v[i] - r.mean;
    sq[i] = d * d;
  }
  r.stddev = std::sqrt(pairwise_sum(sq) / static_cast<double>(r.n - 1));
  r.std_error = r.stddev / std::sqrt(static_cast<double>(r.n));
  return r;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = n * w / workers;
      const std::size_t hi = n * (w + 1) / workers;
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double grid_probe_max(const std::function<double(std::span<const double>)>& f, Vec lo, Vec hi,
                      int pts_per_dim, int passes) {
  const std::size_t d = lo.size();
  if (d == 0 || hi.size() != d) throw std::invalid_argument("grid_probe_max: bad box");
  if (pts_per_dim < 2) throw std::invalid_argument("grid_probe_max: need >= 2 points per axis");

  double best = -std::numeric_limits<double>::infinity();
  Vec best_x = lo;
  Vec x(d), cell(d);

  for (int pass = 0; pass < passes; ++pass) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) {
      cell[k] = (hi[k] - lo[k]) / static_cast<double>(pts_per_dim - 1);
      total *= static_cast<std::size_t>(pts_per_dim);
    }
    std::vector<int> idx(d, 0);
    for (std::size_t it = 0; it < total; ++it) {
      for (std::size_t k = 0; k < d; ++k) x[k] = lo[k] + cell[k] * idx[k];
      const double val = f(x);
      if (val > best) {
        best = val;
        best_x = x;
      }
      for (std::size_t k = 0; k < d; ++k) {
        if (++idx[k] < pts_per_dim) break;
        idx[k] = 0;
      }
    }
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = best_x[k] - 1.5 * cell[k];
      hi[k] = best_x[k] + 1.5 * cell[k];
    }
  }
  return best;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull;
  std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
}

}  // namespace solenoid
