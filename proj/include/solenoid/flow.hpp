#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "solenoid/curves.hpp"
#include "solenoid/mollify.hpp"

namespace solenoid {

// Uniform-step RK4 configuration. record_count samples (m+1 points) are
// kept at times that are a subset of the step times, so (record_count-1)
// must divide the step count.
class FlowConfig {
 public:
  FlowConfig(double ell, double step, std::size_t record_count);

  // Records every step up to max_records samples, then the coarsest stride
  // that still divides the step count.
  static FlowConfig auto_records(double ell, double step, std::size_t max_records = 1024);

  double ell() const { return ell_; }
  double step() const { return step_; }
  std::size_t record_count() const { return record_count_; }
  std::size_t steps() const { return steps_; }
  std::size_t stride() const { return stride_; }

 private:
  double ell_;
  double step_;
  std::size_t record_count_;
  std::size_t steps_;
  std::size_t stride_;
};

namespace detail {
constexpr std::size_t kMaxFlowDim = 8;
}

// Classical RK4 over any drift callable f(x, out). Each step increment is a
// convex combination of stage values, so |phi| <= 1 transfers the
// 1-Lipschitz bound to the recorded polyline.
template <class Drift>
Curve integrate_field(Drift&& f, std::span<const double> x0, const FlowConfig& cfg) {
  const std::size_t d = x0.size();
  if (d == 0 || d > detail::kMaxFlowDim) throw std::invalid_argument("integrate: bad dimension");
  const double h = cfg.step();

  double x[detail::kMaxFlowDim], y[detail::kMaxFlowDim];
  double k1[detail::kMaxFlowDim], k2[detail::kMaxFlowDim], k3[detail::kMaxFlowDim],
      k4[detail::kMaxFlowDim];
  for (std::size_t i = 0; i < d; ++i) x[i] = x0[i];

  std::vector<double> rec;
  rec.reserve(cfg.record_count() * d);
  rec.insert(rec.end(), x, x + d);

  const std::size_t stride = cfg.stride();
  for (std::size_t s = 0; s < cfg.steps(); ++s) {
    f(std::span<const double>(x, d), std::span<double>(k1, d));
    for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + 0.5 * h * k1[i];
    f(std::span<const double>(y, d), std::span<double>(k2, d));
    for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + 0.5 * h * k2[i];
    f(std::span<const double>(y, d), std::span<double>(k3, d));
    for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + h * k3[i];
    f(std::span<const double>(y, d), std::span<double>(k4, d));
    for (std::size_t i = 0; i < d; ++i) {
      x[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(x[i])) throw std::runtime_error("integrate: non-finite state");
    }
    if ((s + 1) % stride == 0) rec.insert(rec.end(), x, x + d);
  }
  return Curve(cfg.ell(), static_cast<int>(d), std::move(rec));
}

Curve integrate(const MollifiedCharge& drift, std::span<const double> x0, const FlowConfig& cfg);

struct LiouvilleResult {
  double discrepancy;  // |mean psi(u(t,x)) - mean psi(x)| over rho_eps samples
  double std_error;    // Monte Carlo standard error of the paired difference
  std::size_t n_samples;
};

// Statistical diagnostic of measure invariance under the flow; small only
// when the mollified charge is approximately divergence-free.
LiouvilleResult liouville_discrepancy(const MollifiedCharge& drift, std::uint64_t seed,
                                      std::size_t n_samples, const TestFunction& psi, double t,
                                      const FlowConfig& cfg, int threads = 0);

// Same diagnostic for several probe functions and times sharing one flow
// pass; every t must coincide with a record time of cfg.
struct LiouvilleBatchRow {
  double t;
  std::size_t psi_index;
  double discrepancy;
  double std_error;
};

std::vector<LiouvilleBatchRow> liouville_discrepancy_batch(
    const MollifiedCharge& drift, std::uint64_t seed, std::size_t n_samples,
    const std::vector<TestFunction>& psis, const std::vector<double>& ts, const FlowConfig& cfg,
    int threads = 0);

}  // namespace solenoid
