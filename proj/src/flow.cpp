#include "solenoid/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "solenoid/rng.hpp"

namespace solenoid {

FlowConfig::FlowConfig(double ell, double step, std::size_t record_count)
    : ell_(ell), step_(step), record_count_(record_count) {
  if (!(ell_ > 0.0) || !std::isfinite(ell_))
    throw std::invalid_argument("flow config: ell must be positive");
  if (!(step_ > 0.0) || step_ > ell_ * (1.0 + 1e-12))
    throw std::invalid_argument("flow config: step must be in (0, ell]");
  const double ratio = ell_ / step_;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * rounded)
    throw std::invalid_argument("flow config: ell/step must be an integer");
  steps_ = static_cast<std::size_t>(rounded);
  if (record_count_ < 2) throw std::invalid_argument("flow config: need at least two records");
  const std::size_t intervals = record_count_ - 1;
  if (steps_ % intervals != 0)
    throw std::invalid_argument("flow config: record times must subdivide the step grid");
  stride_ = steps_ / intervals;
}

FlowConfig FlowConfig::auto_records(double ell, double step, std::size_t max_records) {
  FlowConfig probe(ell, step, 2);  // validates ell/step
  const std::size_t steps = probe.steps();
  if (steps + 1 <= max_records) return FlowConfig(ell, step, steps + 1);
  std::size_t best = 2;
  for (std::size_t intervals = max_records - 1; intervals >= 1; --intervals) {
    if (steps % intervals == 0) {
      best = intervals + 1;
      break;
    }
  }
  return FlowConfig(ell, step, best);
}

Curve integrate(const MollifiedCharge& drift, std::span<const double> x0, const FlowConfig& cfg) {
  if (x0.size() != static_cast<std::size_t>(drift.dim()))
    throw std::invalid_argument("integrate: dimension mismatch");
  return integrate_field(
      [&drift](std::span<const double> x, std::span<double> out) { drift.drift(x, out); }, x0,
      cfg);
}

LiouvilleResult liouville_discrepancy(const MollifiedCharge& drift, std::uint64_t seed,
                                      std::size_t n_samples, const TestFunction& psi, double t,
                                      const FlowConfig& cfg, int threads) {
  if (t < 0.0 || t > cfg.ell() * (1.0 + 1e-12))
    throw std::invalid_argument("liouville: t must lie in [0, ell]");
  if (psi.dim() != drift.dim()) throw std::invalid_argument("liouville: dimension mismatch");
  const double ratio = t / cfg.step();
  const std::size_t steps = static_cast<std::size_t>(std::round(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("liouville: t must land on the step grid");

  const int d = drift.dim();
  const double h = cfg.step();
  std::vector<Vec> starts = drift.sample_rho(seed, n_samples);
  std::vector<double> diffs(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t j) {
    double x[detail::kMaxFlowDim], y[detail::kMaxFlowDim];
    double k1[detail::kMaxFlowDim], k2[detail::kMaxFlowDim], k3[detail::kMaxFlowDim],
        k4[detail::kMaxFlowDim];
    for (int i = 0; i < d; ++i) x[i] = starts[j][i];
    const double before = psi.value(std::span<const double>(x, d));
    for (std::size_t s = 0; s < steps; ++s) {
      drift.drift(std::span<const double>(x, d), std::span<double>(k1, d));
      for (int i = 0; i < d; ++i) y[i] = x[i] + 0.5 * h * k1[i];
      drift.drift(std::span<const double>(y, d), std::span<double>(k2, d));
      for (int i = 0; i < d; ++i) y[i] = x[i] + 0.5 * h * k2[i];
      drift.drift(std::span<const double>(y, d), std::span<double>(k3, d));
      for (int i = 0; i < d; ++i) y[i] = x[i] + h * k3[i];
      drift.drift(std::span<const double>(y, d), std::span<double>(k4, d));
      for (int i = 0; i < d; ++i) x[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    diffs[j] = psi.value(std::span<const double>(x, d)) - before;
  });
  const MeanStd stats = mean_std(diffs);
  return {std::abs(stats.mean), stats.std_error, n_samples};
}

std::vector<LiouvilleBatchRow> liouville_discrepancy_batch(
    const MollifiedCharge& drift, std::uint64_t seed, std::size_t n_samples,
    const std::vector<TestFunction>& psis, const std::vector<double>& ts, const FlowConfig& cfg,
    int threads) {
  const int d = drift.dim();
  const double record_dt = cfg.ell() / static_cast<double>(cfg.record_count() - 1);
  std::vector<std::size_t> rec_idx(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double ratio = ts[i] / record_dt;
    rec_idx[i] = static_cast<std::size_t>(std::round(ratio));
    if (std::abs(ratio - static_cast<double>(rec_idx[i])) > 1e-9 * std::max(1.0, ratio) ||
        rec_idx[i] >= cfg.record_count())
      throw std::invalid_argument("liouville batch: t must coincide with a record time");
  }

  std::vector<Vec> starts = drift.sample_rho(seed, n_samples);
  // recorded states, sample-major
  std::vector<double> states(n_samples * cfg.record_count() * d);
  parallel_for(n_samples, threads, [&](std::size_t j) {
    const Curve c = integrate(drift, starts[j], cfg);
    std::copy(c.data().begin(), c.data().end(),
              states.begin() + j * cfg.record_count() * d);
  });

  std::vector<LiouvilleBatchRow> rows;
  rows.reserve(ts.size() * psis.size());
  std::vector<double> diffs(n_samples);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t p = 0; p < psis.size(); ++p) {
      for (std::size_t j = 0; j < n_samples; ++j) {
        const double* base = states.data() + j * cfg.record_count() * d;
        const double v0 = psis[p].value(std::span<const double>(base, d));
        const double vt =
            psis[p].value(std::span<const double>(base + rec_idx[i] * d, d));
        diffs[j] = vt - v0;
      }
      const MeanStd stats = mean_std(diffs);
      rows.push_back({ts[i], p, std::abs(stats.mean), stats.std_error});
    }
  }
  return rows;
}

}  // namespace solenoid
