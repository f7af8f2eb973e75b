#include "solenoid/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "solenoid/rng.hpp"

namespace solenoid {

CurveEnsemble decompose_div_free(const AtomicCharge& mu, const DecomposeParams& p, int threads) {
  if (mu.empty()) throw std::invalid_argument("decompose: zero charge");
  if (p.n_curves < 1) throw std::invalid_argument("decompose: need at least one curve");
  const MollifiedCharge mc(mu, p.epsilon);
  const double ell = p.flow.ell();
  const double weight = mc.total_mass() / (ell * static_cast<double>(p.n_curves));
  const int d = mu.dim();

  std::vector<std::optional<Curve>> curves(p.n_curves);
  parallel_for(p.n_curves, threads, [&](std::size_t j) {
    std::mt19937_64 eng = make_engine(p.seed, j);
    Vec x0(d);
    mc.sample_point(eng, x0);
    curves[j].emplace(integrate(mc, x0, p.flow));
  });

  CurveEnsemble nu(ell, d);
  for (std::size_t j = 0; j < p.n_curves; ++j) nu.add(std::move(*curves[j]), weight);
  return nu;
}

double check_div_free(const AtomicCharge& mu, const FieldPanel& panel) {
  if (panel.functions.empty()) throw std::invalid_argument("check_div_free: empty panel");
  const double var = total_variation(mu);
  if (var == 0.0) return 0.0;
  double worst = 0.0;
  for (const TestFunction& psi : panel.functions) {
    const double denom = var * psi.grad_sup_norm();
    if (denom == 0.0) continue;
    worst = std::max(worst, std::abs(divergence_action(mu, psi)) / denom);
  }
  return worst;
}

std::vector<FieldErrorRow> reconstruction_error(const AtomicCharge& mu, const CurveEnsemble& nu,
                                                double eps, const FieldPanel& panel, int threads,
                                                int quad_order) {
  const MollifiedCharge mc(mu, eps);
  std::vector<FieldErrorRow> rows;
  rows.reserve(panel.fields.size());
  for (const TestField& phi : panel.fields) {
    FieldErrorRow row{};
    std::vector<double> actions = ensemble_curve_actions(nu, phi, threads);
    std::vector<double> weighted(actions);
    for (std::size_t j = 0; j < weighted.size(); ++j) weighted[j] *= nu.entries()[j].weight;
    row.ensemble_action = pairwise_sum(weighted);
    row.smoothed_action = smoothed_action(mc, phi, quad_order);
    row.exact_action = pair_with_field(mu, phi);
    row.err_vs_smoothed = std::abs(row.ensemble_action - row.smoothed_action);
    row.err_vs_exact = std::abs(row.ensemble_action - row.exact_action);
    // equal weights Var/(ell N): the estimator is (Var/ell) * mean(actions)
    const MeanStd stats = mean_std(actions);
    row.std_error = mc.total_mass() / nu.ell() * stats.std_error;
    rows.push_back(row);
  }
  return rows;
}

std::vector<EndpointErrorRow> endpoint_identity_error(const CurveEnsemble& nu,
                                                      const AtomicCharge& mu, double eps,
                                                      const FieldPanel& panel, int quad_order) {
  const MollifiedCharge mc(mu, eps);
  const double ell = nu.ell();
  const double var = mc.total_mass();
  std::vector<EndpointErrorRow> rows;
  rows.reserve(panel.functions.size());
  std::vector<double> starts(nu.size()), diffs(nu.size());
  for (const TestFunction& psi : panel.functions) {
    EndpointErrorRow row{};
    for (std::size_t j = 0; j < nu.size(); ++j) {
      const Curve& g = nu.entries()[j].curve;
      const double v0 = psi.value(g.sample(0));
      const double v1 = psi.value(g.sample(g.segments()));
      starts[j] = v0;
      diffs[j] = v0 - v1;
    }
    std::vector<double> weighted(nu.size());
    for (std::size_t j = 0; j < nu.size(); ++j) weighted[j] = nu.entries()[j].weight * starts[j];
    row.start_estimate = ell * pairwise_sum(weighted);
    row.rho_integral = smoothed_mass_integral(mc, psi, quad_order);
    row.start_error = std::abs(row.start_estimate - row.rho_integral);
    row.start_std_error = var * mean_std(starts).std_error;

    for (std::size_t j = 0; j < nu.size(); ++j) weighted[j] = nu.entries()[j].weight * diffs[j];
    row.start_end_diff = pairwise_sum(weighted);
    row.start_end_std_error = var / ell * mean_std(diffs).std_error;
    rows.push_back(row);
  }
  return rows;
}

LengthStats length_statistics(const CurveEnsemble& nu) {
  LengthStats s;
  if (nu.empty()) return s;
  std::vector<double> lens(nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j) lens[j] = length(nu.entries()[j].curve);
  s.mean = pairwise_sum(lens) / static_cast<double>(lens.size());
  s.min = *std::min_element(lens.begin(), lens.end());
  s.max = *std::max_element(lens.begin(), lens.end());
  s.mean_over_ell = s.mean / nu.ell();
  return s;
}

double support_outlier_fraction(const CurveEnsemble& nu, const AtomicCharge& mu, double radius,
                                std::size_t curve_stride, std::size_t sample_stride) {
  if (nu.empty() || mu.empty()) return 0.0;
  const double r2 = radius * radius;
  std::size_t checked = 0, outliers = 0;
  for (std::size_t j = 0; j < nu.size(); j += curve_stride) {
    const Curve& g = nu.entries()[j].curve;
    for (std::size_t k = 0; k < g.samples(); k += sample_stride) {
      const auto x = g.sample(k);
      ++checked;
      bool near = false;
      for (const Atom& a : mu.atoms()) {
        if (dist2(x, a.x) <= r2) {
          near = true;
          break;
        }
      }
      if (!near) ++outliers;
    }
  }
  return checked == 0 ? 0.0 : static_cast<double>(outliers) / static_cast<double>(checked);
}

DecompositionReport decompose_report(const AtomicCharge& mu, const CurveEnsemble& nu,
                                     const DecomposeParams& p, const FieldPanel& panel,
                                     int threads, int quad_order) {
  DecompositionReport r;
  r.var_mu = total_variation(mu);
  r.ensemble_mass = ensemble_mass(nu);
  const double expected = r.var_mu / p.flow.ell();
  r.mass_rel_error = expected == 0.0 ? 0.0 : std::abs(r.ensemble_mass - expected) / expected;
  r.lengths = length_statistics(nu);
  r.reconstruction = reconstruction_error(mu, nu, p.epsilon, panel, threads, quad_order);
  r.endpoint = endpoint_identity_error(nu, mu, p.epsilon, panel, quad_order);
  r.support_outlier_frac = support_outlier_fraction(nu, mu, 5.0 * p.epsilon);
  r.div_free_check = check_div_free(mu, panel);
  r.epsilon = p.epsilon;
  r.ell = p.flow.ell();
  r.step = p.flow.step();
  r.n_curves = p.n_curves;
  r.seed = p.seed;
  return r;
}

}  // namespace solenoid
