#include "solenoid/lift.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "solenoid/rng.hpp"

namespace solenoid {

DivergencePair::DivergencePair(AtomicCharge mu, ScalarAtomicMeasure sigma,
                               const FieldPanel& panel, double threshold)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), certification_(0.0), threshold_(threshold) {
  if (mu_.dim() != sigma_.dim())
    throw std::invalid_argument("divergence pair: dimension mismatch");
  if (panel.functions.empty()) throw std::invalid_argument("divergence pair: empty panel");
  const double var_mu = total_variation(mu_);
  const double var_sigma = total_variation(sigma_);
  double worst = 0.0;
  for (const TestFunction& psi : panel.functions) {
    const double denom = var_mu * psi.grad_sup_norm() + var_sigma * psi.sup_norm();
    if (denom == 0.0) continue;
    // <sigma, psi> + <mu, grad psi> vanishes when sigma = Div(mu)
    const double err = std::abs(pair_with_function(sigma_, psi) - divergence_action(mu_, psi));
    worst = std::max(worst, err / denom);
  }
  certification_ = worst;
}

AtomicCharge build_lift(const DivergencePair& pair, const LiftParams& p) {
  if (!pair.certified()) throw std::invalid_argument("build_lift: uncertified divergence pair");
  if (p.column_atoms < 4) throw std::invalid_argument("build_lift: need >= 4 column atoms");
  if (!(p.slab_width > 0.0) || p.slab_width >= p.ell / 4.0)
    throw std::invalid_argument("build_lift: slab width must lie in (0, ell/4)");
  const int n = pair.mu().dim();
  const double ell = p.ell;
  const std::size_t m = p.column_atoms;

  std::vector<Atom> atoms;
  atoms.reserve(2 * pair.mu().size() + m * pair.sigma().size());
  for (const Atom& a : pair.mu().atoms()) {
    Atom bottom, top;
    bottom.x = a.x;
    bottom.x.push_back(0.0);
    bottom.w = a.w;
    bottom.w.push_back(0.0);
    top.x = a.x;
    top.x.push_back(ell);
    top.w.resize(n + 1, 0.0);
    for (int k = 0; k < n; ++k) top.w[k] = -a.w[k];
    atoms.push_back(std::move(bottom));
    atoms.push_back(std::move(top));
  }
  const double column_mass = ell / static_cast<double>(m);
  for (const ScalarAtom& s : pair.sigma().atoms()) {
    for (std::size_t q = 0; q < m; ++q) {
      Atom col;
      col.x = s.x;
      col.x.push_back((static_cast<double>(q) + 0.5) * ell / static_cast<double>(m));
      col.w.resize(n + 1, 0.0);
      col.w[n] = -s.m * column_mass;
      atoms.push_back(std::move(col));
    }
  }
  return AtomicCharge(n + 1, std::move(atoms));
}

double verify_lift_divergence(const AtomicCharge& lifted, const FieldPanel& panel) {
  return check_div_free(lifted, panel);
}

std::optional<Curve> classify_clip_project(const Curve& gamma_plus, const LiftParams& p) {
  const int d = gamma_plus.dim();
  if (d < 2) throw std::invalid_argument("classify_clip_project: need a lifted curve");
  const int n = d - 1;
  const std::size_t samples = gamma_plus.samples();

  // first/last sample inside the slab {last coordinate <= delta}
  std::size_t first = samples, last = samples;
  for (std::size_t k = 0; k < samples; ++k) {
    if (gamma_plus.sample(k)[n] <= p.slab_width) {
      if (first == samples) first = k;
      last = k;
    }
  }
  if (first == samples) return std::nullopt;

  std::vector<double> flat(samples * n);
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t src = std::clamp(k, first, last);
    const auto x = gamma_plus.sample(src);
    for (int j = 0; j < n; ++j) flat[k * n + j] = x[j];
  }
  return Curve(gamma_plus.ell(), n, std::move(flat));
}

namespace {

struct DiagnosticSites {
  std::vector<Vec> ascent;   // sigma atoms with negative mass: columns point up
  std::vector<Vec> descent;  // sigma atoms with positive mass: columns point down
};

DiagnosticSites split_sites(const ScalarAtomicMeasure& sigma) {
  DiagnosticSites s;
  for (const ScalarAtom& a : sigma.atoms()) {
    if (a.m < 0.0)
      s.ascent.push_back(a.x);
    else
      s.descent.push_back(a.x);
  }
  return s;
}

bool near_any(std::span<const double> xy, const std::vector<Vec>& sites, double radius2) {
  for (const Vec& s : sites)
    if (dist2(xy, s) <= radius2) return true;
  return false;
}

}  // namespace

std::pair<CurveEnsemble, LiftReport> decompose_with_divergence(const DivergencePair& pair,
                                                               const LiftParams& p,
                                                               const FieldPanel& panel,
                                                               int threads, int quad_order) {
  if (!pair.certified())
    throw std::invalid_argument("decompose_with_divergence: uncertified divergence pair");
  if (p.inner.flow.ell() != p.ell)
    throw std::invalid_argument("decompose_with_divergence: inner flow ell mismatch");

  const AtomicCharge lifted = build_lift(pair, p);
  const MollifiedCharge mc(lifted, p.inner.epsilon);
  const int n = pair.mu().dim();
  const double ell = p.ell;
  const std::size_t N = p.inner.n_curves;
  const double weight = mc.total_mass() / (ell * static_cast<double>(N));
  const DiagnosticSites sites = split_sites(pair.sigma());
  const double diag_r2 = 9.0 * p.inner.epsilon * p.inner.epsilon;

  struct PerCurve {
    std::optional<Curve> projected;
    double ascent_vel_sum = 0.0;
    std::size_t ascent_count = 0;
    double descent_vel_sum = 0.0;
    std::size_t descent_count = 0;
  };
  std::vector<PerCurve> results(N);

  parallel_for(N, threads, [&](std::size_t j) {
    std::mt19937_64 eng = make_engine(p.inner.seed, j);
    Vec x0(n + 1);
    mc.sample_point(eng, x0);
    const Curve gamma_plus = integrate(mc, x0, p.inner.flow);

    PerCurve& out = results[j];
    const double dt = gamma_plus.dt();
    Vec mid_xy(n);
    for (std::size_t k = 0; k < gamma_plus.segments(); ++k) {
      const auto a = gamma_plus.sample(k);
      const auto b = gamma_plus.sample(k + 1);
      const double mid_t = 0.5 * (a[n] + b[n]);
      if (mid_t <= p.slab_width || mid_t >= ell - p.slab_width) continue;  // strip interior only
      for (int i = 0; i < n; ++i) mid_xy[i] = 0.5 * (a[i] + b[i]);
      const double vel = (b[n] - a[n]) / dt;
      if (near_any(mid_xy, sites.ascent, diag_r2)) {
        out.ascent_vel_sum += vel;
        ++out.ascent_count;
      }
      if (near_any(mid_xy, sites.descent, diag_r2)) {
        out.descent_vel_sum += vel;
        ++out.descent_count;
      }
    }
    out.projected = classify_clip_project(gamma_plus, p);
  });

  CurveEnsemble nu(ell, n);
  std::vector<bool> kept_flags(N, false);
  std::size_t kept = 0;
  double ascent_sum = 0.0, descent_sum = 0.0;
  std::size_t ascent_count = 0, descent_count = 0;
  for (std::size_t j = 0; j < N; ++j) {
    PerCurve& r = results[j];
    ascent_sum += r.ascent_vel_sum;
    ascent_count += r.ascent_count;
    descent_sum += r.descent_vel_sum;
    descent_count += r.descent_count;
    if (r.projected) {
      kept_flags[j] = true;
      nu.add(std::move(*r.projected), weight);
      ++kept;
    }
  }

  LiftReport rep;
  rep.var_mu = total_variation(pair.mu());
  rep.var_sigma = total_variation(pair.sigma());
  rep.var_lift = total_variation(lifted);
  rep.certification = pair.certification();
  {
    // lifted-box panel for the divergence-freeness check of mu^+
    Box lifted_box = panel.domain_box;
    lifted_box.lo.push_back(-0.25 * ell);
    lifted_box.hi.push_back(1.25 * ell);
    const FieldPanel lifted_panel =
        make_panel(panel.seed ^ 0x11f7ull, 1, std::max<std::size_t>(6, panel.functions.size()),
                   lifted_box);
    rep.lift_divergence_check = verify_lift_divergence(lifted, lifted_panel);
  }
  rep.curves_total = N;
  rep.curves_kept = kept;
  rep.kept_weight = ensemble_mass(nu);
  rep.discarded_weight = weight * static_cast<double>(N - kept);
  rep.mean_vertical_speed_ascent = ascent_count ? ascent_sum / static_cast<double>(ascent_count) : 0.0;
  rep.ascent_samples = ascent_count;
  rep.mean_vertical_speed_descent =
      descent_count ? descent_sum / static_cast<double>(descent_count) : 0.0;
  rep.descent_samples = descent_count;

  rep.reconstruction.reserve(panel.fields.size());
  const std::optional<MollifiedCharge> mu_eps =
      pair.mu().empty() ? std::nullopt
                        : std::optional<MollifiedCharge>(
                              MollifiedCharge(pair.mu(), p.inner.epsilon));
  for (const TestField& phi : panel.fields) {
    FieldErrorRow row{};
    const std::vector<double> kept_actions = ensemble_curve_actions(nu, phi, threads);
    // MC sample over all N curves: discarded ones contribute zero action.
    std::vector<double> actions(N, 0.0);
    for (std::size_t j = 0, e = 0; j < N; ++j)
      if (kept_flags[j]) actions[j] = kept_actions[e++];
    std::vector<double> weighted(actions);
    for (auto& a : weighted) a *= weight;
    row.ensemble_action = pairwise_sum(weighted);
    row.exact_action = pair_with_field(pair.mu(), phi);
    row.smoothed_action = mu_eps ? smoothed_action(*mu_eps, phi, quad_order) : 0.0;
    row.err_vs_exact = std::abs(row.ensemble_action - row.exact_action);
    row.err_vs_smoothed = std::abs(row.ensemble_action - row.smoothed_action);
    row.std_error = mc.total_mass() / ell * mean_std(actions).std_error;
    rep.reconstruction.push_back(row);
  }

  rep.ell = ell;
  rep.epsilon = p.inner.epsilon;
  rep.slab_width = p.slab_width;
  rep.column_atoms = p.column_atoms;
  rep.n_curves = N;
  rep.seed = p.inner.seed;
  return {std::move(nu), std::move(rep)};
}

}  // namespace solenoid
