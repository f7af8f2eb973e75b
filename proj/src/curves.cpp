#include "solenoid/curves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace solenoid {

namespace {
constexpr double kLipschitzSlack = 1.0 + 1e-9;
}

Curve::Curve(double ell, int dim, std::vector<double> samples_flat)
    : ell_(ell), dim_(dim), data_(std::move(samples_flat)) {
  if (!(ell_ > 0.0) || !std::isfinite(ell_)) throw std::invalid_argument("curve: ell must be positive");
  if (dim_ < 1) throw std::invalid_argument("curve: dimension must be positive");
  const std::size_t d = static_cast<std::size_t>(dim_);
  if (data_.size() < 2 * d || data_.size() % d != 0)
    throw std::invalid_argument("curve: need at least two samples");
  if (!all_finite(data_)) throw std::invalid_argument("curve: non-finite sample");
  segments_ = data_.size() / d - 1;
  const double bound = dt() * kLipschitzSlack;
  for (std::size_t k = 0; k < segments_; ++k) {
    const double step = std::sqrt(dist2(sample(k + 1), sample(k)));
    if (step > bound) throw std::invalid_argument("curve: samples violate the 1-Lipschitz bound");
  }
}

Curve Curve::reversed() const {
  const std::size_t d = static_cast<std::size_t>(dim_);
  std::vector<double> rev(data_.size());
  const std::size_t n = samples();
  for (std::size_t k = 0; k < n; ++k)
    std::copy_n(data_.data() + (n - 1 - k) * d, d, rev.data() + k * d);
  return Curve(ell_, dim_, std::move(rev));
}

CurveEnsemble::CurveEnsemble(double ell, int dim) : ell_(ell), dim_(dim) {
  if (!(ell_ > 0.0)) throw std::invalid_argument("ensemble: ell must be positive");
  if (dim_ < 1) throw std::invalid_argument("ensemble: dimension must be positive");
}

void CurveEnsemble::add(Curve curve, double weight) {
  if (curve.ell() != ell_) throw std::invalid_argument("ensemble: curve ell mismatch");
  if (curve.dim() != dim_) throw std::invalid_argument("ensemble: curve dimension mismatch");
  if (!(weight > 0.0) || !std::isfinite(weight))
    throw std::invalid_argument("ensemble: weight must be positive");
  entries_.push_back({std::move(curve), weight});
}

Region complement(Region r) {
  r.complemented = !r.complemented;
  return r;
}

double curve_action(const Curve& gamma, const TestField& phi) {
  if (phi.dim() != gamma.dim()) throw std::invalid_argument("curve_action: dimension mismatch");
  const int d = gamma.dim();
  const std::size_t m = gamma.segments();
  Vec mid(d), val(d);
  auto term = [&](std::size_t k) {
    const auto p = gamma.sample(k);
    const auto q = gamma.sample(k + 1);
    for (int j = 0; j < d; ++j) mid[j] = 0.5 * (p[j] + q[j]);
    phi.value(mid, val);
    double t = 0.0;
    for (int j = 0; j < d; ++j) t += val[j] * (q[j] - p[j]);
    return t;
  };
  // Fold terms inward (k with m-1-k) so reversing the curve negates every
  // partial sum, making the antisymmetry exact in floating point.
  std::vector<double> folded((m + 1) / 2);
  for (std::size_t k = 0; k < m / 2; ++k) folded[k] = term(k) + term(m - 1 - k);
  if (m % 2 == 1) folded[m / 2] = term(m / 2);
  return pairwise_sum(folded);
}

double length(const Curve& gamma) {
  std::vector<double> seg(gamma.segments());
  for (std::size_t k = 0; k < gamma.segments(); ++k)
    seg[k] = std::sqrt(dist2(gamma.sample(k + 1), gamma.sample(k)));
  return pairwise_sum(seg);
}

double curve_divergence_action(const Curve& gamma, const TestFunction& psi) {
  if (psi.dim() != gamma.dim())
    throw std::invalid_argument("curve_divergence_action: dimension mismatch");
  return psi.value(gamma.sample(0)) - psi.value(gamma.sample(gamma.segments()));
}

std::vector<double> ensemble_curve_actions(const CurveEnsemble& nu, const TestField& phi,
                                           int threads) {
  std::vector<double> actions(nu.size());
  parallel_for(nu.size(), threads,
               [&](std::size_t j) { actions[j] = curve_action(nu.entries()[j].curve, phi); });
  return actions;
}

double ensemble_action(const CurveEnsemble& nu, const TestField& phi, int threads) {
  if (nu.empty()) return 0.0;
  std::vector<double> terms = ensemble_curve_actions(nu, phi, threads);
  for (std::size_t j = 0; j < terms.size(); ++j) terms[j] *= nu.entries()[j].weight;
  return pairwise_sum(terms);
}

double ensemble_mass(const CurveEnsemble& nu) {
  std::vector<double> w(nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j) w[j] = nu.entries()[j].weight;
  return pairwise_sum(w);
}

namespace {

// Fraction of the parameter interval [0,1] of segment p->q inside the shape.
double segment_fraction_inside(std::span<const double> p, std::span<const double> q,
                               const std::variant<Ball, HalfSpace>& shape) {
  if (const HalfSpace* h = std::get_if<HalfSpace>(&shape)) {
    if (h->normal.size() != p.size()) throw std::invalid_argument("occupation: dimension mismatch");
    // <n, p + s(q-p)> - c = a + s*b >= 0
    const double a = dot(h->normal, p) - h->offset;
    double b = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) b += h->normal[k] * (q[k] - p[k]);
    if (b == 0.0) return a >= 0.0 ? 1.0 : 0.0;
    const double s = -a / b;
    if (b > 0.0) {
      if (s <= 0.0) return 1.0;
      if (s >= 1.0) return 0.0;
      return 1.0 - s;
    }
    if (s >= 1.0) return 1.0;
    if (s <= 0.0) return 0.0;
    return s;
  }
  const Ball& ball = std::get<Ball>(shape);
  if (ball.center.size() != p.size()) throw std::invalid_argument("occupation: dimension mismatch");
  // |p - c + s(q-p)|^2 <= r^2, quadratic in s.
  double aa = 0.0, bb = 0.0, cc = -ball.radius * ball.radius;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double e = p[k] - ball.center[k];
    const double dlt = q[k] - p[k];
    aa += dlt * dlt;
    bb += 2.0 * e * dlt;
    cc += e * e;
  }
  if (aa == 0.0) return cc <= 0.0 ? 1.0 : 0.0;
  const double disc = bb * bb - 4.0 * aa * cc;
  if (disc <= 0.0) return 0.0;
  const double root = std::sqrt(disc);
  const double s0 = std::max(0.0, (-bb - root) / (2.0 * aa));
  const double s1 = std::min(1.0, (-bb + root) / (2.0 * aa));
  return s1 > s0 ? s1 - s0 : 0.0;
}

}  // namespace

double occupation_time(const Curve& gamma, const Region& region) {
  if (region.complemented) {
    Region base = region;
    base.complemented = false;
    return gamma.ell() - occupation_time(gamma, base);
  }
  const double h = gamma.dt();
  std::vector<double> times(gamma.segments());
  for (std::size_t k = 0; k < gamma.segments(); ++k)
    times[k] = h * segment_fraction_inside(gamma.sample(k), gamma.sample(k + 1), region.shape);
  return pairwise_sum(times);
}

VariationBracket variation_bracket(const Curve& gamma, const FieldPanel& panel) {
  if (panel.fields.empty()) throw std::invalid_argument("variation_bracket: empty panel");
  double lower = -std::numeric_limits<double>::infinity();
  for (const TestField& phi : panel.fields) lower = std::max(lower, curve_action(gamma, phi));
  return {lower, length(gamma)};
}

}  // namespace solenoid
