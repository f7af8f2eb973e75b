#include "solenoid/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "solenoid/quadrature.hpp"
#include "solenoid/rng.hpp"

namespace solenoid {

namespace {

// exp(t) for t below this is dropped from the shifted kernel sums; relative
// perturbation is under 1e-20 per atom.
constexpr double kExpCutoff = -46.0;

}  // namespace

MollifiedCharge::MollifiedCharge(AtomicCharge source, double epsilon)
    : source_(std::move(source)), eps_(epsilon) {
  if (source_.empty()) throw std::invalid_argument("mollify: source charge must be nonzero");
  if (!(eps_ > 0.0) || !std::isfinite(eps_))
    throw std::invalid_argument("mollify: epsilon must be positive");
  const int d = source_.dim();
  inv_two_eps2_ = 1.0 / (2.0 * eps_ * eps_);
  gauss_norm_ = std::pow(6.283185307179586476925286766559 * eps_ * eps_, -0.5 * d);

  const std::size_t n = source_.size();
  pos_.resize(n * d);
  wgt_.resize(n * d);
  mass_.resize(n);
  cum_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = source_.atoms()[i];
    std::copy(a.x.begin(), a.x.end(), pos_.begin() + i * d);
    std::copy(a.w.begin(), a.w.end(), wgt_.begin() + i * d);
    mass_[i] = norm(a.w);
  }
  var_ = pairwise_sum(mass_);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += mass_[i];
    cum_[i] = acc;
  }
  cum_.back() = var_;
}

namespace {

template <int D>
void squared_distances(const double* x, const double* pos, std::size_t n, double* d2,
                       double& best) {
  best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < D; ++k) {
      const double d = x[k] - pos[i * D + k];
      s += d * d;
    }
    d2[i] = s;
    best = std::min(best, s);
  }
}

void squared_distances_generic(const double* x, const double* pos, std::size_t n, int dim,
                               double* d2, double& best) {
  best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = x[k] - pos[i * dim + k];
      s += d * d;
    }
    d2[i] = s;
    best = std::min(best, s);
  }
}

thread_local std::vector<double> tl_d2;

}  // namespace

void MollifiedCharge::drift(std::span<const double> x, std::span<double> out) const {
  const int d = source_.dim();
  if (x.size() != static_cast<std::size_t>(d) || out.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("drift: dimension mismatch");
  const std::size_t n = mass_.size();
  tl_d2.resize(n);
  double* d2 = tl_d2.data();
  double best;
  switch (d) {
    case 2: squared_distances<2>(x.data(), pos_.data(), n, d2, best); break;
    case 3: squared_distances<3>(x.data(), pos_.data(), n, d2, best); break;
    default: squared_distances_generic(x.data(), pos_.data(), n, d, d2, best); break;
  }
  for (int k = 0; k < d; ++k) out[k] = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (best - d2[i]) * inv_two_eps2_;
    if (t < kExpCutoff) continue;
    const double e = std::exp(t);
    den += mass_[i] * e;
    const double* w = wgt_.data() + i * d;
    for (int k = 0; k < d; ++k) out[k] += w[k] * e;
  }
  for (int k = 0; k < d; ++k) out[k] /= den;  // exact w/|w| for a lone atom
}

Vec MollifiedCharge::drift_eval(std::span<const double> x) const {
  Vec out(source_.dim());
  drift(x, out);
  return out;
}

double MollifiedCharge::density_eval(std::span<const double> x) const {
  const int d = source_.dim();
  if (x.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("density: dimension mismatch");
  const std::size_t n = mass_.size();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = dist2(x, std::span<const double>(pos_.data() + i * d, d));
    terms[i] = mass_[i] * std::exp(-q * inv_two_eps2_);
  }
  return gauss_norm_ * pairwise_sum(terms);
}

void MollifiedCharge::sample_point(std::mt19937_64& eng, std::span<double> out) const {
  const int d = source_.dim();
  if (out.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("sample: dimension mismatch");
  const double u = uniform01(eng) * var_;
  const std::size_t idx = static_cast<std::size_t>(
      std::upper_bound(cum_.begin(), cum_.end() - 1, u) - cum_.begin());
  const double* p = pos_.data() + idx * d;
  for (int k = 0; k < d; ++k) out[k] = p[k] + eps_ * standard_normal(eng);
}

std::vector<Vec> MollifiedCharge::sample_rho(std::uint64_t seed, std::size_t n) const {
  if (n < 1) throw std::invalid_argument("sample_rho: need n >= 1");
  std::mt19937_64 eng = make_engine(seed);
  std::vector<Vec> out(n, Vec(source_.dim()));
  for (std::size_t j = 0; j < n; ++j) sample_point(eng, out[j]);
  return out;
}

double smoothed_action(const MollifiedCharge& mc, const TestField& phi, int order, int max_dim) {
  const int d = mc.dim();
  if (phi.dim() != d) throw std::invalid_argument("smoothed_action: dimension mismatch");
  if (d > max_dim)
    throw std::invalid_argument(
        "smoothed_action: dimension exceeds tensor-quadrature limit; use Monte Carlo mode");
  const AtomicCharge& mu = mc.source();
  const GaussHermiteRule& rule = gauss_hermite(order);
  const std::size_t nn = rule.nodes.size();
  const double sqrt2eps = std::sqrt(2.0) * mc.epsilon();
  const double inv_sqrt_pi = 1.0 / std::sqrt(3.14159265358979323846);

  std::vector<double> terms(mu.size());
  Vec y(d), val(d), conv(d);
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Atom& a = mu.atoms()[i];
    std::fill(conv.begin(), conv.end(), 0.0);
    std::fill(idx.begin(), idx.end(), 0);
    // conv = (k_eps * phi)(x_i) over the tensor grid, one field eval per node
    for (;;) {
      double w = 1.0;
      for (int k = 0; k < d; ++k) {
        y[k] = a.x[k] + sqrt2eps * rule.nodes[idx[k]];
        w *= rule.weights[idx[k]] * inv_sqrt_pi;
      }
      phi.value(y, val);
      for (int k = 0; k < d; ++k) conv[k] += w * val[k];
      int k = 0;
      for (; k < d; ++k) {
        if (++idx[k] < nn) break;
        idx[k] = 0;
      }
      if (k == d) break;
    }
    terms[i] = dot(a.w, conv);
  }
  return pairwise_sum(terms);
}

double smoothed_mass_integral(const MollifiedCharge& mc, const TestFunction& psi, int order,
                              int max_dim) {
  const int d = mc.dim();
  if (psi.dim() != d) throw std::invalid_argument("smoothed_mass_integral: dimension mismatch");
  const AtomicCharge& mu = mc.source();
  std::vector<double> terms(mu.size());
  Vec y(d);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Atom& a = mu.atoms()[i];
    terms[i] = norm(a.w) * normal_expectation(
                               d, order,
                               [&](std::span<const double> z) {
                                 for (int j = 0; j < d; ++j) y[j] = a.x[j] + mc.epsilon() * z[j];
                                 return psi.value(y);
                               },
                               max_dim);
  }
  return pairwise_sum(terms);
}

}  // namespace solenoid
