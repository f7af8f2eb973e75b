#include "solenoid/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace solenoid {

namespace {

// Newton iteration on the (orthonormal) Hermite recurrence; the classic
// Golub-Welsch alternative needs an eigensolver for no gain at these orders.
GaussHermiteRule compute_rule(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss_hermite: order out of range");
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
  static std::mutex mutex;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

double normal_expectation(int dim, int order,
                          const std::function<double(std::span<const double>)>& f, int max_dim) {
  if (dim < 1) throw std::invalid_argument("normal_expectation: dimension must be positive");
  if (dim > max_dim)
    throw std::invalid_argument(
        "normal_expectation: dimension exceeds tensor-quadrature limit; use Monte Carlo mode");
  const GaussHermiteRule& rule = gauss_hermite(order);
  const std::size_t nn = rule.nodes.size();
  const double sqrt2 = std::sqrt(2.0);
  const double inv_sqrt_pi = 1.0 / std::sqrt(3.14159265358979323846);

  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> z(dim);
  double total = 0.0;
  for (;;) {
    double w = 1.0;
    for (int k = 0; k < dim; ++k) {
      z[k] = sqrt2 * rule.nodes[idx[k]];
      w *= rule.weights[idx[k]] * inv_sqrt_pi;
    }
    total += w * f(z);
    int k = 0;
    for (; k < dim; ++k) {
      if (++idx[k] < nn) break;
      idx[k] = 0;
    }
    if (k == dim) break;
  }
  return total;
}

}  // namespace solenoid
