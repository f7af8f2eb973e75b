#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace solenoid {

// Nodes and weights for ∫ f(t) e^{-t^2} dt ≈ Σ w_i f(t_i) (physicists'
// convention; weights sum to sqrt(pi)).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussHermiteRule& gauss_hermite(int order);

// E[f(Z)] for Z ~ N(0, I_dim) via the tensor-product rule; f receives a
// dim-length point. Throws for dim > max_dim.
double normal_expectation(int dim, int order,
                          const std::function<double(std::span<const double>)>& f,
                          int max_dim = 4);

}  // namespace solenoid
