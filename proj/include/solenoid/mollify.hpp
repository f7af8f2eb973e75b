#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "solenoid/charge.hpp"
#include "solenoid/fields.hpp"

namespace solenoid {

// Gaussian mollification of a nonzero atomic charge at kernel width eps.
// Exposes the bounded drift field  phi(x) = (mu*k_eps)(x) / (|mu|*k_eps)(x),
// the mixture density r_eps of rho_eps = (|mu|*k_eps)·lambda^n, exact
// sampling from rho_eps, and smoothed pairings <mu*k_eps, phi>.
class MollifiedCharge {
 public:
  MollifiedCharge(AtomicCharge source, double epsilon);

  const AtomicCharge& source() const { return source_; }
  double epsilon() const { return eps_; }
  int dim() const { return source_.dim(); }
  double total_mass() const { return var_; }  // = Var(source) = rho_eps(R^n)

  // Drift field value; |result| <= 1. The shared Gaussian prefactor cancels
  // in the ratio, and exponents are shifted by their maximum so the value
  // stays finite arbitrarily far from the atoms (where it tends to the
  // nearest atom's direction).
  void drift(std::span<const double> x, std::span<double> out) const;
  Vec drift_eval(std::span<const double> x) const;

  // r_eps(x) = sum_i |w_i| g_eps(x - x_i) > 0.
  double density_eval(std::span<const double> x) const;

  // One exact mixture draw: atom picked with probability |w_i|/Var, plus
  // eps times a standard normal offset.
  void sample_point(std::mt19937_64& eng, std::span<double> out) const;

  std::vector<Vec> sample_rho(std::uint64_t seed, std::size_t n) const;

 private:
  AtomicCharge source_;
  double eps_;
  double inv_two_eps2_;
  double gauss_norm_;  // (2 pi eps^2)^(-dim/2)
  double var_;
  std::vector<double> pos_;   // flattened atom positions
  std::vector<double> wgt_;   // flattened atom weights
  std::vector<double> mass_;  // |w_i|
  std::vector<double> cum_;   // cumulative masses for inverse-CDF picks
};

// <mu*k_eps, phi> = sum_i <w_i, (k_eps*phi)(x_i)> by per-atom Gauss-Hermite
// quadrature (tensor product, `order` nodes per axis). Dimensions above
// max_dim are refused; use Monte Carlo estimates at that scale instead.
double smoothed_action(const MollifiedCharge& mc, const TestField& phi, int order = 20,
                       int max_dim = 4);

// ∫ psi d(rho_eps) by the same per-atom quadrature.
double smoothed_mass_integral(const MollifiedCharge& mc, const TestFunction& psi,
                              int order = 20, int max_dim = 4);

}  // namespace solenoid
