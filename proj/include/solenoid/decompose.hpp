#pragma once

#include <cstdint>
#include <vector>

#include "solenoid/charge.hpp"
#include "solenoid/flow.hpp"

namespace solenoid {

struct DecomposeParams {
  double epsilon;
  std::size_t n_curves;
  FlowConfig flow;
  std::uint64_t seed;
};

// Flow decomposition of an (approximately divergence-free) charge: integrate
// N curves from i.i.d. rho_eps starting points, each weighted
// Var(mu)/(ell*N). Start points and curves are derived from per-index RNG
// streams, so results are identical for every thread count.
CurveEnsemble decompose_div_free(const AtomicCharge& mu, const DecomposeParams& p,
                                 int threads = 0);

// Max over panel functions of |<Div(mu), psi>| / (Var(mu) * sup|grad psi|).
double check_div_free(const AtomicCharge& mu, const FieldPanel& panel);

struct FieldErrorRow {
  double ensemble_action;
  double smoothed_action;   // <mu*k_eps, phi>
  double exact_action;      // <mu, phi>
  double err_vs_smoothed;   // Monte Carlo + RK4 error only
  double err_vs_exact;      // adds the O(eps^2) mollification gap
  double std_error;         // MC standard error of ensemble_action
};

std::vector<FieldErrorRow> reconstruction_error(const AtomicCharge& mu, const CurveEnsemble& nu,
                                                double eps, const FieldPanel& panel,
                                                int threads = 0, int quad_order = 20);

struct EndpointErrorRow {
  double start_estimate;       // ell * sum_j w_j psi(gamma_j(0))
  double rho_integral;         // ∫ psi d rho_eps (quadrature)
  double start_error;          // |start_estimate - rho_integral|
  double start_std_error;      // MC standard error of start_estimate
  double start_end_diff;       // sum_j w_j (psi(gamma_j(0)) - psi(gamma_j(ell)))
  double start_end_std_error;
};

std::vector<EndpointErrorRow> endpoint_identity_error(const CurveEnsemble& nu,
                                                      const AtomicCharge& mu, double eps,
                                                      const FieldPanel& panel,
                                                      int quad_order = 20);

struct LengthStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mean_over_ell = 0.0;
};

LengthStats length_statistics(const CurveEnsemble& nu);

// Fraction of recorded curve samples farther than `radius` from every atom,
// estimated over a deterministic subsample.
double support_outlier_fraction(const CurveEnsemble& nu, const AtomicCharge& mu, double radius,
                                std::size_t curve_stride = 8, std::size_t sample_stride = 4);

struct DecompositionReport {
  double var_mu = 0.0;
  double ensemble_mass = 0.0;
  double mass_rel_error = 0.0;
  LengthStats lengths;
  std::vector<FieldErrorRow> reconstruction;
  std::vector<EndpointErrorRow> endpoint;
  double support_outlier_frac = 0.0;
  double div_free_check = 0.0;
  // parameter echo
  double epsilon = 0.0;
  double ell = 0.0;
  double step = 0.0;
  std::size_t n_curves = 0;
  std::uint64_t seed = 0;
};

DecompositionReport decompose_report(const AtomicCharge& mu, const CurveEnsemble& nu,
                                     const DecomposeParams& p, const FieldPanel& panel,
                                     int threads = 0, int quad_order = 20);

}  // namespace solenoid
