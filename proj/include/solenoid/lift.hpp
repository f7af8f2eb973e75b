#pragma once

#include <optional>
#include <utility>

#include "solenoid/decompose.hpp"

namespace solenoid {

// Charge mu together with an atomic signed measure sigma meant to equal
// Div(mu) in the weak sense. The certification value is
//   max over panel psi of |<sigma,psi> + <mu,grad psi>|
//   ------------------------------------------------------
//   Var(mu)·sup|grad psi| + Var(sigma)·sup|psi|
// and the pair counts as certified when it does not exceed the threshold.
class DivergencePair {
 public:
  DivergencePair(AtomicCharge mu, ScalarAtomicMeasure sigma, const FieldPanel& panel,
                 double threshold = 0.05);

  const AtomicCharge& mu() const { return mu_; }
  const ScalarAtomicMeasure& sigma() const { return sigma_; }
  double certification() const { return certification_; }
  double threshold() const { return threshold_; }
  bool certified() const { return certification_ <= threshold_; }

 private:
  AtomicCharge mu_;
  ScalarAtomicMeasure sigma_;
  double certification_;
  double threshold_;
};

struct LiftParams {
  double ell;                // strip height = curve length budget
  std::size_t column_atoms;  // per-sigma-atom discretization of lambda^1|[0,ell], >= 4
  double slab_width;         // plane-detection tolerance delta < ell/4
  DecomposeParams inner;     // decomposition parameters for the lifted run
};

// Divergence-free lift in dimension n+1: each mu-atom doubled into opposite
// layers at heights 0 and ell, each sigma-atom spread into a vertical column
// of midpoint atoms with weight (0,...,0, -s*ell/m). Var of the lift equals
// 2 Var(mu) + ell Var(sigma) exactly.
AtomicCharge build_lift(const DivergencePair& pair, const LiftParams& p);

// Same normalized divergence bound as check_div_free, on an (n+1)-dim panel.
double verify_lift_divergence(const AtomicCharge& lifted, const FieldPanel& panel);

// Clips a lifted curve to its first/last visit of the slab {t <= delta},
// holds it constant outside, projects out the vertical coordinate and
// resamples on the same uniform grid. Curves that never visit the slab
// contribute nothing and yield nullopt.
std::optional<Curve> classify_clip_project(const Curve& gamma_plus, const LiftParams& p);

struct LiftReport {
  double var_mu = 0.0;
  double var_sigma = 0.0;
  double var_lift = 0.0;
  double certification = 0.0;
  double lift_divergence_check = 0.0;  // on the inner panel's lifted box

  std::size_t curves_total = 0;
  std::size_t curves_kept = 0;
  double kept_weight = 0.0;
  double discarded_weight = 0.0;

  std::vector<FieldErrorRow> reconstruction;  // vs <mu, phi> on the panel

  // Vertical-speed diagnostic inside the strip. Ascent sites are the
  // sigma-atoms with negative mass (the lifted columns point upward there),
  // descent sites those with positive mass; the flow is vertical over both.
  double mean_vertical_speed_ascent = 0.0;
  std::size_t ascent_samples = 0;
  double mean_vertical_speed_descent = 0.0;
  std::size_t descent_samples = 0;

  // parameter echo
  double ell = 0.0;
  double epsilon = 0.0;
  double slab_width = 0.0;
  std::size_t column_atoms = 0;
  std::size_t n_curves = 0;
  std::uint64_t seed = 0;
};

// Full pipeline: build the lift, decompose it in dimension n+1, clip and
// project every curve, and report reconstruction errors of mu on the panel
// together with mass accounting and the vertical-speed diagnostic.
std::pair<CurveEnsemble, LiftReport> decompose_with_divergence(const DivergencePair& pair,
                                                               const LiftParams& p,
                                                               const FieldPanel& panel,
                                                               int threads = 0,
                                                               int quad_order = 20);

}  // namespace solenoid
