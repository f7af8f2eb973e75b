#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "solenoid/fields.hpp"
#include "solenoid/numeric.hpp"

namespace solenoid {

// 1-Lipschitz curve on [0, ell], stored as m+1 samples at uniform times
// t_k = k*ell/m. The constructor enforces |p_{k+1}-p_k| <= (ell/m)(1+1e-9).
class Curve {
 public:
  Curve(double ell, int dim, std::vector<double> samples_flat);

  double ell() const { return ell_; }
  int dim() const { return dim_; }
  std::size_t segments() const { return segments_; }
  std::size_t samples() const { return segments_ + 1; }
  double dt() const { return ell_ / static_cast<double>(segments_); }

  std::span<const double> sample(std::size_t k) const {
    return {data_.data() + k * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& data() const { return data_; }

  Curve reversed() const;

 private:
  double ell_;
  int dim_;
  std::size_t segments_;
  std::vector<double> data_;
};

// Finite positive measure on curves: weighted list, all sharing ell and dim.
class CurveEnsemble {
 public:
  struct Entry {
    Curve curve;
    double weight;
  };

  CurveEnsemble(double ell, int dim);

  void add(Curve curve, double weight);

  double ell() const { return ell_; }
  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  double ell_;
  int dim_;
  std::vector<Entry> entries_;
};

struct Ball {
  Vec center;
  double radius;
};

// Points x with <normal, x> >= offset.
struct HalfSpace {
  Vec normal;
  double offset;
};

struct Region {
  std::variant<Ball, HalfSpace> shape;
  bool complemented = false;
};

Region complement(Region r);

// Midpoint-tagged Riemann-Stieltjes sum sum_k <phi(mid_k), delta_k>.
// Terms are folded inward (k paired with m-1-k) before the pairwise
// reduction, which makes reversal negate the result exactly.
double curve_action(const Curve& gamma, const TestField& phi);

double length(const Curve& gamma);

// <Div[gamma], psi> = psi(gamma(0)) - psi(gamma(ell)), closed form.
double curve_divergence_action(const Curve& gamma, const TestFunction& psi);

double ensemble_action(const CurveEnsemble& nu, const TestField& phi, int threads = 0);

double ensemble_mass(const CurveEnsemble& nu);

// Per-curve actions in entry order (what ensemble_action reduces over).
std::vector<double> ensemble_curve_actions(const CurveEnsemble& nu, const TestField& phi,
                                           int threads = 0);

// lambda^1-time the polyline spends in the region, by exact per-segment
// clipping. Complemented regions return ell minus the base-region time.
double occupation_time(const Curve& gamma, const Region& region);

struct VariationBracket {
  double lower;  // max over panel fields of curve_action
  double upper;  // length(gamma)
};

VariationBracket variation_bracket(const Curve& gamma, const FieldPanel& panel);

}  // namespace solenoid
