#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "solenoid/numeric.hpp"

namespace solenoid {

struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  void validate() const;  // throws on empty or mismatched bounds
};

// Smooth probe function psi(x) = P(u) exp(-|u|^2/2) / Z with u = (x-c)/r and
// P a polynomial with constant, linear and diagonal-quadratic terms
// (coeffs = [a0, a_1..a_n, b_1..b_n]). Z is chosen so |psi| <= 1 everywhere:
// exactly |a0| for a pure window, otherwise a probed supremum with a 1.05
// safety factor. Tails fall below 1e-18 beyond ten radii.
class TestFunction {
 public:
  TestFunction(int dim, Vec center, double radius, std::vector<double> coeffs);

  static TestFunction bump(Vec center, double radius);
  static TestFunction zero(int dim);

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;
  Vec gradient(std::span<const double> x) const;

  int dim() const { return dim_; }
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  // Probed suprema of |psi| and |grad psi| (after normalization).
  double sup_norm() const { return sup_; }
  double grad_sup_norm() const { return grad_sup_; }

  bool is_zero() const { return zero_; }

 private:
  void check_dim(std::size_t n) const;

  int dim_;
  Vec center_;
  double radius_;
  double inv_radius_;
  std::vector<double> coeffs_;
  double inv_scale_;
  double sup_;
  double grad_sup_;
  bool zero_;
};

// Vector probe phi = (phi_1, ..., phi_n). Components keep their own
// normalization; an extra field-level scale enforces the Euclidean bound
// |phi(x)| <= 1 (applied only when the probed vector supremum exceeds one,
// again with a 1.05 safety factor).
class TestField {
 public:
  explicit TestField(std::vector<TestFunction> components);

  void value(std::span<const double> x, std::span<double> out) const;
  Vec value(std::span<const double> x) const;

  int dim() const { return static_cast<int>(comps_.size()); }
  const std::vector<TestFunction>& components() const { return comps_; }
  double scale() const { return scale_; }
  double sup_norm() const { return sup_; }

 private:
  std::vector<TestFunction> comps_;
  double scale_;
  double sup_;
};

// Finite, reproducible surrogate for "all test fields/functions".
struct FieldPanel {
  std::uint64_t seed = 0;
  Box domain_box;
  std::vector<TestField> fields;
  std::vector<TestFunction> functions;
};

FieldPanel make_panel(std::uint64_t seed, int n_fields, int n_functions, const Box& box);

}  // namespace solenoid
