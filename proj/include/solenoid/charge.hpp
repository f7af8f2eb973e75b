#pragma once

#include <span>
#include <vector>

#include "solenoid/curves.hpp"
#include "solenoid/fields.hpp"
#include "solenoid/numeric.hpp"

namespace solenoid {

struct Atom {
  Vec x;  // position
  Vec w;  // vector weight, |w| > 0

  bool operator==(const Atom&) const = default;
};

// Charge discretized as finitely many atoms. Construction drops zero-weight
// atoms, validates dimensions/finiteness and sorts the list canonically
// (position, then weight, lexicographically) so equality and reductions are
// deterministic.
class AtomicCharge {
 public:
  explicit AtomicCharge(int dim);
  AtomicCharge(int dim, std::vector<Atom> atoms);

  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  bool operator==(const AtomicCharge&) const = default;

 private:
  int dim_;
  std::vector<Atom> atoms_;
};

struct ScalarAtom {
  Vec x;
  double m;  // signed mass, nonzero

  bool operator==(const ScalarAtom&) const = default;
};

class ScalarAtomicMeasure {
 public:
  explicit ScalarAtomicMeasure(int dim);
  ScalarAtomicMeasure(int dim, std::vector<ScalarAtom> atoms);

  int dim() const { return dim_; }
  const std::vector<ScalarAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  bool operator==(const ScalarAtomicMeasure&) const = default;

 private:
  int dim_;
  std::vector<ScalarAtom> atoms_;
};

double total_variation(const AtomicCharge& mu);
double total_variation(const ScalarAtomicMeasure& sigma);

// <mu, phi> = sum_i <w_i, phi(x_i)>.
double pair_with_field(const AtomicCharge& mu, const TestField& phi);

// <sigma, psi> = sum_j m_j psi(y_j).
double pair_with_function(const ScalarAtomicMeasure& sigma, const TestFunction& psi);

// <Div(mu), psi> = -<mu, grad psi>.
double divergence_action(const AtomicCharge& mu, const TestFunction& psi);

struct PolarAtom {
  Vec direction;  // unit vector
  double mass;    // positive
  Vec position;
};

std::vector<PolarAtom> polar_decompose(const AtomicCharge& mu);

// One atom per polyline segment: position = midpoint, weight = displacement.
// Zero-length segments are dropped; a constant curve yields the empty charge.
AtomicCharge curve_to_charge(const Curve& gamma);

}  // namespace solenoid
