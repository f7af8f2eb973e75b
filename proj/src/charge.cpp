#include "solenoid/charge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace solenoid {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

AtomicCharge::AtomicCharge(int dim) : dim_(dim) {
  if (dim_ < 1) throw std::invalid_argument("charge: dimension must be positive");
}

AtomicCharge::AtomicCharge(int dim, std::vector<Atom> atoms) : dim_(dim) {
  if (dim_ < 1) throw std::invalid_argument("charge: dimension must be positive");
  atoms_.reserve(atoms.size());
  for (auto& a : atoms) {
    if (a.x.size() != static_cast<std::size_t>(dim_) ||
        a.w.size() != static_cast<std::size_t>(dim_))
      throw std::invalid_argument("charge: atom dimension mismatch");
    if (!all_finite(a.x) || !all_finite(a.w))
      throw std::invalid_argument("charge: non-finite atom");
    if (norm2(a.w) == 0.0) continue;  // zero weights are forbidden; drop at construction
    atoms_.push_back(std::move(a));
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) {
    if (a.x != b.x) return lex_less(a.x, b.x);
    return lex_less(a.w, b.w);
  });
}

ScalarAtomicMeasure::ScalarAtomicMeasure(int dim) : dim_(dim) {
  if (dim_ < 1) throw std::invalid_argument("scalar measure: dimension must be positive");
}

ScalarAtomicMeasure::ScalarAtomicMeasure(int dim, std::vector<ScalarAtom> atoms) : dim_(dim) {
  if (dim_ < 1) throw std::invalid_argument("scalar measure: dimension must be positive");
  atoms_.reserve(atoms.size());
  for (auto& a : atoms) {
    if (a.x.size() != static_cast<std::size_t>(dim_))
      throw std::invalid_argument("scalar measure: atom dimension mismatch");
    if (!all_finite(a.x) || !std::isfinite(a.m))
      throw std::invalid_argument("scalar measure: non-finite atom");
    if (a.m == 0.0) continue;
    atoms_.push_back(std::move(a));
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const ScalarAtom& a, const ScalarAtom& b) {
    if (a.x != b.x) return lex_less(a.x, b.x);
    return a.m < b.m;
  });
}

double total_variation(const AtomicCharge& mu) {
  std::vector<double> masses(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) masses[i] = norm(mu.atoms()[i].w);
  return pairwise_sum(masses);
}

double total_variation(const ScalarAtomicMeasure& sigma) {
  std::vector<double> masses(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) masses[i] = std::abs(sigma.atoms()[i].m);
  return pairwise_sum(masses);
}

double pair_with_field(const AtomicCharge& mu, const TestField& phi) {
  if (phi.dim() != mu.dim()) throw std::invalid_argument("pair_with_field: dimension mismatch");
  std::vector<double> terms(mu.size());
  Vec v(mu.dim());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    phi.value(mu.atoms()[i].x, v);
    terms[i] = dot(mu.atoms()[i].w, v);
  }
  return pairwise_sum(terms);
}

double pair_with_function(const ScalarAtomicMeasure& sigma, const TestFunction& psi) {
  if (psi.dim() != sigma.dim())
    throw std::invalid_argument("pair_with_function: dimension mismatch");
  std::vector<double> terms(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i)
    terms[i] = sigma.atoms()[i].m * psi.value(sigma.atoms()[i].x);
  return pairwise_sum(terms);
}

double divergence_action(const AtomicCharge& mu, const TestFunction& psi) {
  if (psi.dim() != mu.dim()) throw std::invalid_argument("divergence_action: dimension mismatch");
  std::vector<double> terms(mu.size());
  Vec g(mu.dim());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    psi.gradient(mu.atoms()[i].x, g);
    terms[i] = dot(mu.atoms()[i].w, g);
  }
  return -pairwise_sum(terms);
}

std::vector<PolarAtom> polar_decompose(const AtomicCharge& mu) {
  std::vector<PolarAtom> out;
  out.reserve(mu.size());
  for (const Atom& a : mu.atoms()) {
    PolarAtom p;
    p.mass = norm(a.w);
    p.direction.resize(a.w.size());
    for (std::size_t k = 0; k < a.w.size(); ++k) p.direction[k] = a.w[k] / p.mass;
    p.position = a.x;
    out.push_back(std::move(p));
  }
  return out;
}

AtomicCharge curve_to_charge(const Curve& gamma) {
  if (gamma.samples() < 2) throw std::invalid_argument("curve_to_charge: degenerate curve");
  const int d = gamma.dim();
  std::vector<Atom> atoms;
  atoms.reserve(gamma.segments());
  for (std::size_t k = 0; k < gamma.segments(); ++k) {
    const auto p = gamma.sample(k);
    const auto q = gamma.sample(k + 1);
    Atom a;
    a.x.resize(d);
    a.w.resize(d);
    for (int j = 0; j < d; ++j) {
      a.x[j] = 0.5 * (p[j] + q[j]);
      a.w[j] = q[j] - p[j];
    }
    atoms.push_back(std::move(a));
  }
  return AtomicCharge(d, std::move(atoms));
}

}  // namespace solenoid
