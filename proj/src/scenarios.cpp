#include "solenoid/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace solenoid {

namespace {

constexpr double kPi = 3.14159265358979323846;

Box bounding_box_with_margin(const AtomicCharge& mu, double margin, int dim) {
  Box box;
  box.lo.assign(dim, -1.0);
  box.hi.assign(dim, 1.0);
  if (!mu.empty()) {
    for (int k = 0; k < dim; ++k) {
      double lo = mu.atoms().front().x[k], hi = lo;
      for (const Atom& a : mu.atoms()) {
        lo = std::min(lo, a.x[k]);
        hi = std::max(hi, a.x[k]);
      }
      box.lo[k] = lo - margin;
      box.hi[k] = hi + margin;
    }
  }
  return box;
}

void append_loop_atoms(std::vector<Atom>& atoms, std::size_t n, double radius,
                       const Vec& center) {
  // midpoints and edge vectors of the inscribed regular n-gon
  const double apothem = radius * std::cos(kPi / static_cast<double>(n));
  const double edge = 2.0 * radius * std::sin(kPi / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = (static_cast<double>(i) + 0.5) * 2.0 * kPi / static_cast<double>(n);
    Atom a;
    a.x = {center[0] + apothem * std::cos(theta), center[1] + apothem * std::sin(theta)};
    a.w = {-edge * std::sin(theta), edge * std::cos(theta)};
    atoms.push_back(std::move(a));
  }
}

}  // namespace

GeneratedScenario make_loop(std::size_t n_atoms, double radius, Vec center) {
  if (n_atoms < 3) throw std::invalid_argument("loop scenario: need at least 3 atoms");
  if (!(radius > 0.0)) throw std::invalid_argument("loop scenario: radius must be positive");
  if (center.size() != 2) throw std::invalid_argument("loop scenario: center must be 2d");
  std::vector<Atom> atoms;
  atoms.reserve(n_atoms);
  append_loop_atoms(atoms, n_atoms, radius, center);
  GeneratedScenario g{AtomicCharge(2, std::move(atoms)), std::nullopt,
                      2.0 * static_cast<double>(n_atoms) * radius *
                          std::sin(kPi / static_cast<double>(n_atoms)),
                      Box{}};
  g.suggested_box = bounding_box_with_margin(g.charge, 0.5 * radius, 2);
  return g;
}

GeneratedScenario make_two_loops(std::size_t n_atoms) {
  if (n_atoms < 3) throw std::invalid_argument("two loops scenario: need at least 3 atoms");
  std::vector<Atom> atoms;
  const std::size_t n_small = std::max<std::size_t>(3, (n_atoms * 3) / 5);
  atoms.reserve(n_atoms + n_small);
  append_loop_atoms(atoms, n_atoms, 1.0, {-1.3, 0.0});
  append_loop_atoms(atoms, n_small, 0.6, {1.1, 0.0});
  const double var =
      2.0 * static_cast<double>(n_atoms) * std::sin(kPi / static_cast<double>(n_atoms)) +
      2.0 * static_cast<double>(n_small) * 0.6 * std::sin(kPi / static_cast<double>(n_small));
  GeneratedScenario g{AtomicCharge(2, std::move(atoms)), std::nullopt, var, Box{}};
  g.suggested_box = bounding_box_with_margin(g.charge, 0.5, 2);
  return g;
}

GeneratedScenario make_segment(std::size_t n_atoms, Vec a, Vec b) {
  if (n_atoms < 1) throw std::invalid_argument("segment scenario: need at least 1 atom");
  const int d = static_cast<int>(a.size());
  if (b.size() != a.size() || d < 1)
    throw std::invalid_argument("segment scenario: endpoint dimension mismatch");
  Vec delta(d);
  for (int k = 0; k < d; ++k) delta[k] = (b[k] - a[k]) / static_cast<double>(n_atoms);
  std::vector<Atom> atoms;
  atoms.reserve(n_atoms);
  for (std::size_t i = 0; i < n_atoms; ++i) {
    Atom at;
    at.x.resize(d);
    for (int k = 0; k < d; ++k)
      at.x[k] = a[k] + (static_cast<double>(i) + 0.5) * delta[k];
    at.w = delta;
    atoms.push_back(std::move(at));
  }
  Vec full(d);
  for (int k = 0; k < d; ++k) full[k] = b[k] - a[k];
  std::vector<ScalarAtom> sig = {{a, 1.0}, {b, -1.0}};  // Div = delta_start - delta_end
  GeneratedScenario g{AtomicCharge(d, std::move(atoms)),
                      ScalarAtomicMeasure(d, std::move(sig)), norm(full), Box{}};
  g.suggested_box = bounding_box_with_margin(g.charge, 0.6, d);
  return g;
}

GeneratedScenario make_null_charge(int dim) {
  GeneratedScenario g{AtomicCharge(dim), std::nullopt, 0.0, Box{}};
  g.suggested_box.lo.assign(dim, -1.0);
  g.suggested_box.hi.assign(dim, 1.0);
  return g;
}

GeneratedScenario make_single_atom(Vec x, Vec w) {
  const int d = static_cast<int>(x.size());
  if (w.size() != x.size() || d < 1)
    throw std::invalid_argument("single atom scenario: dimension mismatch");
  const double var = norm(w);
  if (var == 0.0) throw std::invalid_argument("single atom scenario: zero weight");
  GeneratedScenario g{AtomicCharge(d, {{x, w}}), std::nullopt, var, Box{}};
  g.suggested_box = bounding_box_with_margin(g.charge, 1.5, d);
  return g;
}

Scenario Scenario::parse(const std::string& name) {
  Scenario s;
  if (name == "loop") {
    s.kind = Kind::loop;
  } else if (name == "two-loops" || name == "two_loops") {
    s.kind = Kind::two_loops;
  } else if (name == "segment") {
    s.kind = Kind::segment;
    s.n_atoms = 64;
  } else if (name == "null" || name == "null-charge" || name == "null_charge") {
    s.kind = Kind::null_charge;
  } else if (name == "single-atom" || name == "single_atom") {
    s.kind = Kind::single_atom;
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  return s;
}

GeneratedScenario generate(const Scenario& s) {
  switch (s.kind) {
    case Scenario::Kind::loop: return make_loop(s.n_atoms, s.radius, s.center);
    case Scenario::Kind::two_loops: return make_two_loops(s.n_atoms);
    case Scenario::Kind::segment: return make_segment(s.n_atoms, s.a, s.b);
    case Scenario::Kind::null_charge: return make_null_charge(s.dim);
    case Scenario::Kind::single_atom: return make_single_atom(s.a, s.weight);
  }
  throw std::invalid_argument("generate: bad scenario kind");
}

}  // namespace solenoid
