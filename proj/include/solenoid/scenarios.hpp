#pragma once

#include <optional>
#include <string>

#include "solenoid/charge.hpp"

namespace solenoid {

// Built-in deterministic scenarios. Each documents its exact total variation
// and, where known, its exact divergence measure.
struct Scenario {
  enum class Kind { loop, two_loops, segment, null_charge, single_atom };

  Kind kind = Kind::loop;
  std::size_t n_atoms = 512;  // per loop / per segment
  double radius = 1.0;
  Vec center = {0.0, 0.0};
  Vec a = {0.0, 0.0};  // segment start / single atom position
  Vec b = {1.0, 0.0};  // segment end
  Vec weight = {1.0, 0.0};
  int dim = 2;  // for null_charge

  static Scenario parse(const std::string& name);  // named defaults
};

struct GeneratedScenario {
  AtomicCharge charge;
  std::optional<ScalarAtomicMeasure> divergence;
  double exact_var;   // closed-form total variation
  Box suggested_box;  // bounding box with margin, for panels/probes
};

GeneratedScenario generate(const Scenario& s);

GeneratedScenario make_loop(std::size_t n_atoms, double radius = 1.0, Vec center = {0.0, 0.0});
GeneratedScenario make_two_loops(std::size_t n_atoms);
GeneratedScenario make_segment(std::size_t n_atoms, Vec a, Vec b);
GeneratedScenario make_null_charge(int dim);
GeneratedScenario make_single_atom(Vec x, Vec w);

}  // namespace solenoid
