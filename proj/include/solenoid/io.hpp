#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "solenoid/decompose.hpp"
#include "solenoid/lift.hpp"

namespace solenoid {

// File/parse problems; the CLI maps these to exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Charge files: {"dim": n, "atoms": [{"x": [...], "w": [...]}, ...]}
// Scalar measures use "m" instead of "w". Doubles are serialized with the
// shortest round-trip decimal representation.
AtomicCharge load_charge(const std::filesystem::path& path);
void save_charge(const AtomicCharge& mu, const std::filesystem::path& path);

ScalarAtomicMeasure load_scalar_measure(const std::filesystem::path& path);
void save_scalar_measure(const ScalarAtomicMeasure& sigma, const std::filesystem::path& path);

// Ensembles: {"ell": l, "dim": n, "curves": [{"w": w, "pts": [[...], ...]}]}
CurveEnsemble load_ensemble(const std::filesystem::path& path);
void save_ensemble(const CurveEnsemble& nu, const std::filesystem::path& path);

// One row per (curve id, sample index, coordinates).
void save_ensemble_csv(const CurveEnsemble& nu, const std::filesystem::path& path);

// Panels are regenerated, never stored by value.
struct PanelSpec {
  std::uint64_t seed = 1;
  int n_fields = 10;
  int n_functions = 10;
  Box box;
};

PanelSpec load_panel_spec(const std::filesystem::path& path);
void save_panel_spec(const PanelSpec& spec, const std::filesystem::path& path);
FieldPanel realize_panel(const PanelSpec& spec);

// Report JSON (string form; already serialized deterministically apart from
// the "timestamp" member).
std::string decomposition_report_json(const DecompositionReport& report);
std::string lift_report_json(const LiftReport& report);

void write_text_file(const std::string& content, const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

// Compares two report JSON documents ignoring every "timestamp" member.
bool reports_equal_ignoring_timestamp(const std::string& json_a, const std::string& json_b);

}  // namespace solenoid
