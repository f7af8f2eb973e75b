#include "solenoid/io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace solenoid {

using nlohmann::json;

namespace {

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("parse error in " + path.string() + ": " + e.what());
  }
  return j;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

Vec as_vec(const json& j, std::size_t expect, const char* what) {
  if (!j.is_array() || j.size() != expect) throw IoError(std::string("bad ") + what);
  Vec v(expect);
  for (std::size_t k = 0; k < expect; ++k) {
    if (!j[k].is_number()) throw IoError(std::string("bad ") + what);
    v[k] = j[k].get<double>();
  }
  return v;
}

}  // namespace

AtomicCharge load_charge(const std::filesystem::path& path) {
  const json j = parse_file(path);
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<Atom> atoms;
    for (const json& ja : j.at("atoms")) {
      Atom a;
      a.x = as_vec(ja.at("x"), dim, "atom position");
      a.w = as_vec(ja.at("w"), dim, "atom weight");
      atoms.push_back(std::move(a));
    }
    return AtomicCharge(dim, std::move(atoms));
  } catch (const json::exception& e) {
    throw IoError("malformed charge file " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError("invalid charge in " + path.string() + ": " + e.what());
  }
}

void save_charge(const AtomicCharge& mu, const std::filesystem::path& path) {
  json atoms = json::array();
  for (const Atom& a : mu.atoms()) atoms.push_back({{"x", a.x}, {"w", a.w}});
  write_json({{"dim", mu.dim()}, {"atoms", std::move(atoms)}}, path);
}

ScalarAtomicMeasure load_scalar_measure(const std::filesystem::path& path) {
  const json j = parse_file(path);
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<ScalarAtom> atoms;
    for (const json& ja : j.at("atoms")) {
      ScalarAtom a;
      a.x = as_vec(ja.at("x"), dim, "atom position");
      if (!ja.at("m").is_number()) throw IoError("bad atom mass");
      a.m = ja.at("m").get<double>();
      atoms.push_back(std::move(a));
    }
    return ScalarAtomicMeasure(dim, std::move(atoms));
  } catch (const json::exception& e) {
    throw IoError("malformed measure file " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError("invalid measure in " + path.string() + ": " + e.what());
  }
}

void save_scalar_measure(const ScalarAtomicMeasure& sigma, const std::filesystem::path& path) {
  json atoms = json::array();
  for (const ScalarAtom& a : sigma.atoms()) atoms.push_back({{"x", a.x}, {"m", a.m}});
  write_json({{"dim", sigma.dim()}, {"atoms", std::move(atoms)}}, path);
}

CurveEnsemble load_ensemble(const std::filesystem::path& path) {
  const json j = parse_file(path);
  try {
    const double ell = j.at("ell").get<double>();
    const int dim = j.at("dim").get<int>();
    CurveEnsemble nu(ell, dim);
    for (const json& jc : j.at("curves")) {
      const json& pts = jc.at("pts");
      if (!pts.is_array() || pts.size() < 2) throw IoError("bad curve samples");
      std::vector<double> flat;
      flat.reserve(pts.size() * dim);
      for (const json& p : pts) {
        const Vec v = as_vec(p, dim, "curve sample");
        flat.insert(flat.end(), v.begin(), v.end());
      }
      nu.add(Curve(ell, dim, std::move(flat)), jc.at("w").get<double>());
    }
    return nu;
  } catch (const json::exception& e) {
    throw IoError("malformed ensemble file " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError("invalid ensemble in " + path.string() + ": " + e.what());
  }
}

void save_ensemble(const CurveEnsemble& nu, const std::filesystem::path& path) {
  json curves = json::array();
  for (const auto& entry : nu.entries()) {
    json pts = json::array();
    for (std::size_t k = 0; k < entry.curve.samples(); ++k) {
      const auto s = entry.curve.sample(k);
      pts.push_back(Vec(s.begin(), s.end()));
    }
    curves.push_back({{"w", entry.weight}, {"pts", std::move(pts)}});
  }
  write_json({{"ell", nu.ell()}, {"dim", nu.dim()}, {"curves", std::move(curves)}}, path);
}

void save_ensemble_csv(const CurveEnsemble& nu, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "curve,sample";
  for (int k = 0; k < nu.dim(); ++k) out << ",x" << k;
  out << "\n";
  out.precision(17);
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const Curve& c = nu.entries()[j].curve;
    for (std::size_t k = 0; k < c.samples(); ++k) {
      out << j << "," << k;
      for (double v : c.sample(k)) out << "," << v;
      out << "\n";
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

PanelSpec load_panel_spec(const std::filesystem::path& path) {
  const json j = parse_file(path);
  try {
    PanelSpec spec;
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.n_fields = j.at("n_fields").get<int>();
    spec.n_functions = j.at("n_functions").get<int>();
    spec.box.lo = j.at("box").at("lo").get<Vec>();
    spec.box.hi = j.at("box").at("hi").get<Vec>();
    spec.box.validate();
    return spec;
  } catch (const json::exception& e) {
    throw IoError("malformed panel spec " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError("invalid panel spec in " + path.string() + ": " + e.what());
  }
}

void save_panel_spec(const PanelSpec& spec, const std::filesystem::path& path) {
  write_json({{"seed", spec.seed},
              {"n_fields", spec.n_fields},
              {"n_functions", spec.n_functions},
              {"box", {{"lo", spec.box.lo}, {"hi", spec.box.hi}}}},
             path);
}

FieldPanel realize_panel(const PanelSpec& spec) {
  return make_panel(spec.seed, spec.n_fields, spec.n_functions, spec.box);
}

namespace {

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json field_rows_json(const std::vector<FieldErrorRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"ensemble_action", r.ensemble_action},
                   {"smoothed_action", r.smoothed_action},
                   {"exact_action", r.exact_action},
                   {"err_vs_smoothed", r.err_vs_smoothed},
                   {"err_vs_exact", r.err_vs_exact},
                   {"std_error", r.std_error}});
  }
  return out;
}

}  // namespace

std::string decomposition_report_json(const DecompositionReport& r) {
  json j;
  j["command"] = "decompose";
  j["timestamp"] = timestamp_now();
  j["params"] = {{"epsilon", r.epsilon}, {"ell", r.ell},       {"step", r.step},
                 {"n_curves", r.n_curves}, {"seed", r.seed}};
  j["mass"] = {{"var_mu", r.var_mu},
               {"ensemble_mass", r.ensemble_mass},
               {"rel_error", r.mass_rel_error}};
  j["lengths"] = {{"mean", r.lengths.mean},
                  {"min", r.lengths.min},
                  {"max", r.lengths.max},
                  {"mean_over_ell", r.lengths.mean_over_ell}};
  j["div_free_check"] = r.div_free_check;
  j["support_outlier_fraction"] = r.support_outlier_frac;
  j["reconstruction"] = field_rows_json(r.reconstruction);
  json ep = json::array();
  for (const auto& e : r.endpoint) {
    ep.push_back({{"start_estimate", e.start_estimate},
                  {"rho_integral", e.rho_integral},
                  {"start_error", e.start_error},
                  {"start_std_error", e.start_std_error},
                  {"start_end_diff", e.start_end_diff},
                  {"start_end_std_error", e.start_end_std_error}});
  }
  j["endpoint"] = std::move(ep);
  return j.dump(2);
}

std::string lift_report_json(const LiftReport& r) {
  json j;
  j["command"] = "lift-decompose";
  j["timestamp"] = timestamp_now();
  j["params"] = {{"ell", r.ell},
                 {"epsilon", r.epsilon},
                 {"slab_width", r.slab_width},
                 {"column_atoms", r.column_atoms},
                 {"n_curves", r.n_curves},
                 {"seed", r.seed}};
  j["variation"] = {{"mu", r.var_mu}, {"sigma", r.var_sigma}, {"lift", r.var_lift}};
  j["certification"] = r.certification;
  j["lift_divergence_check"] = r.lift_divergence_check;
  j["mass"] = {{"curves_total", r.curves_total},
               {"curves_kept", r.curves_kept},
               {"kept_weight", r.kept_weight},
               {"discarded_weight", r.discarded_weight}};
  j["vertical_speed"] = {{"mean_at_ascent_sites", r.mean_vertical_speed_ascent},
                         {"ascent_samples", r.ascent_samples},
                         {"mean_at_descent_sites", r.mean_vertical_speed_descent},
                         {"descent_samples", r.descent_samples}};
  j["reconstruction"] = field_rows_json(r.reconstruction);
  return j.dump(2);
}

void write_text_file(const std::string& content, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

void strip_timestamps(json& j) {
  if (j.is_object()) {
    j.erase("timestamp");
    for (auto& [key, value] : j.items()) strip_timestamps(value);
  } else if (j.is_array()) {
    for (auto& value : j) strip_timestamps(value);
  }
}

}  // namespace

bool reports_equal_ignoring_timestamp(const std::string& json_a, const std::string& json_b) {
  json a, b;
  try {
    a = json::parse(json_a);
    b = json::parse(json_b);
  } catch (const json::exception& e) {
    throw IoError(std::string("report comparison: ") + e.what());
  }
  strip_timestamps(a);
  strip_timestamps(b);
  return a == b;
}

}  // namespace solenoid
