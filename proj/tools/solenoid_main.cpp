// Command-line front end: scenario generation, divergence checks, the two
// decomposition pipelines, the verification suite and report utilities.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O or parse error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "solenoid/io.hpp"
#include "solenoid/lift.hpp"
#include "solenoid/scenarios.hpp"
#include "solenoid/verify.hpp"

namespace {

using namespace solenoid;

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("SOLENOID_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("SOLENOID_SEED must be an unsigned integer");
    }
  }
  return flag_seed;
}

FieldPanel panel_for_charge(const AtomicCharge& mu, std::uint64_t seed, int n_fields,
                            int n_functions) {
  Box box;
  const int d = mu.dim();
  box.lo.assign(d, -1.0);
  box.hi.assign(d, 1.0);
  if (!mu.empty()) {
    for (int k = 0; k < d; ++k) {
      double lo = mu.atoms().front().x[k], hi = lo;
      for (const Atom& a : mu.atoms()) {
        lo = std::min(lo, a.x[k]);
        hi = std::max(hi, a.x[k]);
      }
      const double margin = 0.35 * std::max(1.0, hi - lo);
      box.lo[k] = lo - margin;
      box.hi[k] = hi + margin;
    }
  }
  return make_panel(seed, n_fields, n_functions, box);
}

int cmd_gen(const std::string& scenario_name, std::size_t atoms, double radius,
            const std::string& out, const std::string& div_out) {
  Scenario s = Scenario::parse(scenario_name);
  if (atoms > 0) s.n_atoms = atoms;
  s.radius = radius;
  const GeneratedScenario g = generate(s);
  save_charge(g.charge, out);
  std::cout << "wrote " << out << " (" << g.charge.size()
            << " atoms, Var = " << total_variation(g.charge) << ")\n";
  if (!div_out.empty()) {
    if (!g.divergence) {
      std::cerr << "scenario " << scenario_name << " has no exact divergence measure\n";
      return 2;
    }
    save_scalar_measure(*g.divergence, div_out);
    std::cout << "wrote " << div_out << "\n";
  }
  return 0;
}

int cmd_check_div(const std::string& charge_path, double threshold, std::uint64_t seed,
                  int n_functions) {
  const AtomicCharge mu = load_charge(charge_path);
  if (mu.empty()) {
    std::cout << "normalized divergence 0 (empty charge)\n";
    return 0;
  }
  const FieldPanel panel = panel_for_charge(mu, seed, 1, n_functions);
  const double value = check_div_free(mu, panel);
  std::cout << "normalized divergence " << value << " (threshold " << threshold << ")\n";
  return value <= threshold ? 0 : 1;
}

int cmd_decompose(const std::string& charge_path, double ell, double eps, std::size_t n_curves,
                  double step, std::size_t records, std::uint64_t seed, int threads,
                  int quad_order, std::uint64_t panel_seed, int n_fields, int n_functions,
                  const std::string& out, const std::string& report_path,
                  const std::string& csv_path) {
  const AtomicCharge mu = load_charge(charge_path);
  FlowConfig flow = records > 0 ? FlowConfig(ell, step, records)
                                : FlowConfig::auto_records(ell, step);
  const DecomposeParams params{eps, n_curves, flow, seed};
  const CurveEnsemble nu = decompose_div_free(mu, params, threads);
  if (!out.empty()) save_ensemble(nu, out);
  if (!csv_path.empty()) save_ensemble_csv(nu, csv_path);
  const FieldPanel panel = panel_for_charge(mu, panel_seed, n_fields, n_functions);
  const DecompositionReport report =
      decompose_report(mu, nu, params, panel, threads, quad_order);
  const std::string json_text = decomposition_report_json(report);
  if (!report_path.empty()) write_text_file(json_text, report_path);
  std::cout << "decomposed " << charge_path << ": " << nu.size() << " curves, mass "
            << report.ensemble_mass << " (rel. mass error " << report.mass_rel_error << ")\n";
  return 0;
}

int cmd_lift_decompose(const std::string& charge_path, const std::string& div_path, double ell,
                       double eps, std::size_t n_curves, double step, std::size_t records,
                       std::size_t column_atoms, double slab, double cert_threshold,
                       std::uint64_t seed, int threads, std::uint64_t panel_seed, int n_fields,
                       int n_functions, const std::string& out, const std::string& report_path,
                       const std::string& csv_path) {
  const AtomicCharge mu = load_charge(charge_path);
  const ScalarAtomicMeasure sigma = load_scalar_measure(div_path);
  const FieldPanel panel = [&] {
    if (!mu.empty()) return panel_for_charge(mu, panel_seed, n_fields, n_functions);
    AtomicCharge proxy(sigma.dim(), [&] {
      std::vector<Atom> atoms;
      for (const ScalarAtom& a : sigma.atoms()) {
        Vec w(sigma.dim(), 0.0);
        w[0] = a.m;
        atoms.push_back({a.x, w});
      }
      return atoms;
    }());
    return panel_for_charge(proxy, panel_seed, n_fields, n_functions);
  }();
  const DivergencePair pair(mu, sigma, panel, cert_threshold);
  if (!pair.certified()) {
    std::cout << "certification " << pair.certification() << " exceeds threshold "
              << pair.threshold() << "\n";
    return 1;
  }
  FlowConfig flow = records > 0 ? FlowConfig(ell, step, records)
                                : FlowConfig::auto_records(ell, step);
  const LiftParams params{ell, column_atoms, slab, DecomposeParams{eps, n_curves, flow, seed}};
  auto [nu, report] = decompose_with_divergence(pair, params, panel, threads);
  if (!out.empty()) save_ensemble(nu, out);
  if (!csv_path.empty()) save_ensemble_csv(nu, csv_path);
  const std::string json_text = lift_report_json(report);
  if (!report_path.empty()) write_text_file(json_text, report_path);
  std::cout << "lift-decomposed " << charge_path << ": kept " << report.curves_kept << "/"
            << report.curves_total << " curves, kept weight " << report.kept_weight << "\n";
  return 0;
}

int cmd_report(const std::string& in_path, const std::string& compare_path) {
  const std::string text = read_text_file(in_path);
  if (!compare_path.empty()) {
    const std::string other = read_text_file(compare_path);
    const bool equal = reports_equal_ignoring_timestamp(text, other);
    std::cout << (equal ? "reports identical (timestamp excluded)\n"
                        : "reports DIFFER (timestamp excluded)\n");
    return equal ? 0 : 1;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("report parse error: ") + e.what());
  }
  // render a compact table of scalar entries
  std::cout << "report " << in_path << "\n";
  for (const auto& [key, value] : j.items()) {
    if (value.is_primitive())
      std::cout << "  " << key << ": " << value.dump() << "\n";
    else
      std::cout << "  " << key << ": " << value.dump().substr(0, 120) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decomposition of atomic vector measures into weighted curve ensembles"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a built-in scenario charge");
  std::string gen_scenario = "loop", gen_out = "mu.json", gen_div;
  std::size_t gen_atoms = 0;
  double gen_radius = 1.0;
  gen->add_option("--scenario", gen_scenario,
                  "loop | two-loops | segment | null | single-atom");
  gen->add_option("--atoms", gen_atoms, "atom count (scenario default when 0)");
  gen->add_option("--radius", gen_radius, "loop radius");
  gen->add_option("--out", gen_out, "output charge file")->required();
  gen->add_option("--div", gen_div, "also write the exact divergence measure");

  // check-div
  auto* chk = app.add_subcommand("check-div", "normalized panel bound on |<Div mu, psi>|");
  std::string chk_charge;
  double chk_threshold = 0.05;
  std::uint64_t chk_seed = 1;
  int chk_functions = 10;
  chk->add_option("--charge", chk_charge)->required();
  chk->add_option("--threshold", chk_threshold, "pass/fail threshold (default 0.05)");
  chk->add_option("--panel-seed", chk_seed);
  chk->add_option("--functions", chk_functions);

  // decompose
  auto* dec = app.add_subcommand("decompose", "flow decomposition of a divergence-free charge");
  std::string dec_charge, dec_out, dec_report, dec_csv;
  double dec_ell = 1.0, dec_eps = 0.05, dec_step = 1e-3;
  std::size_t dec_curves = 1000, dec_records = 0;
  std::uint64_t dec_seed = 1, dec_panel_seed = 1;
  int dec_threads = 0, dec_quad = 20, dec_fields = 10, dec_functions = 10;
  dec->add_option("--charge", dec_charge)->required();
  dec->add_option("--ell", dec_ell);
  dec->add_option("--eps", dec_eps);
  dec->add_option("--curves", dec_curves);
  dec->add_option("--step", dec_step);
  dec->add_option("--records", dec_records, "recorded samples per curve (auto when 0)");
  dec->add_option("--seed", dec_seed);
  dec->add_option("--threads", dec_threads, "worker threads (0 = cores)");
  dec->add_option("--quad-order", dec_quad);
  dec->add_option("--panel-seed", dec_panel_seed);
  dec->add_option("--fields", dec_fields);
  dec->add_option("--functions", dec_functions);
  dec->add_option("--out", dec_out, "ensemble JSON output");
  dec->add_option("--report", dec_report, "report JSON output");
  dec->add_option("--csv", dec_csv, "curve samples CSV output");

  // lift-decompose
  auto* lft = app.add_subcommand("lift-decompose",
                                 "decomposition via the divergence-free lift");
  std::string lft_charge, lft_div, lft_out, lft_report, lft_csv;
  double lft_ell = 1.0, lft_eps = 0.05, lft_step = 2.5e-3, lft_slab = 0.1, lft_cert = 0.05;
  std::size_t lft_curves = 1000, lft_records = 0, lft_columns = 64;
  std::uint64_t lft_seed = 1, lft_panel_seed = 1;
  int lft_threads = 0, lft_fields = 10, lft_functions = 10;
  lft->add_option("--charge", lft_charge)->required();
  lft->add_option("--div", lft_div, "atomic divergence measure")->required();
  lft->add_option("--ell", lft_ell);
  lft->add_option("--eps", lft_eps);
  lft->add_option("--curves", lft_curves);
  lft->add_option("--step", lft_step);
  lft->add_option("--records", lft_records);
  lft->add_option("--column-atoms", lft_columns);
  lft->add_option("--slab", lft_slab, "slab width delta");
  lft->add_option("--cert-threshold", lft_cert);
  lft->add_option("--seed", lft_seed);
  lft->add_option("--threads", lft_threads);
  lft->add_option("--panel-seed", lft_panel_seed);
  lft->add_option("--fields", lft_fields);
  lft->add_option("--functions", lft_functions);
  lft->add_option("--out", lft_out);
  lft->add_option("--report", lft_report);
  lft->add_option("--csv", lft_csv);

  // verify
  auto* ver = app.add_subcommand("verify", "run the acceptance criteria");
  VerifyConfig vcfg;
  std::string ver_report, ver_criteria;
  std::uint64_t ver_seed = vcfg.seed;
  ver->add_option("--seed", ver_seed);
  ver->add_option("--threads", vcfg.threads);
  ver->add_option("--tolerance-scale", vcfg.tolerance_scale);
  ver->add_option("--report", ver_report, "acceptance report JSON output");
  ver->add_option("--criteria", ver_criteria, "comma-separated criterion ids (default all)");

  // report
  auto* repc = app.add_subcommand("report", "render or compare report JSON");
  std::string rep_in, rep_compare;
  repc->add_option("--in", rep_in)->required();
  repc->add_option("--compare", rep_compare, "second report; exit 0 iff equal sans timestamp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(gen_scenario, gen_atoms, gen_radius, gen_out, gen_div);
    if (*chk)
      return cmd_check_div(chk_charge, chk_threshold, effective_seed(chk_seed), chk_functions);
    if (*dec)
      return cmd_decompose(dec_charge, dec_ell, dec_eps, dec_curves, dec_step, dec_records,
                           effective_seed(dec_seed), dec_threads, dec_quad, dec_panel_seed,
                           dec_fields, dec_functions, dec_out, dec_report, dec_csv);
    if (*lft)
      return cmd_lift_decompose(lft_charge, lft_div, lft_ell, lft_eps, lft_curves, lft_step,
                                lft_records, lft_columns, lft_slab, lft_cert,
                                effective_seed(lft_seed), lft_threads, lft_panel_seed, lft_fields,
                                lft_functions, lft_out, lft_report, lft_csv);
    if (*ver) {
      vcfg.seed = effective_seed(ver_seed);
      if (!ver_report.empty()) vcfg.report_path = ver_report;
      if (!ver_criteria.empty()) {
        std::stringstream ss(ver_criteria);
        std::string tok;
        while (std::getline(ss, tok, ','))
          if (!tok.empty()) vcfg.only_criteria.push_back(std::stoi(tok));
      }
      return run_verify(vcfg, std::cout);
    }
    if (*repc) return cmd_report(rep_in, rep_compare);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
