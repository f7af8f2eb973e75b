#include "solenoid/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "solenoid/io.hpp"
#include "solenoid/lift.hpp"
#include "solenoid/rng.hpp"
#include "solenoid/scenarios.hpp"

namespace solenoid {

namespace {

using nlohmann::json;

CheckRow check_le(std::string what, double measured, double tol) {
  return {std::move(what), measured, tol, measured <= tol};
}

CheckRow check_lt(std::string what, double measured, double tol) {
  return {std::move(what), measured, tol, measured < tol};
}

CheckRow check_ge(std::string what, double measured, double tol) {
  return {std::move(what), measured, tol, measured >= tol};
}

CheckRow check_in(std::string what, double measured, double lo, double hi) {
  CheckRow row{std::move(what), measured, hi, measured >= lo && measured <= hi};
  return row;
}

// Shared artifacts; built on demand so a criteria filter only pays for what
// it uses.
struct Context {
  explicit Context(const VerifyConfig& c) : cfg(c) {}

  const VerifyConfig& cfg;

  double tol(double t) const { return t * cfg.tolerance_scale; }

  const GeneratedScenario& loop() {
    if (!loop_) loop_ = make_loop(512, 1.0);
    return *loop_;
  }

  const FieldPanel& loop_panel() {
    if (!loop_panel_) loop_panel_ = make_panel(cfg.seed, 10, 10, loop().suggested_box);
    return *loop_panel_;
  }

  // Criterion-4 run: loop, ell=1, eps=0.05, h=1e-3, N=2e4.
  const DecomposeParams& loop_params() {
    if (!loop_params_)
      loop_params_ = DecomposeParams{0.05, 20000, FlowConfig(1.0, 1e-3, 251), cfg.seed};
    return *loop_params_;
  }

  const CurveEnsemble& loop_ensemble() {
    if (!loop_ensemble_)
      loop_ensemble_ = decompose_div_free(loop().charge, loop_params(), cfg.threads);
    return *loop_ensemble_;
  }

  const DecompositionReport& loop_report() {
    if (!loop_report_)
      loop_report_ = decompose_report(loop().charge, loop_ensemble(), loop_params(), loop_panel(),
                                      cfg.threads);
    return *loop_report_;
  }

  const GeneratedScenario& segment() {
    if (!segment_) segment_ = make_segment(64, {0.0, 0.0}, {1.0, 0.0});
    return *segment_;
  }

  const FieldPanel& segment_panel() {
    if (!segment_panel_) segment_panel_ = make_panel(cfg.seed ^ 0x5e6ull, 10, 10, segment().suggested_box);
    return *segment_panel_;
  }

  // Criterion-10 run: segment lift, eps=0.05, N=2e4, delta=0.1, m=64.
  struct LiftRun {
    FieldPanel panel;  // aligned field first
    CurveEnsemble ensemble;
    LiftReport report;
  };

  const LiftRun& lift_run() {
    if (!lift_run_) {
      FieldPanel panel = segment_panel();
      std::vector<TestFunction> comps;
      comps.push_back(TestFunction::bump({0.5, 0.0}, 0.75));
      comps.push_back(TestFunction::zero(2));
      panel.fields.insert(panel.fields.begin(), TestField(std::move(comps)));
      DivergencePair pair(segment().charge, *segment().divergence, panel);
      LiftParams p{1.0, 64, 0.1,
                   DecomposeParams{0.05, 20000, FlowConfig(1.0, 2.5e-3, 101), cfg.seed ^ 0xAAull}};
      auto [nu, rep] = decompose_with_divergence(pair, p, panel, cfg.threads);
      lift_run_ = LiftRun{std::move(panel), std::move(nu), std::move(rep)};
    }
    return *lift_run_;
  }

 private:
  std::optional<GeneratedScenario> loop_;
  std::optional<FieldPanel> loop_panel_;
  std::optional<DecomposeParams> loop_params_;
  std::optional<CurveEnsemble> loop_ensemble_;
  std::optional<DecompositionReport> loop_report_;
  std::optional<GeneratedScenario> segment_;
  std::optional<FieldPanel> segment_panel_;
  std::optional<LiftRun> lift_run_;
};

Curve random_lipschitz_curve(std::mt19937_64& eng, int dim, double ell, std::size_t segments,
                             const Box& box) {
  Vec x(dim), d(dim);
  for (int k = 0; k < dim; ++k) {
    x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * (0.25 + 0.5 * uniform01(eng));
    d[k] = standard_normal(eng);
  }
  const double h = ell / static_cast<double>(segments);
  std::vector<double> flat;
  flat.reserve((segments + 1) * dim);
  flat.insert(flat.end(), x.begin(), x.end());
  for (std::size_t s = 0; s < segments; ++s) {
    for (int k = 0; k < dim; ++k) d[k] += 0.35 * standard_normal(eng);
    const double n = norm(d);
    const double speed = 0.6 + 0.4 * uniform01(eng);
    for (int k = 0; k < dim; ++k) {
      d[k] /= n;
      x[k] += h * speed * d[k];
    }
    flat.insert(flat.end(), x.begin(), x.end());
  }
  return Curve(ell, dim, std::move(flat));
}

// 1. Curve divergence identity at m = 4096.
CriterionResult criterion_1(Context& ctx) {
  CriterionResult res{1, "curve divergence identity", false, 0.0, {}};
  std::mt19937_64 eng = make_engine(ctx.cfg.seed, 0xC1ull);
  const FieldPanel& panel = ctx.loop_panel();
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    const Curve gamma = random_lipschitz_curve(eng, 2, 1.0, 4096, panel.domain_box);
    const AtomicCharge charge = curve_to_charge(gamma);
    for (const TestFunction& psi : panel.functions) {
      const double rs = divergence_action(charge, psi);  // -sum <grad psi(mid), delta>
      const double exact = curve_divergence_action(gamma, psi);
      worst = std::max(worst, std::abs(rs - exact));
    }
  }
  res.checks.push_back(
      check_le("max |RS divergence - endpoint difference| over 50 curves x 10 functions", worst,
               ctx.tol(1e-5)));
  return res;
}

// 2. Drift bound and single-atom exactness.
CriterionResult criterion_2(Context& ctx) {
  CriterionResult res{2, "drift bound and exactness", false, 0.0, {}};
  struct Case {
    const char* name;
    GeneratedScenario scenario;
  };
  std::vector<Case> cases;
  cases.push_back({"loop", make_loop(512, 1.0)});
  cases.push_back({"two_loops", make_two_loops(512)});
  cases.push_back({"segment", make_segment(64, {0.0, 0.0}, {1.0, 0.0})});
  cases.push_back({"single_atom", make_single_atom({0.2, -0.3}, {1.0, 2.0})});

  std::mt19937_64 eng = make_engine(ctx.cfg.seed, 0xC2ull);
  for (const Case& c : cases) {
    double worst = 0.0;
    for (double eps : {0.05, 0.3}) {
      const MollifiedCharge mc(c.scenario.charge, eps);
      const Box& box = c.scenario.suggested_box;
      Vec x(2), phi(2);
      for (int i = 0; i < 5000; ++i) {
        for (int k = 0; k < 2; ++k) {
          const double w = box.hi[k] - box.lo[k];
          x[k] = box.lo[k] - 0.5 * w + 2.0 * w * uniform01(eng);
          if (i % 50 == 0) x[k] *= 20.0;  // exercise the far-field shifted path
        }
        mc.drift(x, phi);
        worst = std::max(worst, norm(phi));
      }
    }
    res.checks.push_back(
        check_le(std::string("sup |phi_eps| over 1e4 probes, ") + c.name, worst,
                 1.0 + ctx.tol(1e-12)));
  }
  {
    const MollifiedCharge mc(cases[3].scenario.charge, 0.1);
    const Atom& atom = cases[3].scenario.charge.atoms()[0];
    const double m = norm(atom.w);
    double worst = 0.0;
    Vec x(2), phi(2);
    for (int i = 0; i < 10000; ++i) {
      for (int k = 0; k < 2; ++k) x[k] = -30.0 + 60.0 * uniform01(eng);
      mc.drift(x, phi);
      double err = 0.0;
      for (int k = 0; k < 2; ++k) err += std::abs(phi[k] - atom.w[k] / m);
      worst = std::max(worst, err);
    }
    res.checks.push_back(check_le("single-atom drift deviation from w/|w|", worst, ctx.tol(1e-12)));
  }
  return res;
}

// 3. Mass budget on every decomposition run of the suite.
CriterionResult criterion_3(Context& ctx) {
  CriterionResult res{3, "ensemble mass budget", false, 0.0, {}};
  res.checks.push_back(check_le("loop run |mass - Var/ell| / (Var/ell)",
                                ctx.loop_report().mass_rel_error, ctx.tol(1e-12)));
  {
    // odd curve count exercises the uneven pairwise tree
    const GeneratedScenario single = make_single_atom({0.0, 0.0}, {3.0, 4.0});
    const DecomposeParams p{0.2, 37, FlowConfig(0.5, 0.05, 11), ctx.cfg.seed ^ 0x33ull};
    const CurveEnsemble nu = decompose_div_free(single.charge, p, ctx.cfg.threads);
    const double expected = total_variation(single.charge) / 0.5;
    res.checks.push_back(check_le("single-atom run |mass - Var/ell| / (Var/ell)",
                                  std::abs(ensemble_mass(nu) - expected) / expected,
                                  ctx.tol(1e-12)));
  }
  {
    const GeneratedScenario two = make_two_loops(128);
    const DecomposeParams p{0.1, 101, FlowConfig(1.0, 0.01, 101), ctx.cfg.seed ^ 0x34ull};
    const CurveEnsemble nu = decompose_div_free(two.charge, p, ctx.cfg.threads);
    const double expected = total_variation(two.charge);
    res.checks.push_back(check_le("two-loops run |mass - Var/ell| / (Var/ell)",
                                  std::abs(ensemble_mass(nu) - expected) / expected,
                                  ctx.tol(1e-12)));
  }
  return res;
}

// 4. Theorem A reconstruction on the loop scenario.
CriterionResult criterion_4(Context& ctx) {
  CriterionResult res{4, "flow reconstruction (loop)", false, 0.0, {}};
  const DecompositionReport& rep = ctx.loop_report();
  const double var = rep.var_mu;
  for (std::size_t f = 0; f < rep.reconstruction.size(); ++f) {
    const FieldErrorRow& row = rep.reconstruction[f];
    const double sup = ctx.loop_panel().fields[f].sup_norm();
    const double tol = std::max(ctx.tol(0.02) * var * sup, 4.0 * row.std_error);
    res.checks.push_back(check_le("field " + std::to_string(f) + " |ensemble - smoothed|",
                                  row.err_vs_smoothed, tol));
  }
  return res;
}

// 5. Mollification refinement along eps = 0.4, 0.2, 0.1, 0.05.
CriterionResult criterion_5(Context& ctx) {
  CriterionResult res{5, "eps-refinement of smoothed pairings", false, 0.0, {}};
  const std::vector<double> schedule = {0.4, 0.2, 0.1, 0.05};
  const FieldPanel& panel = ctx.loop_panel();
  const AtomicCharge& mu = ctx.loop().charge;
  double worst_adjacent = 0.0, worst_final = 0.0;
  for (const TestField& phi : panel.fields) {
    const double exact = pair_with_field(mu, phi);
    std::vector<double> gaps;
    for (double eps : schedule)
      gaps.push_back(std::abs(smoothed_action(MollifiedCharge(mu, eps), phi) - exact));
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k)
      worst_adjacent = std::max(worst_adjacent, gaps[k + 1] / gaps[k]);
    worst_final = std::max(worst_final, gaps.back() / gaps.front());
  }
  res.checks.push_back(
      check_lt("max adjacent gap ratio over fields (strict decrease)", worst_adjacent, 1.0));
  res.checks.push_back(check_le("max final/initial gap ratio", worst_final, ctx.tol(0.15)));
  return res;
}

// 6. Liouville invariance and RK4 order.
CriterionResult criterion_6(Context& ctx) {
  CriterionResult res{6, "Liouville invariance and RK4 order", false, 0.0, {}};
  const MollifiedCharge mc(ctx.loop().charge, 0.05);
  const FlowConfig cfg(1.0, 0.004, 3);  // records at t = 0, 0.5, 1
  const auto rows = liouville_discrepancy_batch(mc, ctx.cfg.seed ^ 0x6ull, 100000,
                                                ctx.loop_panel().functions, {0.5, 1.0}, cfg,
                                                ctx.cfg.threads);
  double worst_excess = -1.0;
  for (const auto& row : rows) {
    const double tol = 3.0 * row.std_error + ctx.tol(1e-6);
    worst_excess = std::max(worst_excess, row.discrepancy - tol);
  }
  res.checks.push_back(
      check_le("max discrepancy minus (3 SE + 1e-6) over functions x t in {0.5,1}", worst_excess,
               0.0));

  // injected rotational benchmark: unit circle at unit angular speed
  auto rotation = [](std::span<const double> x, std::span<double> out) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    out[0] = -x[1] / r;
    out[1] = x[0] / r;
  };
  const double t_end = 3.14159265358979323846;
  std::vector<double> errors;
  for (int k = 0; k < 4; ++k) {
    const std::size_t steps = 50u << k;
    const FlowConfig rc(t_end, t_end / static_cast<double>(steps), 2);
    const Vec x0 = {1.0, 0.0};
    const Curve orbit = integrate_field(rotation, x0, rc);
    const auto end = orbit.sample(orbit.segments());
    const double ex = -1.0, ey = 0.0;
    errors.push_back(std::hypot(end[0] - ex, end[1] - ey));
  }
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const double order = std::log2(errors[k] / errors[k + 1]);
    res.checks.push_back(check_in("RK4 observed order, halving pair " + std::to_string(k), order,
                                  3.7, 4.3));
  }
  return res;
}

// 7. Endpoint identities of the loop decomposition.
CriterionResult criterion_7(Context& ctx) {
  CriterionResult res{7, "endpoint identity", false, 0.0, {}};
  const DecompositionReport& rep = ctx.loop_report();
  double worst_start = -1.0, worst_diff = -1.0;
  for (const EndpointErrorRow& row : rep.endpoint) {
    worst_start = std::max(worst_start, row.start_error - 4.0 * row.start_std_error);
    worst_diff = std::max(worst_diff,
                          std::abs(row.start_end_diff) -
                              (3.0 * row.start_end_std_error + ctx.tol(1e-4)));
  }
  res.checks.push_back(
      check_le("max start-point error minus 4 SE over functions", worst_start, 0.0));
  res.checks.push_back(
      check_le("max |start-end| minus (3 SE + 1e-4) over functions", worst_diff, 0.0));
  return res;
}

// 8. Length and variation budget.
CriterionResult criterion_8(Context& ctx) {
  CriterionResult res{8, "length/variation budget", false, 0.0, {}};
  const DecompositionReport& rep = ctx.loop_report();
  res.checks.push_back(check_ge("mean curve length / ell", rep.lengths.mean_over_ell,
                                ctx.tol(0.95)));
  res.checks.push_back(
      check_le("max curve length", rep.lengths.max, rep.ell * (1.0 + ctx.tol(1e-9))));
  res.checks.push_back(check_le("fraction of samples farther than 5 eps from every atom",
                                rep.support_outlier_frac, ctx.tol(0.01)));

  // the canceling back-and-forth curve: t then 2-t on [0, 2]
  const std::size_t m = 256;
  std::vector<double> flat(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    const double t = 2.0 * static_cast<double>(k) / static_cast<double>(m);
    flat[k] = t <= 1.0 ? t : 2.0 - t;
  }
  const Curve back_forth(2.0, 1, std::move(flat));
  Box box1{{-0.5}, {2.5}};
  const FieldPanel panel1 = make_panel(ctx.cfg.seed ^ 0x8ull, 8, 1, box1);
  const VariationBracket bracket = variation_bracket(back_forth, panel1);
  res.checks.push_back(
      check_le("variation lower bound of the canceling curve", bracket.lower, ctx.tol(0.05)));
  res.checks.push_back(
      check_le("|length - 2| of the canceling curve", std::abs(bracket.upper - 2.0),
               ctx.tol(1e-12)));
  return res;
}

// 9. Divergence-freeness of the lift.
CriterionResult criterion_9(Context& ctx) {
  CriterionResult res{9, "lift divergence-freeness", false, 0.0, {}};
  const GeneratedScenario& seg = ctx.segment();
  const DivergencePair pair(seg.charge, *seg.divergence, ctx.segment_panel());
  const LiftParams p{1.0, 64, 0.1,
                     DecomposeParams{0.05, 1, FlowConfig(1.0, 0.01, 2), ctx.cfg.seed}};
  const AtomicCharge lifted = build_lift(pair, p);
  Box box3 = seg.suggested_box;
  box3.lo.push_back(-0.25);
  box3.hi.push_back(1.25);
  const FieldPanel panel3 = make_panel(ctx.cfg.seed ^ 0x9ull, 1, 10, box3);
  const double div_check = verify_lift_divergence(lifted, panel3);
  res.checks.push_back(check_le("normalized lift divergence", div_check,
                                pair.certification() + ctx.tol(1e-3)));
  return res;
}

// 10. Lifted reconstruction of the segment charge, plus the mu = 0 limit.
CriterionResult criterion_10(Context& ctx) {
  CriterionResult res{10, "lifted reconstruction (segment)", false, 0.0, {}};
  const auto& run = ctx.lift_run();
  const FieldErrorRow& aligned = run.report.reconstruction.front();
  res.checks.push_back(check_le("relative error on the aligned field",
                                aligned.err_vs_exact / std::abs(aligned.exact_action),
                                ctx.tol(0.10)));
  const double expected = run.report.var_lift / run.report.ell;
  res.checks.push_back(check_le(
      "|kept + discarded - Var(lift)/ell| / (Var(lift)/ell)",
      std::abs(run.report.kept_weight + run.report.discarded_weight - expected) / expected,
      ctx.tol(1e-12)));

  // mu = 0, sigma = delta_a - delta_b: the decomposition must reconstruct 0
  const AtomicCharge null_mu(2);
  const ScalarAtomicMeasure sigma(2, {{{0.2, 0.0}, 1.0}, {{0.8, 0.0}, -1.0}});
  Box box{{-0.6, -0.8}, {1.6, 0.8}};
  const FieldPanel panel = make_panel(ctx.cfg.seed ^ 0xA0ull, 6, 6, box);
  const DivergencePair pair(null_mu, sigma, panel, 2.0);  // certification waived for the limit case
  const LiftParams p{1.0, 64, 0.1,
                     DecomposeParams{0.05, 4000, FlowConfig(1.0, 5e-3, 51), ctx.cfg.seed ^ 0xA1ull}};
  auto [nu, rep] = decompose_with_divergence(pair, p, panel, ctx.cfg.threads);
  double worst = -1.0;
  for (const FieldErrorRow& row : rep.reconstruction)
    worst = std::max(worst, std::abs(row.ensemble_action) - 3.0 * row.std_error);
  res.checks.push_back(
      check_le("mu=0 limit: max |ensemble action| minus 3 SE over fields", worst, 0.0));
  const double expected0 = rep.var_lift / rep.ell;
  res.checks.push_back(
      check_le("mu=0 limit: mass accounting",
               std::abs(rep.kept_weight + rep.discarded_weight - expected0) / expected0,
               ctx.tol(1e-12)));
  return res;
}

// 11. Vertical-speed diagnostic inside the strip.
CriterionResult criterion_11(Context& ctx) {
  CriterionResult res{11, "vertical-speed diagnostic", false, 0.0, {}};
  const LiftReport& rep = ctx.lift_run().report;
  // The lifted columns point up where sigma < 0 and down where sigma > 0
  // (the lift carries -sigma along the vertical axis), so the flow ascends
  // at sigma-negative sites and descends at sigma-positive sites.
  res.checks.push_back(check_ge("mean vertical speed at ascent sites (sigma < 0)",
                                rep.mean_vertical_speed_ascent, ctx.tol(0.8)));
  res.checks.push_back(check_le("mean vertical speed at descent sites (sigma > 0)",
                                rep.mean_vertical_speed_descent, -ctx.tol(0.8)));
  res.checks.push_back(check_ge("ascent sample count", static_cast<double>(rep.ascent_samples),
                                1.0));
  res.checks.push_back(check_ge("descent sample count", static_cast<double>(rep.descent_samples),
                                1.0));
  return res;
}

double max_numeric_difference(const json& a, const json& b) {
  if (a.is_object() && b.is_object()) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& [key, value] : a.items()) {
      if (key == "timestamp") continue;
      if (!b.contains(key)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, max_numeric_difference(value, b.at(key)));
    }
    return worst;
  }
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      worst = std::max(worst, max_numeric_difference(a[i], b[i]));
    return worst;
  }
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    const double scale = std::max({1.0, std::abs(x), std::abs(y)});
    return std::abs(x - y) / scale;
  }
  return a == b ? 0.0 : std::numeric_limits<double>::infinity();
}

// 12. Determinism across reruns and thread counts.
CriterionResult criterion_12(Context& ctx) {
  CriterionResult res{12, "determinism", false, 0.0, {}};
  const GeneratedScenario loop_small = make_loop(128, 1.0);
  const FieldPanel panel = make_panel(ctx.cfg.seed ^ 0xD0ull, 4, 4, loop_small.suggested_box);
  const DecomposeParams params{0.1, 400, FlowConfig(1.0, 5e-3, 101), ctx.cfg.seed ^ 0xD1ull};

  auto run_decompose = [&](int threads) {
    const CurveEnsemble nu = decompose_div_free(loop_small.charge, params, threads);
    return decomposition_report_json(
        decompose_report(loop_small.charge, nu, params, panel, threads));
  };
  const std::string d1 = run_decompose(1);
  const std::string d1b = run_decompose(1);
  res.checks.push_back(check_le("decompose rerun (threads=1): reports differ",
                                reports_equal_ignoring_timestamp(d1, d1b) ? 0.0 : 1.0, 0.0));
  const std::string d4 = run_decompose(4);
  res.checks.push_back(check_le(
      "decompose threads 1 vs 4: max relative scalar difference",
      max_numeric_difference(json::parse(d1), json::parse(d4)), ctx.tol(1e-12)));

  const GeneratedScenario seg_small = make_segment(32, {0.0, 0.0}, {1.0, 0.0});
  const FieldPanel seg_panel = make_panel(ctx.cfg.seed ^ 0xD2ull, 4, 6, seg_small.suggested_box);
  auto run_lift = [&](int threads) {
    const DivergencePair pair(seg_small.charge, *seg_small.divergence, seg_panel);
    const LiftParams p{1.0, 16, 0.1,
                       DecomposeParams{0.1, 300, FlowConfig(1.0, 5e-3, 51), ctx.cfg.seed ^ 0xD3ull}};
    auto [nu, rep] = decompose_with_divergence(pair, p, seg_panel, threads);
    return lift_report_json(rep);
  };
  const std::string l1 = run_lift(1);
  const std::string l1b = run_lift(1);
  res.checks.push_back(check_le("lift-decompose rerun (threads=1): reports differ",
                                reports_equal_ignoring_timestamp(l1, l1b) ? 0.0 : 1.0, 0.0));
  const std::string l4 = run_lift(4);
  res.checks.push_back(check_le(
      "lift-decompose threads 1 vs 4: max relative scalar difference",
      max_numeric_difference(json::parse(l1), json::parse(l4)), ctx.tol(1e-12)));

  const double c1 = check_div_free(loop_small.charge, panel);
  const double c2 = check_div_free(loop_small.charge, panel);
  res.checks.push_back(check_le("check-div rerun difference", std::abs(c1 - c2), 0.0));

  const auto tmp = std::filesystem::temp_directory_path();
  const auto g1 = tmp / "solenoid_gen_a.json", g2 = tmp / "solenoid_gen_b.json";
  save_charge(make_loop(64, 1.0).charge, g1);
  save_charge(make_loop(64, 1.0).charge, g2);
  res.checks.push_back(check_le("gen rerun: charge files differ",
                                read_text_file(g1) == read_text_file(g2) ? 0.0 : 1.0, 0.0));
  std::filesystem::remove(g1);
  std::filesystem::remove(g2);
  return res;
}

}  // namespace

AcceptanceReport run_acceptance(const VerifyConfig& cfg, std::ostream* progress) {
  Context ctx(cfg);
  AcceptanceReport report;
  report.all_pass = true;

  using Runner = CriterionResult (*)(Context&);
  const std::pair<int, Runner> runners[] = {
      {1, &criterion_1}, {2, &criterion_2},  {3, &criterion_3},  {4, &criterion_4},
      {5, &criterion_5}, {6, &criterion_6},  {7, &criterion_7},  {8, &criterion_8},
      {9, &criterion_9}, {10, &criterion_10}, {11, &criterion_11}, {12, &criterion_12},
  };

  for (const auto& [id, runner] : runners) {
    if (!cfg.only_criteria.empty() &&
        std::find(cfg.only_criteria.begin(), cfg.only_criteria.end(), id) ==
            cfg.only_criteria.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res = runner(ctx);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.pass = !res.checks.empty();
    for (const CheckRow& row : res.checks) res.pass = res.pass && row.pass;
    report.all_pass = report.all_pass && res.pass;
    if (progress) {
      (*progress) << (res.pass ? "[PASS]" : "[FAIL]") << " criterion " << res.id << ": "
                  << res.name << " (" << res.seconds << " s)\n";
      if (!res.pass) {
        for (const CheckRow& row : res.checks)
          if (!row.pass)
            (*progress) << "       failed: " << row.what << "  measured=" << row.measured
                        << "  tolerance=" << row.tolerance << "\n";
      }
      progress->flush();
    }
    report.criteria.push_back(std::move(res));
  }
  return report;
}

std::string acceptance_report_json(const AcceptanceReport& report) {
  json j;
  j["command"] = "verify";
  {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    j["timestamp"] = buf;
  }
  j["all_pass"] = report.all_pass;
  json arr = json::array();
  for (const CriterionResult& c : report.criteria) {
    json checks = json::array();
    for (const CheckRow& row : c.checks)
      checks.push_back({{"what", row.what},
                        {"measured", row.measured},
                        {"tolerance", row.tolerance},
                        {"pass", row.pass}});
    arr.push_back({{"id", c.id},
                   {"name", c.name},
                   {"pass", c.pass},
                   {"seconds", c.seconds},
                   {"checks", std::move(checks)}});
  }
  j["criteria"] = std::move(arr);
  return j.dump(2);
}

int run_verify(const VerifyConfig& cfg, std::ostream& out) {
  const AcceptanceReport report = run_acceptance(cfg, &out);
  if (!cfg.report_path.empty()) write_text_file(acceptance_report_json(report), cfg.report_path);
  out << (report.all_pass ? "all criteria passed" : "some criteria FAILED") << "\n";
  return report.all_pass ? 0 : 1;
}

}  // namespace solenoid
