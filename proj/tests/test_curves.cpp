#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "solenoid/charge.hpp"
#include "solenoid/curves.hpp"
#include "solenoid/flow.hpp"
#include "solenoid/rng.hpp"

using namespace solenoid;

namespace {

constexpr double kPi = 3.14159265358979323846;

TestField bump_field(Vec center, double radius, int component) {
  const int d = static_cast<int>(center.size());
  std::vector<TestFunction> comps;
  for (int k = 0; k < d; ++k) {
    if (k == component)
      comps.push_back(TestFunction::bump(center, radius));
    else
      comps.push_back(TestFunction::zero(d));
  }
  return TestField(std::move(comps));
}

Curve circle_curve(std::size_t m, double radius = 1.0) {
  std::vector<double> flat;
  const double ell = 2.0 * kPi * radius;
  for (std::size_t k = 0; k <= m; ++k) {
    const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m);
    flat.push_back(radius * std::cos(th));
    flat.push_back(radius * std::sin(th));
  }
  flat[flat.size() - 2] = flat[0];  // close the polygon bit-exactly
  flat[flat.size() - 1] = flat[1];
  return Curve(ell, 2, std::move(flat));
}

Curve segment_curve(std::size_t m) {
  std::vector<double> flat;
  for (std::size_t k = 0; k <= m; ++k) {
    flat.push_back(static_cast<double>(k) / static_cast<double>(m));
    flat.push_back(0.0);
  }
  return Curve(1.0, 2, std::move(flat));
}

Curve random_curve(std::mt19937_64& eng, std::size_t m, double ell = 1.0) {
  Vec x = {uniform01(eng) - 0.5, uniform01(eng) - 0.5};
  Vec d = {standard_normal(eng), standard_normal(eng)};
  std::vector<double> flat(x.begin(), x.end());
  const double h = ell / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    d[0] += 0.4 * standard_normal(eng);
    d[1] += 0.4 * standard_normal(eng);
    const double n = std::hypot(d[0], d[1]);
    const double speed = 0.5 + 0.5 * uniform01(eng);
    for (int j = 0; j < 2; ++j) {
      d[j] /= n;
      x[j] += h * speed * d[j];
    }
    flat.insert(flat.end(), x.begin(), x.end());
  }
  return Curve(ell, 2, std::move(flat));
}

}  // namespace

TEST_CASE("curve invariants") {
  CHECK_THROWS_AS(Curve(1.0, 2, {0.0, 0.0}), std::invalid_argument);          // single sample
  CHECK_THROWS_AS(Curve(1.0, 2, {0.0, 0.0, 0.9, 0.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Curve(-1.0, 1, {0.0, 0.5}), std::invalid_argument);
  const Curve ok(1.0, 2, {0.0, 0.0, 0.5, 0.0, 0.5, 0.4});
  CHECK(ok.segments() == 2);
  CHECK(ok.dt() == 0.5);
}

TEST_CASE("curve action") {
  SUBCASE("near-constant field along a straight segment") {
    const Curve seg = segment_curve(1024);
    const TestField phi = bump_field({0.5, 0.0}, 500.0, 0);
    CHECK(std::abs(curve_action(seg, phi) - 1.0) <= 1e-6);
  }
  SUBCASE("constant curve gives exactly zero") {
    const Curve still(1.0, 2, {0.3, 0.4, 0.3, 0.4, 0.3, 0.4});
    const TestField phi = bump_field({0.3, 0.4}, 1.0, 0);
    CHECK(curve_action(still, phi) == 0.0);
  }
  SUBCASE("closed circle against a gradient field (fundamental-theorem oracle)") {
    const TestFunction psi(2, {0.2, -0.3}, 0.9, {0.4, 0.7, -0.5, 0.3, 0.2});
    const Curve circle = circle_curve(4096);
    // RS sum of <grad psi(mid), delta>: exact limit is psi(end) - psi(start) = 0
    double sum = 0.0;
    for (std::size_t k = 0; k < circle.segments(); ++k) {
      const auto p = circle.sample(k);
      const auto q = circle.sample(k + 1);
      const Vec mid = {0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
      const Vec g = psi.gradient(mid);
      sum += g[0] * (q[0] - p[0]) + g[1] * (q[1] - p[1]);
    }
    CHECK(std::abs(sum) <= 1e-4);
  }
  SUBCASE("bounded by length times sup") {
    std::mt19937_64 eng = make_engine(51);
    const TestField phi = bump_field({0.0, 0.0}, 1.0, 1);
    for (int i = 0; i < 10; ++i) {
      const Curve gamma = random_curve(eng, 200);
      CHECK(std::abs(curve_action(gamma, phi)) <= length(gamma) + 1e-12);
      CHECK(std::abs(curve_action(gamma, phi)) <= gamma.ell() + 1e-12);
    }
  }
  SUBCASE("reversal negates the action exactly") {
    std::mt19937_64 eng = make_engine(52);
    const TestField phi = bump_field({0.1, 0.2}, 0.8, 0);
    for (int i = 0; i < 10; ++i) {
      const Curve gamma = random_curve(eng, 157);  // odd segment count too
      CHECK(curve_action(gamma.reversed(), phi) == -curve_action(gamma, phi));
    }
  }
  SUBCASE("refinement: doubling the sample count converges at ratio >= 1.8") {
    const TestField phi = bump_field({0.7, 0.2}, 0.8, 0);
    auto circle_action = [&](std::size_t m) { return curve_action(circle_curve(m), phi); };
    const double limit = circle_action(8192);
    const double err_m = std::abs(circle_action(512) - limit);
    const double err_2m = std::abs(circle_action(1024) - limit);
    CHECK(err_m / err_2m >= 1.8);
  }
}

TEST_CASE("length") {
  CHECK(length(segment_curve(64)) == doctest::Approx(1.0).epsilon(1e-12));
  const Curve still(1.0, 2, {0.1, 0.1, 0.1, 0.1});
  CHECK(length(still) == 0.0);
  // unit-speed circle parametrized over ell = 2 pi, m = 4096
  CHECK(std::abs(length(circle_curve(4096)) - 2.0 * kPi) <= 1e-3);
}

TEST_CASE("length of an integrated unit-speed orbit (analytic arc length)") {
  auto rotation = [](std::span<const double> x, std::span<double> out) {
    const double r = std::hypot(x[0], x[1]);
    out[0] = -x[1] / r;
    out[1] = x[0] / r;
  };
  const double ell = 2.0 * kPi;
  const Curve orbit = integrate_field(rotation, Vec{1.0, 0.0}, FlowConfig(ell, ell / 4096.0, 4097));
  CHECK(std::abs(length(orbit) - 2.0 * kPi) <= 1e-3);
}

TEST_CASE("curve divergence action is the endpoint difference") {
  const TestFunction psi(2, {0.4, 0.0}, 0.8, {0.6, 0.3, -0.2, 0.1, 0.05});
  SUBCASE("closed curve gives exactly zero") {
    const Curve circle = circle_curve(128);
    CHECK(curve_divergence_action(circle, psi) == 0.0);
  }
  SUBCASE("segment with explicit endpoint values") {
    const Curve seg = segment_curve(64);
    CHECK(curve_divergence_action(seg, psi) ==
          psi.value(Vec{0.0, 0.0}) - psi.value(Vec{1.0, 0.0}));
  }
  SUBCASE("chain-rule quadrature oracle at m = 4096") {
    std::mt19937_64 eng = make_engine(53);
    const Curve gamma = random_curve(eng, 4096);
    double rs = 0.0;
    for (std::size_t k = 0; k < gamma.segments(); ++k) {
      const auto p = gamma.sample(k);
      const auto q = gamma.sample(k + 1);
      const Vec mid = {0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
      const Vec g = psi.gradient(mid);
      rs += g[0] * (q[0] - p[0]) + g[1] * (q[1] - p[1]);
    }
    CHECK(curve_divergence_action(gamma, psi) == doctest::Approx(-rs).epsilon(1e-6));
  }
}

TEST_CASE("ensembles") {
  const TestField phi = bump_field({0.5, 0.0}, 1.0, 0);
  SUBCASE("empty ensemble") {
    const CurveEnsemble nu(1.0, 2);
    CHECK(ensemble_action(nu, phi) == 0.0);
    CHECK(ensemble_mass(nu) == 0.0);
  }
  SUBCASE("single curve with weight two") {
    CurveEnsemble nu(1.0, 2);
    const Curve seg = segment_curve(32);
    nu.add(seg, 2.0);
    CHECK(ensemble_action(nu, phi) == 2.0 * curve_action(seg, phi));
  }
  SUBCASE("weights {1,2,3} give mass 6") {
    CurveEnsemble nu(1.0, 2);
    nu.add(segment_curve(8), 1.0);
    nu.add(segment_curve(8), 2.0);
    nu.add(segment_curve(8), 3.0);
    CHECK(ensemble_mass(nu) == 6.0);
  }
  SUBCASE("partition into halves is additive to 1e-12 (oracle)") {
    std::mt19937_64 eng = make_engine(54);
    CurveEnsemble whole(1.0, 2), first(1.0, 2), second(1.0, 2);
    for (int i = 0; i < 17; ++i) {
      const Curve c = random_curve(eng, 60);
      const double w = 0.1 + uniform01(eng);
      whole.add(c, w);
      (i < 8 ? first : second).add(c, w);
    }
    const double sum = ensemble_action(first, phi) + ensemble_action(second, phi);
    CHECK(ensemble_action(whole, phi) == doctest::Approx(sum).epsilon(1e-12));
    CHECK(ensemble_mass(whole) ==
          doctest::Approx(ensemble_mass(first) + ensemble_mass(second)).epsilon(1e-13));
  }
  SUBCASE("mismatched curves are rejected") {
    CurveEnsemble nu(1.0, 2);
    CHECK_THROWS_AS(nu.add(Curve(2.0, 2, {0.0, 0.0, 1.0, 0.0}), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(nu.add(segment_curve(4), 0.0), std::invalid_argument);
  }
}

TEST_CASE("occupation time") {
  SUBCASE("unit-speed segment against a half-line") {
    // region x >= 0.5 in R^1
    std::vector<double> flat;
    for (std::size_t k = 0; k <= 64; ++k) flat.push_back(static_cast<double>(k) / 64.0);
    const Curve seg(1.0, 1, std::move(flat));
    const Region half{HalfSpace{{1.0}, 0.5}, false};
    CHECK(occupation_time(seg, half) == doctest::Approx(0.5).epsilon(1e-12));
    // complement accounting is exact
    CHECK(occupation_time(seg, half) + occupation_time(seg, complement(half)) == seg.ell());
  }
  SUBCASE("region disjoint from the curve") {
    const Curve seg = segment_curve(16);
    const Region ball{Ball{{5.0, 5.0}, 0.5}, false};
    CHECK(occupation_time(seg, ball) == 0.0);
  }
  SUBCASE("circle orbit spends half its time in a half-plane through the center") {
    const Curve circle = circle_curve(4096);
    const Region upper{HalfSpace{{0.0, 1.0}, 0.0}, false};
    CHECK(std::abs(occupation_time(circle, upper) - circle.ell() / 2.0) <= 1e-6);
  }
  SUBCASE("ball region via exact quadratic clipping") {
    const Curve seg = segment_curve(512);
    const Region ball{Ball{{0.5, 0.0}, 0.25}, false};
    CHECK(occupation_time(seg, ball) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(occupation_time(seg, ball) + occupation_time(seg, complement(ball)) == seg.ell());
  }
  SUBCASE("action bounded by occupation of the support ball") {
    std::mt19937_64 eng = make_engine(55);
    const Vec c = {0.2, 0.1};
    const double r = 0.5;
    const TestField phi = bump_field(c, r, 0);
    for (int i = 0; i < 10; ++i) {
      const Curve gamma = random_curve(eng, 400);
      const Region support{Ball{c, 6.0 * r}, false};
      const double tail_slack = 2e-8 * length(gamma);  // |phi| beyond 6r
      CHECK(std::abs(curve_action(gamma, phi)) <=
            occupation_time(gamma, support) * 1.0 + tail_slack + 1e-4);
    }
  }
}

TEST_CASE("variation bracket") {
  SUBCASE("straight segment with a near-tangent field") {
    const Curve seg = segment_curve(256);
    std::vector<TestField> fields;
    fields.push_back(bump_field({0.5, 0.0}, 50.0, 0));  // nearly e1 along the segment
    FieldPanel panel{0, Box{{-1.0, -1.0}, {2.0, 1.0}}, std::move(fields), {}};
    const VariationBracket b = variation_bracket(seg, panel);
    CHECK(b.lower >= 0.9);
    CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.lower <= b.upper + 1e-9);
  }
  SUBCASE("the canceling back-and-forth curve has a near-zero lower bound") {
    // gamma(t) = t then 2 - t: the associated charge vanishes
    const std::size_t m = 128;
    std::vector<double> flat(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      const double t = 2.0 * static_cast<double>(k) / static_cast<double>(m);
      flat[k] = t <= 1.0 ? t : 2.0 - t;
    }
    const Curve gamma(2.0, 1, std::move(flat));
    const FieldPanel panel = make_panel(61, 8, 1, Box{{-0.5}, {2.5}});
    const VariationBracket b = variation_bracket(gamma, panel);
    CHECK(b.lower <= 0.05);
    CHECK(b.upper == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("constant curve brackets to (0, 0)") {
    const Curve still(1.0, 2, {0.1, 0.1, 0.1, 0.1});
    const FieldPanel panel = make_panel(62, 3, 1, Box{{-1.0, -1.0}, {1.0, 1.0}});
    const VariationBracket b = variation_bracket(still, panel);
    CHECK(b.lower == 0.0);
    CHECK(b.upper == 0.0);
  }
  SUBCASE("empty panel is rejected") {
    FieldPanel empty{0, Box{{-1.0, -1.0}, {1.0, 1.0}}, {}, {}};
    CHECK_THROWS_AS(variation_bracket(segment_curve(4), empty), std::invalid_argument);
  }
}
