#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "solenoid/flow.hpp"
#include "solenoid/rng.hpp"
#include "solenoid/scenarios.hpp"

using namespace solenoid;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("flow config validation") {
  CHECK_THROWS_AS(FlowConfig(1.0, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(FlowConfig(1.0, 2.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(FlowConfig(1.0, 0.3, 2), std::invalid_argument);   // 1/0.3 not integral
  CHECK_THROWS_AS(FlowConfig(1.0, 0.01, 34), std::invalid_argument);  // 33 does not divide 100
  const FlowConfig cfg(1.0, 1e-3, 251);
  CHECK(cfg.steps() == 1000);
  CHECK(cfg.stride() == 4);
  const FlowConfig a = FlowConfig::auto_records(1.0, 1e-3);
  CHECK(a.record_count() == 1001);  // 1000 steps fit under the default cap
  const FlowConfig b = FlowConfig::auto_records(1.0, 1e-4);
  CHECK((b.record_count() - 1) * b.stride() == b.steps());
  CHECK(b.record_count() <= 1024);
}

TEST_CASE("single-atom drift integrates to a straight unit-speed ray") {
  const MollifiedCharge mc(AtomicCharge(2, {{{5.0, 5.0}, {3.0, -4.0}}}), 0.1);
  const FlowConfig cfg(2.0, 1e-3, 201);
  const Vec x0 = {0.25, -0.5};
  const Curve gamma = integrate(mc, x0, cfg);
  CHECK(gamma.sample(0)[0] == x0[0]);  // start is exact
  CHECK(gamma.sample(0)[1] == x0[1]);
  for (std::size_t k = 0; k <= gamma.segments(); k += 20) {
    const double t = gamma.dt() * static_cast<double>(k);
    CHECK(std::abs(gamma.sample(k)[0] - (x0[0] + t * 0.6)) <= 1e-12);
    CHECK(std::abs(gamma.sample(k)[1] - (x0[1] - t * 0.8)) <= 1e-12);
  }
  CHECK(length(gamma) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("symmetric cancellation point is a fixed point") {
  const MollifiedCharge mc(
      AtomicCharge(2, {{{1.0, 0.0}, {0.0, 2.0}}, {{-1.0, 0.0}, {0.0, -2.0}}}), 0.3);
  const FlowConfig cfg(1.0, 1e-2, 101);
  const Curve gamma = integrate(mc, Vec{0.0, 0.0}, cfg);
  const auto end = gamma.sample(gamma.segments());
  CHECK(std::abs(end[0]) <= 1e-9);
  CHECK(std::abs(end[1]) <= 1e-9);
}

TEST_CASE("RK4 order on the rotational benchmark") {
  auto rotation = [](std::span<const double> x, std::span<double> out) {
    const double r = std::hypot(x[0], x[1]);
    out[0] = -x[1] / r;
    out[1] = x[0] / r;
  };
  std::vector<double> errors;
  for (int k = 0; k < 4; ++k) {
    const std::size_t steps = 40u << k;
    const FlowConfig cfg(kPi, kPi / static_cast<double>(steps), 2);
    const Curve orbit = integrate_field(rotation, Vec{1.0, 0.0}, cfg);
    const auto end = orbit.sample(orbit.segments());
    errors.push_back(std::hypot(end[0] + 1.0, end[1]));
  }
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const double order = std::log2(errors[k] / errors[k + 1]);
    CHECK(order >= 3.7);
    CHECK(order <= 4.3);
  }
  // radial error bounded by C h^4 with the constant from the coarsest run
  const double c = errors[0] / std::pow(kPi / 40.0, 4.0);
  for (int k = 1; k < 4; ++k)
    CHECK(errors[k] <= 1.5 * c * std::pow(kPi / (40.0 * (1 << k)), 4.0));
}

TEST_CASE("flow property: restart at the midpoint matches the single shot") {
  const GeneratedScenario loop = make_loop(96, 1.0);
  const MollifiedCharge mc(loop.charge, 0.15);
  const FlowConfig full(1.0, 2e-3, 251);
  const FlowConfig half(0.5, 2e-3, 126);
  const Vec x0 = {1.05, 0.1};
  const Curve whole = integrate(mc, x0, full);
  const Curve first = integrate(mc, x0, half);
  Vec midpoint(first.sample(first.segments()).begin(), first.sample(first.segments()).end());
  const Curve second = integrate(mc, midpoint, half);
  const auto end_whole = whole.sample(whole.segments());
  const auto end_two = second.sample(second.segments());
  CHECK(std::abs(end_whole[0] - end_two[0]) <= 1e-10);
  CHECK(std::abs(end_whole[1] - end_two[1]) <= 1e-10);
}

TEST_CASE("integrated curves satisfy the Lipschitz transfer") {
  const GeneratedScenario loop = make_loop(128, 1.0);
  const MollifiedCharge mc(loop.charge, 0.1);
  const FlowConfig cfg(1.0, 5e-3, 41);  // coarse records: increments span several steps
  std::mt19937_64 eng = make_engine(31);
  for (int i = 0; i < 10; ++i) {
    Vec x0(2);
    mc.sample_point(eng, x0);
    const Curve gamma = integrate(mc, x0, cfg);  // constructor re-checks the bound
    const double bound = gamma.dt() * (1.0 + 1e-9);
    for (std::size_t k = 0; k < gamma.segments(); ++k)
      CHECK(std::sqrt(dist2(gamma.sample(k + 1), gamma.sample(k))) <= bound);
  }
}

TEST_CASE("liouville discrepancy") {
  const GeneratedScenario loop = make_loop(256, 1.0);
  const MollifiedCharge mc(loop.charge, 0.1);
  const TestFunction psi = TestFunction::bump({0.0, 1.0}, 0.8);
  SUBCASE("t = 0 gives exactly zero") {
    const FlowConfig cfg(1.0, 5e-3, 2);
    const LiouvilleResult r = liouville_discrepancy(mc, 9, 500, psi, 0.0, cfg);
    CHECK(r.discrepancy == 0.0);
  }
  SUBCASE("divergence-free loop stays invariant (Monte Carlo oracle)") {
    const FlowConfig cfg(1.0, 5e-3, 2);
    const LiouvilleResult r = liouville_discrepancy(mc, 10, 10000, psi, 0.5, cfg);
    CHECK(r.discrepancy <= 3.0 * r.std_error + 1e-4);
  }
  SUBCASE("segment drift visibly violates invariance at the sink") {
    const GeneratedScenario seg = make_segment(64, {0.0, 0.0}, {1.0, 0.0});
    const MollifiedCharge seg_mc(seg.charge, 0.05);
    const TestFunction sink = TestFunction::bump({1.0, 0.0}, 0.3);
    const FlowConfig cfg(0.5, 5e-3, 2);
    const LiouvilleResult r = liouville_discrepancy(seg_mc, 11, 20000, sink, 0.5, cfg);
    CHECK(r.discrepancy > 10.0 * r.std_error);
  }
  SUBCASE("batch variant agrees with the single-probe op") {
    const FlowConfig cfg(1.0, 5e-3, 5);  // records at 0, 0.25, 0.5, 0.75, 1
    const auto rows = liouville_discrepancy_batch(mc, 12, 400, {psi}, {1.0}, cfg);
    REQUIRE(rows.size() == 1);
    const LiouvilleResult single = liouville_discrepancy(mc, 12, 400, psi, 1.0, cfg);
    CHECK(rows[0].discrepancy == doctest::Approx(single.discrepancy).epsilon(1e-12));
    CHECK_THROWS_AS(liouville_discrepancy_batch(mc, 12, 10, {psi}, {0.21}, cfg),
                    std::invalid_argument);
  }
  SUBCASE("t beyond the budget or off the grid is rejected") {
    const FlowConfig cfg(1.0, 5e-3, 2);
    CHECK_THROWS_AS(liouville_discrepancy(mc, 9, 10, psi, 2.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(liouville_discrepancy(mc, 9, 10, psi, 0.0033, cfg), std::invalid_argument);
  }
}

TEST_CASE("non-finite drift is reported") {
  struct Bad {
    void operator()(std::span<const double>, std::span<double> out) const {
      out[0] = std::numeric_limits<double>::infinity();
      out[1] = 0.0;
    }
  };
  CHECK_THROWS_AS(integrate_field(Bad{}, Vec{0.0, 0.0}, FlowConfig(1.0, 0.1, 11)),
                  std::runtime_error);
}
