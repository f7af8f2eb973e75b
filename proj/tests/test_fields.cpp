#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "solenoid/fields.hpp"
#include "solenoid/rng.hpp"

using namespace solenoid;

namespace {
const Box kBox{{-1.5, -1.5}, {1.5, 1.5}};
}

TEST_CASE("bump evaluation") {
  const TestFunction psi = TestFunction::bump({0.2, -0.4}, 0.5);
  CHECK(psi.value(Vec{0.2, -0.4}) == 1.0);  // peak normalization
  // tail decay beyond ten radii
  CHECK(std::abs(psi.value(Vec{0.2 + 5.1, -0.4})) <= 1e-20);
  CHECK(norm(psi.gradient(Vec{0.2 + 5.0, -0.4})) <= 1e-18);
  // gradient vanishes at the center of a radially symmetric bump
  CHECK(psi.gradient(Vec{0.2, -0.4}) == Vec{0.0, 0.0});
}

TEST_CASE("value matches an independent closed-form recomputation") {
  const TestFunction psi(2, {0.3, -0.1}, 0.7, {0.4, -0.9, 0.35, 0.2, -0.6});
  std::mt19937_64 eng = make_engine(11);
  // recover Z once from a reference point, then check the closed form elsewhere
  const Vec ref = {0.5, 0.2};
  auto raw = [&](const Vec& x) {
    const long double u0 = (x[0] - 0.3L) / 0.7L, u1 = (x[1] + 0.1L) / 0.7L;
    const long double p = 0.4L - 0.9L * u0 + 0.35L * u1 + 0.2L * u0 * u0 - 0.6L * u1 * u1;
    return static_cast<double>(p * std::exp(-0.5L * (u0 * u0 + u1 * u1)));
  };
  const double scale = psi.value(ref) / raw(ref);
  for (int i = 0; i < 200; ++i) {
    Vec x = {4.0 * uniform01(eng) - 2.0, 4.0 * uniform01(eng) - 2.0};
    CHECK(psi.value(x) == doctest::Approx(raw(x) * scale).epsilon(1e-13));
  }
}

TEST_CASE("analytic gradient agrees with central finite differences") {
  const FieldPanel panel = make_panel(21, 3, 6, kBox);
  std::mt19937_64 eng = make_engine(12);
  const double h = 1e-5;
  for (const TestFunction& psi : panel.functions) {
    for (int i = 0; i < 100; ++i) {
      Vec x = {3.0 * uniform01(eng) - 1.5, 3.0 * uniform01(eng) - 1.5};
      const Vec g = psi.gradient(x);
      for (int k = 0; k < 2; ++k) {
        Vec xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const double fd = (psi.value(xp) - psi.value(xm)) / (2.0 * h);
        CHECK(std::abs(g[k] - fd) <= 1e-8);
      }
    }
  }
}

TEST_CASE("panel generation is deterministic and well-formed") {
  const FieldPanel a = make_panel(77, 4, 5, kBox);
  const FieldPanel b = make_panel(77, 4, 5, kBox);
  REQUIRE(a.fields.size() == 4);
  REQUIRE(a.functions.size() == 5);
  std::mt19937_64 eng = make_engine(13);
  for (int i = 0; i < 300; ++i) {
    Vec x = {4.0 * uniform01(eng) - 2.0, 4.0 * uniform01(eng) - 2.0};
    for (std::size_t f = 0; f < a.fields.size(); ++f) {
      const Vec va = a.fields[f].value(x);
      const Vec vb = b.fields[f].value(x);
      CHECK(va == vb);  // bit-identical regeneration
    }
    for (std::size_t f = 0; f < a.functions.size(); ++f)
      CHECK(a.functions[f].value(x) == b.functions[f].value(x));
  }
}

TEST_CASE("panel fields are admissible: |phi| <= 1 on dense probes") {
  const FieldPanel panel = make_panel(31, 6, 1, kBox);
  std::mt19937_64 eng = make_engine(14);
  for (const TestField& phi : panel.fields) {
    double sup = 0.0;
    for (int i = 0; i < 1000; ++i) {
      Vec x = {6.0 * uniform01(eng) - 3.0, 6.0 * uniform01(eng) - 3.0};
      sup = std::max(sup, norm(phi.value(x)));
    }
    CHECK(sup <= 1.0);
    CHECK(phi.sup_norm() <= 1.0);
  }
}

TEST_CASE("panel functions stay within [-1, 1] and decay past ten radii") {
  const FieldPanel panel = make_panel(32, 1, 8, kBox);
  std::mt19937_64 eng = make_engine(15);
  for (const TestFunction& psi : panel.functions) {
    for (int i = 0; i < 500; ++i) {
      Vec x = {8.0 * uniform01(eng) - 4.0, 8.0 * uniform01(eng) - 4.0};
      CHECK(std::abs(psi.value(x)) <= 1.0);
    }
    Vec far = psi.center();
    far[0] += 10.0 * psi.radius();
    CHECK(std::abs(psi.value(far)) <= 1e-18);
  }
}

TEST_CASE("zero function and zero field") {
  const TestFunction zf = TestFunction::zero(3);
  CHECK(zf.is_zero());
  CHECK(zf.value(Vec{1.0, 2.0, 3.0}) == 0.0);
  CHECK(zf.gradient(Vec{1.0, 2.0, 3.0}) == Vec{0.0, 0.0, 0.0});
  const TestField zfield(std::vector<TestFunction>{TestFunction::zero(2), TestFunction::zero(2)});
  CHECK(zfield.sup_norm() == 0.0);
}

TEST_CASE("invalid construction") {
  CHECK_THROWS_AS(TestFunction(2, {0.0, 0.0}, -1.0, {1.0, 0.0, 0.0, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TestFunction(2, {0.0}, 1.0, {1.0, 0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction(2, {0.0, 0.0}, 1.0, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_panel(1, 0, 3, kBox), std::invalid_argument);
  Box bad{{0.0, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(make_panel(1, 1, 1, bad), std::invalid_argument);
  // mixed-dimension components
  CHECK_THROWS_AS(TestField(std::vector<TestFunction>{TestFunction::zero(2)}),
                  std::invalid_argument);
}

TEST_CASE("field-level normalization only rescales when needed") {
  // one bump component: already admissible, left untouched
  std::vector<TestFunction> comps;
  comps.push_back(TestFunction::bump({0.0, 0.0}, 1.0));
  comps.push_back(TestFunction::zero(2));
  const TestField single(std::move(comps));
  CHECK(single.scale() == 1.0);
  CHECK(single.value(Vec{0.0, 0.0})[0] == 1.0);

  // two full bumps at the same spot: vector norm sqrt(2) > 1, rescaled
  std::vector<TestFunction> comps2;
  comps2.push_back(TestFunction::bump({0.0, 0.0}, 1.0));
  comps2.push_back(TestFunction::bump({0.0, 0.0}, 1.0));
  const TestField both(std::move(comps2));
  CHECK(both.scale() < 1.0);
  CHECK(norm(both.value(Vec{0.0, 0.0})) <= 1.0);
  CHECK(both.sup_norm() <= 1.0);
}
