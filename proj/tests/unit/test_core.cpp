#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "spectherm/cell.hpp"
#include "spectherm/heat_profile.hpp"
#include "spectherm/scenario.hpp"

using namespace spectherm;

TEST_CASE("bernardi_q examples") {
  CHECK(bernardi_q(0.0, 3.3, 3.3, 6.27e-4) == 0.0);
  CHECK(bernardi_q(-90.0, 3.1, 3.3, 6.27e-4) == doctest::Approx(2.8708e4).epsilon(1e-4));
  CHECK_THROWS_AS(bernardi_q(1.0, 3.3, 3.2, 0.0), std::invalid_argument);
}

TEST_CASE("bernardi_q is linear in current and antisymmetric") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-100.0, 100.0), eta(-0.3, 0.3);
  for (int i = 0; i < 200; ++i) {
    const double I = u(rng), e = eta(rng), vol = 6.27e-4;
    CHECK(bernardi_q(2.0 * I, 3.3 + e, 3.3, vol) ==
          doctest::Approx(2.0 * bernardi_q(I, 3.3 + e, 3.3, vol)).epsilon(1e-12));
    CHECK(bernardi_q(-I, 3.3 - e, 3.3, vol) ==
          doctest::Approx(bernardi_q(I, 3.3 + e, 3.3, vol)).epsilon(1e-9));
  }
}

TEST_CASE("cell volume") {
  CHECK(cell_volume(lfp_cylinder()) ==
        doctest::Approx(std::numbers::pi * (0.032 * 0.032 - 0.004 * 0.004) * 0.198));
  CHECK(cell_volume(lfp_cylinder()) == doctest::Approx(6.27e-4).epsilon(2e-3));
  auto degenerate = lfp_cylinder();
  degenerate.R_in = degenerate.R_out;
  CHECK_THROWS_AS(cell_volume(degenerate), std::invalid_argument);
  CellSpec pouch = testutil::pouch_cell();
  pouch.D = 0.1;
  pouch.L = 0.2;
  CHECK(cell_volume(pouch) == doctest::Approx(0.02));
}

TEST_CASE("cell validation") {
  auto s = lfp_cylinder();
  CHECK_NOTHROW(s.validate());
  s.k_r = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  auto p = testutil::pouch_cell();
  p.D = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("resample_profile hold semantics") {
  SUBCASE("constant") {
    const auto q = resample_profile(HeatProfile::constant(42.0), 0.5, 3.0);
    REQUIRE(q.size() == 7);
    for (double v : q) CHECK(v == 42.0);
  }
  SUBCASE("single sample holds") {
    const auto q = resample_profile(HeatProfile::volumetric({0.0}, {5.0}), 1.0, 10.0);
    REQUIRE(q.size() == 11);
    for (double v : q) CHECK(v == 5.0);
  }
  SUBCASE("two samples") {
    const auto q = resample_profile(HeatProfile::volumetric({0.0, 1.0}, {0.0, 10.0}), 0.5, 2.0);
    REQUIRE(q.size() == 5);
    CHECK(q[0] == 0.0);
    CHECK(q[1] == 0.0);
    CHECK(q[2] == 10.0);
    CHECK(q[3] == 10.0);
    CHECK(q[4] == 10.0);
  }
  SUBCASE("empty and non-monotone profiles are rejected") {
    CHECK_THROWS_AS(HeatProfile::volumetric({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(HeatProfile::volumetric({0.0, 2.0, 1.0}, {1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(HeatProfile::volumetric({1.0}, {1.0}), std::invalid_argument);
  }
}

TEST_CASE("resample_profile is idempotent on uniform profiles") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e5, 1e5);
  std::vector<double> t, q;
  for (int k = 0; k <= 50; ++k) {
    t.push_back(0.25 * k);
    q.push_back(u(rng));
  }
  const auto once = resample_profile(HeatProfile::volumetric(t, q), 0.25, 12.5);
  CHECK(once == q);
  const auto twice = resample_profile(HeatProfile::volumetric(t, once), 0.25, 12.5);
  CHECK(twice == once);
}

TEST_CASE("electrical profiles convert through bernardi_q") {
  const auto p = HeatProfile::electrical({0.0, 1.0}, {{0.0, 3.3, 3.3}, {-90.0, 3.1, 3.3}});
  const auto v = p.to_volumetric(6.27e-4);
  CHECK(v.q()[0] == 0.0);
  CHECK(v.q()[1] == doctest::Approx(2.8708e4).epsilon(1e-4));
  CHECK_THROWS_AS(resample_profile(p, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("scenario presets") {
  for (Scenario s : kAllScenarios) {
    CHECK(parse_scenario(scenario_name(s)) == s);
    const auto c = make_cooling(s, Shape::Cylindrical);
    CHECK(c[Side::Core].h == 0.0);
    CHECK_NOTHROW(c.validate(Shape::Cylindrical));
    for (Side side : {Side::Surface, Side::Top, Side::Bottom}) {
      CHECK((c[side].h == kActiveH || c[side].h == kPassiveH));
    }
  }
  const auto a = make_cooling(Scenario::aTSC, Shape::Cylindrical);
  CHECK(a[Side::Surface].h == kActiveH);
  CHECK(a[Side::Top].h == kActiveH);
  CHECK(a[Side::Bottom].h == kActiveH);
  const auto pa = make_cooling(Scenario::aTSC, Shape::Pouch);
  for (Side side : kAllSides) CHECK(pa[side].h == kActiveH);

  const auto b = make_cooling(Scenario::bTC, Shape::Cylindrical);
  int active = 0;
  for (Side side : kAllSides) active += b[side].h == kActiveH;
  CHECK(active == 1);
  CHECK(b[Side::Bottom].h == kActiveH);
  CHECK_FALSE(parse_scenario("XYZ").has_value());
}

TEST_CASE("boundary inputs follow the side signs") {
  auto c = make_cooling(Scenario::btTC, Shape::Cylindrical, 12.0);
  const auto u = BoundaryInput::from_cooling(c);
  CHECK(u[Side::Surface] == doctest::Approx(kPassiveH * 12.0));
  CHECK(u[Side::Top] == doctest::Approx(kActiveH * 12.0));
  CHECK(u[Side::Bottom] == doctest::Approx(-kActiveH * 12.0));
  CHECK(u[Side::Core] == 0.0);
  const auto sides = input_sides(Shape::Cylindrical);
  CHECK(sides.size() == 3);
  CHECK(input_sides(Shape::Pouch).size() == 4);
  const auto back = from_input_vector(to_input_vector(u, sides), sides);
  for (Side s : kAllSides) CHECK(back[s] == u[s]);

  c[Side::Core].h = 5.0;
  CHECK_THROWS_AS(c.validate(Shape::Cylindrical), std::invalid_argument);
}
