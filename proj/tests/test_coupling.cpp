#include <doctest.h>

#include <cmath>

#include "cavimode/constants.hpp"
#include "cavimode/coupling.hpp"
#include "cavimode/error.hpp"
#include "cavimode/modes.hpp"

using namespace cavimode;

namespace {

constexpr double kLambda = 1064e-9;
constexpr long kMode = 18797;

CavityConfig fig2(double rm, double a = 0.0) {
  CavityConfig c;
  c.membrane = SyntheticMembrane{rm, 0.0};
  c.separation_m = (10.5 + a) * kLambda;
  return c;
}

const MechanicalSpec kDefaultMech{};

}  // namespace

TEST_CASE("zero-point motion") {
  CHECK(zero_point_motion(MechanicalSpec{kHbar, 1.0, {}, {}}) == doctest::Approx(1.0));
  CHECK(zero_point_motion(kDefaultMech) == doctest::Approx(7.49e-15).epsilon(1e-3));
  MechanicalSpec heavy = kDefaultMech;
  heavy.mass_kg *= 4;
  CHECK(zero_point_motion(heavy) == doctest::Approx(0.5 * zero_point_motion(kDefaultMech)));
  CHECK_THROWS_AS(zero_point_motion(MechanicalSpec{0.0, 1.0, {}, {}}), CavityError);
}

TEST_CASE("no membranes, no coupling") {
  const auto c = fig2(0.0, 0.2);
  CHECK(std::abs(coupling_numeric(c, kMode, kDefaultMech, Coordinate::relative)) < 1e-6);
  CHECK(std::abs(coupling_numeric(c, kMode, kDefaultMech, Coordinate::com)) < 1e-6);
  CHECK(coupling_analytic(c, kMode, kDefaultMech) == 0.0);
}

TEST_CASE("analytic coupling formula") {
  const auto c = fig2(0.8);
  const double g_sing = single_membrane_coupling(c, kMode, kDefaultMech);
  CHECK(coupling_analytic(c, kMode, kDefaultMech) == doctest::Approx(-(1 + std::sqrt(0.8)) / 0.2 * g_sing));
  CHECK((1 + std::sqrt(0.8)) / 0.2 == doctest::Approx(9.472).epsilon(1e-4));

  // cos(2 k0 Q) = -sqrt(R_m) kills the enhancement
  auto off = c;
  off.com_m = std::acos(-std::sqrt(0.8)) / (2 * empty_mode(kMode, c.length_m));
  CHECK(std::abs(coupling_analytic(off, kMode, kDefaultMech)) < 1e-9 * g_sing);
}

TEST_CASE("analytic coupling refuses the saturation regime") {
  try {
    coupling_analytic(fig2(1 - 1e-5), kMode, kDefaultMech);
    FAIL("expected out-of-validity");
  } catch (const CavityError& e) {
    CHECK(e.code() == ErrorCode::out_of_validity);
  }
}

TEST_CASE("numeric and analytic couplings agree where the formula holds") {
  for (double rm : {0.3, 0.5, 0.8, 0.95}) {
    const auto c = fig2(rm);
    const auto peak = relative_slope_peak(c, kMode);
    auto at = c;
    at.separation_m = peak.separation_m;
    const double numeric = coupling_numeric(at, kMode, kDefaultMech, Coordinate::relative);
    const double analytic = coupling_analytic(c, kMode, kDefaultMech);
    CHECK(std::abs(analytic - numeric) / std::abs(numeric) < 0.1);
  }
}

TEST_CASE("coupling cap") {
  CavityConfig c = fig2(0.998);
  c.separation_m = 10e-6;
  const double cap = coupling_cap(c, kMode, kDefaultMech);
  CHECK(cap == doctest::Approx(1.3e6).epsilon(0.03));
  auto wide = c;
  wide.separation_m *= 2;
  CHECK(coupling_cap(wide, kMode, kDefaultMech) == doctest::Approx(0.5 * cap));
  CHECK(coupling_report(c, kMode, kDefaultMech).enhancement == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("cooperativity") {
  MechanicalSpec mech = kDefaultMech;
  mech.damping_rad_s = 3.0;
  CHECK(cooperativity(3.0, 3.0, mech) == doctest::Approx(1.0));
  CHECK(cooperativity(6.0, 3.0, mech) == doctest::Approx(4.0));
  mech.damping_rad_s.reset();
  mech.quality_factor = 1e6;
  CHECK(mech.damping() == doctest::Approx(0.94));
  mech.quality_factor.reset();
  try {
    cooperativity(1.0, 1.0, mech);
    FAIL("expected missing damping");
  } catch (const CavityError& e) {
    CHECK(e.code() == ErrorCode::missing_damping);
  }
}

TEST_CASE("report bookkeeping") {
  const auto r = coupling_report(fig2(0.8, 0.003), kMode, kDefaultMech);
  CHECK(r.g1 == 0.5 * r.g_com - r.g_q);
  CHECK(r.g2 == 0.5 * r.g_com + r.g_q);
  CHECK(r.omega0 == doctest::Approx(kSpeedOfLight * empty_mode(kMode, 0.01)));
}

TEST_CASE("relative coupling never exceeds the inner-cavity cap") {
  for (double rm : {0.5, 0.9, 0.99, 0.999, 0.99999}) {
    for (int i = -10; i <= 10; ++i) {
      const auto c = fig2(rm, 0.02 * i);
      const double g = coupling_numeric(c, kMode, kDefaultMech, Coordinate::relative);
      CHECK(std::abs(g) <= 1.05 * coupling_cap(c, kMode, kDefaultMech));
    }
    const auto c = fig2(rm);
    auto at = c;
    at.separation_m = relative_slope_peak(c, kMode).separation_m;
    CHECK(std::abs(coupling_numeric(at, kMode, kDefaultMech, Coordinate::relative)) <=
          1.05 * coupling_cap(at, kMode, kDefaultMech));
  }
}

TEST_CASE("centre-of-mass coupling is not enhanced") {
  for (double rm : {0.8, 0.95, 0.99}) {
    const auto c = fig2(rm);
    const double g_sing = single_membrane_coupling(c, kMode, kDefaultMech);
    auto at = c;
    at.separation_m = relative_slope_peak(c, kMode).separation_m;
    REQUIRE(std::abs(coupling_numeric(at, kMode, kDefaultMech, Coordinate::relative)) > 5 * g_sing);
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
      auto moved = at;
      moved.com_m = i * kLambda / 80.0;
      worst = std::max(worst, std::abs(coupling_numeric(moved, kMode, kDefaultMech, Coordinate::com)));
    }
    CHECK(worst <= 2 * g_sing * 1.1);
  }
}

TEST_CASE("steepest point sits at an inner resonance of the mode's parity") {
  for (long m : {kMode, kMode - 1}) {
    const auto c = fig2(0.9);
    const double k0 = empty_mode(m, c.length_m);
    const double q = steep_separation(c, m);
    const long p = std::lround(k0 * q / kPi);
    CHECK(std::abs(k0 * q - p * kPi) < 1e-6);
    CHECK((p - m) % 2 == 0);
    const auto peak = relative_slope_peak(c, m);
    CHECK(std::abs(peak.separation_m - q) < kLambda * 0.1 / (2 * kPi));
  }
}

TEST_CASE("steep region narrows with the membrane transmission") {
  // long cavity so the inner-cavity saturation width q/L stays far below T_m/2pi
  CavityConfig c;
  c.length_m = 10.0;
  c.membrane = SyntheticMembrane{1 - 1e-3, 0.0};
  c.separation_m = kLambda;
  const long m = nearest_mode(c);
  const auto peak = relative_slope_peak(c, m);
  CHECK(peak.width_m / (kLambda * 1e-3 / (2 * kPi)) == doctest::Approx(1.0).epsilon(0.3));
}
