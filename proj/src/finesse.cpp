#include "cavimode/finesse.hpp"

#include <cmath>
#include <limits>

#include "cavimode/constants.hpp"
#include "cavimode/error.hpp"
#include "cavimode/modes.hpp"

namespace cavimode {

double empty_finesse(double R) { return kPi * std::sqrt(R) / (1.0 - R); }

double decay_rate(double length_m, double finesse) { return kPi * kSpeedOfLight / (2.0 * length_m * finesse); }

namespace {

// Half-width at half maximum of f around 0, searched outward then bisected.
template <class F>
double half_width(F&& f, double half, double first_step, double limit) {
  double inside = 0.0, outside = first_step;
  while (f(outside) >= half) {
    inside = outside;
    outside *= 2.0;
    if (outside > limit) throw CavityError(ErrorCode::peak_overlap, "half maximum not reached");
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (mid <= inside || mid >= outside) break;
    if (f(mid) >= half) inside = mid; else outside = mid;
  }
  return 0.5 * (inside + outside);
}

}  // namespace

FinesseReport finesse_numeric(const CavityConfig& config, long m) {
  const auto mode = exact_shift(config, m);
  if (!mode.converged) throw CavityError(ErrorCode::non_convergence, "mode solve failed");

  FinesseReport rep;
  rep.peak_k = mode.k;
  rep.tc_max = transmission_closed_form(config, mode.k);
  rep.finesse_empty = empty_finesse(config.mirror_reflectivity);

  // The Lorentzian lives in the round-trip phase delta = kL' with the
  // membrane phases kq' and kQ held at the resonance. |D|^2 is written as
  // A (X - X0)^2 + (C - B^2/4A); expanding A X^2 + B X + C directly loses
  // everything to cancellation once (1-R)^2 T_m^2 drops below 1e-15 C.
  const auto parts = denominator_parts(config, mode.k);
  const auto mc = membrane_coefficients(config.membrane, mode.k);
  const double R = config.mirror_reflectivity;
  const double rm = mc.reflectivity, tm = mc.transmissivity;
  const double delta_m = reduced_phase(mode.k, config.length_m) + 2 * mc.phase;
  const double kqp = reduced_phase(mode.k, config.separation_m) + mc.phase;
  const double s2q = std::sin(reduced_phase(2.0 * mode.k, config.com_m));
  const double skq = std::sin(kqp);
  const double floor = (1 - R) * (1 - R) * (tm * tm + 4 * rm * s2q * s2q * skq * skq);
  const double offset = parts.x + parts.b / (2 * parts.a);  // zero unless |F~| was clamped
  const double numerator = (1 - R) * (1 - R) * tm * tm;
  auto tc_phase = [&](double dd) {
    const double sh = std::sin(0.5 * dd);
    const double dx = 2 * sh * (std::cos(delta_m + 0.5 * dd) - rm * std::cos(delta_m - 2 * kqp + 0.5 * dd));
    const double x = dx + offset;
    return numerator / (parts.a * x * x + floor);
  };
  const double peak = tc_phase(0.0);
  const double up = half_width([&](double x) { return tc_phase(x); }, 0.5 * peak, 1e-9 * kPi, 0.5 * kPi);
  const double down = half_width([&](double x) { return tc_phase(-x); }, 0.5 * peak, 1e-9 * kPi, 0.5 * kPi);
  rep.beta_halfwidth = 0.5 * (up + down);
  rep.asymmetry = std::abs(up - down) / (up + down);
  rep.lorentzian_ok = rep.asymmetry <= 0.05;
  rep.finesse_numeric = kPi / (2.0 * rep.beta_halfwidth);
  rep.kappa = decay_rate(config.length_m, rep.finesse_numeric);

  // Width of the actual transmission line in k, every phase moving together.
  // Near an inner-cavity resonance the membranes add group delay and this
  // narrows well below the phase width.
  const double half = 0.5 * rep.tc_max;
  const double limit = 0.5 * kPi / config.length_m;
  const double first = 1e-9 * kPi / config.length_m;
  const double k_up = half_width([&](double x) { return transmission_closed_form(config, mode.k + x); }, half, first, limit);
  const double k_down = half_width([&](double x) { return transmission_closed_form(config, mode.k - x); }, half, first, limit);
  rep.finesse_wavenumber = kPi / (2.0 * 0.5 * (k_up + k_down) * config.length_m);

  rep.finesse_closed = std::numeric_limits<double>::quiet_NaN();
  if (config.com_m == 0.0) rep.finesse_closed = finesse_closed_form(config, m);
  return rep;
}

double finesse_closed_form(const CavityConfig& config, long m) {
  validate(config);
  if (config.com_m != 0.0) throw CavityError(ErrorCode::nonzero_q, "closed-form finesse requires Q = 0");
  const auto mode = exact_shift(config, m);
  const auto mc = membrane_coefficients(config.membrane, mode.k);
  const double R = config.mirror_reflectivity;
  const double rm = mc.reflectivity;
  // delta_m = kL' from the solved resonance, not m pi.
  const double delta = ((m % 2 == 0) ? 0.0 : kPi) + mode.delta_k * config.length_m + 2 * mc.phase;
  const double kqp = reduced_phase(mode.k, config.separation_m) + mc.phase;
  const double s = std::sin(kqp);
  const double radicand = R * rm * rm * std::cos(2 * delta - 4 * kqp) - 2 * R * rm * std::cos(2 * delta - 2 * kqp) +
                          R * std::cos(2 * delta) + (1 + R) * (1 + R) * rm * s * s;
  if (radicand < 0.0) return std::numeric_limits<double>::quiet_NaN();
  return kPi * std::sqrt(radicand) / ((1 - R) * (1 - rm));
}

double max_coupling_over_kappa(double omega0, double finesse, double length_m, double separation_m, double x_zpm) {
  return 2.0 * omega0 * finesse / (kPi * kSpeedOfLight) * (length_m / separation_m) * x_zpm;
}

StrongCouplingFigures strong_coupling_figures(const CavityConfig& config, long m, const MechanicalSpec& mech,
                                              double finesse, double g_q) {
  StrongCouplingFigures f;
  const double x_zpm = zero_point_motion(mech);
  const double omega0 = kSpeedOfLight * empty_mode(m, config.length_m);
  f.finesse = finesse;
  f.kappa = decay_rate(config.length_m, finesse);
  f.g_q = g_q;
  f.g_q_max = coupling_cap(config, m, mech);
  f.g_over_kappa = g_q / f.kappa;
  f.g_max_over_kappa = max_coupling_over_kappa(omega0, finesse, config.length_m, config.separation_m, x_zpm);
  f.double_over_single = config.length_m / (2.0 * config.separation_m);
  try {
    f.cooperativity = cooperativity(g_q, f.kappa, mech);
  } catch (const CavityError& e) {
    if (e.code() != ErrorCode::missing_damping) throw;
    f.cooperativity = std::numeric_limits<double>::quiet_NaN();
  }
  return f;
}

}  // namespace cavimode
