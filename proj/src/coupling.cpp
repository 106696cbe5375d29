#include "cavimode/coupling.hpp"

#include <cmath>
#include <limits>

#include "cavimode/constants.hpp"
#include "cavimode/error.hpp"
#include "cavimode/modes.hpp"

namespace cavimode {

namespace {

double membrane_transmissivity(const CavityConfig& config, long m) {
  return membrane_coefficients(config.membrane, empty_mode(m, config.length_m)).transmissivity;
}

double& coordinate_ref(CavityConfig& config, Coordinate coordinate) {
  return coordinate == Coordinate::relative ? config.separation_m : config.com_m;
}

double central_difference(const CavityConfig& config, long m, Coordinate coordinate, double step, double centre) {
  CavityConfig plus = config, minus = config;
  coordinate_ref(plus, coordinate) += step;
  coordinate_ref(minus, coordinate) -= step;
  const double up = exact_shift(plus, m, centre).delta_k;
  const double down = exact_shift(minus, m, centre).delta_k;
  if (std::abs(up - down) > kPi / config.length_m)
    throw CavityError(ErrorCode::stencil_crosses_branch, "shift jumps across the stencil");
  return (up - down) / (2 * step);
}

}  // namespace

double MechanicalSpec::damping() const {
  if (damping_rad_s) return *damping_rad_s;
  if (quality_factor) return frequency_rad_s / *quality_factor;
  throw CavityError(ErrorCode::missing_damping, "neither gamma_m nor Q_m given");
}

double zero_point_motion(const MechanicalSpec& mech) {
  if (!(mech.mass_kg > 0.0) || !(mech.frequency_rad_s > 0.0))
    throw CavityError(ErrorCode::invalid_config, "mass and mechanical frequency must be > 0");
  return std::sqrt(kHbar / (mech.mass_kg * mech.frequency_rad_s));
}

double shift_derivative(const CavityConfig& config, long m, Coordinate coordinate) {
  const double centre = exact_shift(config, m).delta_k;
  // The steep region narrows like lambda T_m, so the stencil scales with it.
  double step = 1e-4 * config.wavelength_m * membrane_transmissivity(config, m);
  for (int attempt = 0; attempt < 4; ++attempt, step *= 0.1) {
    try {
      const double coarse = central_difference(config, m, coordinate, step, centre);
      const double fine = central_difference(config, m, coordinate, 0.5 * step, centre);
      return (4.0 * fine - coarse) / 3.0;
    } catch (const CavityError& e) {
      if (e.code() != ErrorCode::stencil_crosses_branch || attempt == 3) throw;
    }
  }
  throw CavityError(ErrorCode::stencil_crosses_branch, "unreachable");
}

double coupling_numeric(const CavityConfig& config, long m, const MechanicalSpec& mech, Coordinate coordinate) {
  return kSpeedOfLight * shift_derivative(config, m, coordinate) * zero_point_motion(mech);
}

double single_membrane_coupling(const CavityConfig& config, long m, const MechanicalSpec& mech) {
  const double k0 = empty_mode(m, config.length_m);
  const double rm = membrane_coefficients(config.membrane, k0).reflectivity;
  return 2.0 * std::sqrt(rm) * kSpeedOfLight * k0 / config.length_m * zero_point_motion(mech);
}

double coupling_analytic(const CavityConfig& config, long m, const MechanicalSpec& mech) {
  validate(config);
  const double k0 = empty_mode(m, config.length_m);
  const auto mc = membrane_coefficients(config.membrane, k0);
  if (mc.reflectivity == 0.0) return 0.0;

  CavityConfig at_resonance = config;
  at_resonance.separation_m = steep_separation(config, m);
  const double hp = first_order_shift(at_resonance, m).h_prime;
  if (std::abs(hp) > 0.3)
    throw CavityError(ErrorCode::out_of_validity, "saturation regime, h'(k0) = " + std::to_string(hp));

  const double bracket = std::cos(reduced_phase(2.0 * k0, config.com_m)) + std::sqrt(mc.reflectivity);
  return -bracket / mc.transmissivity * single_membrane_coupling(config, m, mech);
}

double coupling_cap(const CavityConfig& config, long m, const MechanicalSpec& mech) {
  if (!(config.separation_m > 0.0)) throw CavityError(ErrorCode::invalid_config, "q must be > 0");
  return kSpeedOfLight * empty_mode(m, config.length_m) / config.separation_m * zero_point_motion(mech);
}

double cooperativity(double g, double kappa, const MechanicalSpec& mech) {
  const double gamma = mech.damping();
  if (!(kappa > 0.0) || !(gamma > 0.0))
    throw CavityError(ErrorCode::invalid_config, "kappa and gamma_m must be > 0");
  return g * g / (kappa * gamma);
}

CouplingReport coupling_report(const CavityConfig& config, long m, const MechanicalSpec& mech) {
  CouplingReport r;
  r.x_zpm = zero_point_motion(mech);
  r.omega0 = kSpeedOfLight * empty_mode(m, config.length_m);
  r.g_q = coupling_numeric(config, m, mech, Coordinate::relative);
  r.g_com = coupling_numeric(config, m, mech, Coordinate::com);
  r.g1 = 0.5 * r.g_com - r.g_q;
  r.g2 = 0.5 * r.g_com + r.g_q;
  r.g_single = single_membrane_coupling(config, m, mech);
  r.g_q_max = coupling_cap(config, m, mech);
  try {
    r.g_q_analytic = coupling_analytic(config, m, mech);
  } catch (const CavityError& e) {
    if (e.code() != ErrorCode::out_of_validity) throw;
  }
  r.enhancement = config.length_m / (2.0 * config.separation_m);
  return r;
}

double steep_separation(const CavityConfig& config, long m) {
  const double k0 = empty_mode(m, config.length_m);
  const double phi = membrane_coefficients(config.membrane, k0).phase;
  // delta_k is steepest where k0 q' = p pi with p of the same parity as m.
  const double x = (k0 * config.separation_m + phi) / kPi;
  long p = std::lround(x);
  if ((p - m) % 2 != 0) p += (x > static_cast<double>(p)) ? 1 : -1;
  if (p < 1) p += 2;
  return (static_cast<double>(p) * kPi - phi) / k0;
}

SlopePeak relative_slope_peak(const CavityConfig& config, long m) {
  validate(config);
  const double lambda = config.wavelength_m;
  const double tm = membrane_transmissivity(config, m);
  const double feature = lambda * std::max(tm / (2 * kPi), config.separation_m / config.length_m);
  const double centre = steep_separation(config, m);

  auto slope_at = [&](double q) {
    CavityConfig c = config;
    c.separation_m = q;
    return shift_derivative(c, m, Coordinate::relative);
  };
  auto magnitude = [&](double q) { return std::abs(slope_at(q)); };

  constexpr int kSamples = 41;
  const double span = 3.0 * feature;
  int best = 0;
  double best_val = -1.0;
  std::vector<double> qs(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    qs[i] = centre - span + 2 * span * i / (kSamples - 1);
    const double v = magnitude(qs[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }

  // golden refinement between the neighbours of the best sample
  double a = qs[std::max(best - 1, 0)], b = qs[std::min(best + 1, kSamples - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = magnitude(c), fd = magnitude(d);
  for (int it = 0; it < 40; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a); fc = magnitude(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a); fd = magnitude(d);
    }
  }
  SlopePeak peak;
  peak.separation_m = 0.5 * (a + b);
  peak.slope = slope_at(peak.separation_m);
  const double top = std::max({std::abs(peak.slope), fc, fd, best_val});
  if (top == 0.0) return peak;

  auto edge = [&](double dir) {
    double inside = peak.separation_m, outside = inside;
    double step = feature / 8.0;
    for (int it = 0; it < 64; ++it) {
      outside = inside + dir * step;
      if (std::abs(outside - centre) > 0.5 * lambda)
        throw CavityError(ErrorCode::non_convergence, "slope never falls to half maximum");
      if (magnitude(outside) < 0.5 * top) break;
      inside = outside;
      step *= 1.5;
    }
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (magnitude(mid) >= 0.5 * top) inside = mid; else outside = mid;
    }
    return 0.5 * (inside + outside);
  };
  peak.width_m = edge(1.0) - edge(-1.0);
  return peak;
}

}  // namespace cavimode
