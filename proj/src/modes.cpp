#include "cavimode/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cavimode/constants.hpp"
#include "cavimode/error.hpp"

namespace cavimode {

namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr long double kTwoPiL = 2.0L * kPiL;

double reduce(long double x) {
  long double p = std::fmod(x, kTwoPiL);
  if (p < 0) p += kTwoPiL;
  return static_cast<double>(p);
}

ShiftFunctionParts parts_from_phases(double kqp, double two_kq, double rm, double amplitude, double factor) {
  ShiftFunctionParts p;
  p.a_trig = 1.0 - rm * std::cos(2 * kqp);
  p.b_trig = rm * std::sin(2 * kqp);
  const double norm = std::hypot(p.a_trig, p.b_trig);
  if (norm == 0.0)
    throw CavityError(ErrorCode::singular_configuration, "R_m = 1 with cos(2kq') = 1");
  p.f_val = -factor * amplitude * std::cos(two_kq) * std::sin(kqp);
  p.f_tilde = p.f_val / norm;
  const double cos_theta = std::clamp(p.a_trig / norm, -1.0, 1.0);
  // Step(-B) = 1 for B <= 0; at B = 0 the arccos is zero so the sign is moot.
  p.theta = (p.b_trig > 0.0 ? 1.0 : -1.0) * std::acos(cos_theta);
  if (p.b_trig == 0.0) p.theta = 0.0;
  return p;
}

/// Mode m of a given cavity, parameterised by the shift from the empty-cavity wavenumber.
/// The approximations freeze the membrane coefficients at k0; the exact
/// equation re-evaluates them, which matters for dispersive slabs.
struct ModeModel {
  ModeModel(const CavityConfig& cfg, long mode) : config(cfg), m(mode) {
    validate(cfg);
    if (mode < 1) throw CavityError(ErrorCode::invalid_config, "mode index must be >= 1");
    length = cfg.length_m;
    k0_l = static_cast<long double>(mode) * kPiL / static_cast<long double>(length);
    k0 = static_cast<double>(k0_l);
    frozen = membrane_coefficients(cfg.membrane, k0);
    rm = frozen.reflectivity;
    tm = frozen.transmissivity;
    amplitude = frozen.amplitude;
    phi = frozen.phase;
    R = cfg.mirror_reflectivity;
    exact_factor = (1.0 + R) / std::sqrt(R);
    parity = (mode % 2 == 0) ? 1.0 : -1.0;
  }

  // Phases at k = k0 + dk.
  double kl(double dk) const { return (m % 2 == 0 ? 0.0 : kPi) + dk * length; }
  double kq(double dk) const {
    return reduce(k0_l * config.separation_m + static_cast<long double>(dk) * config.separation_m);
  }
  double two_kcom(double dk) const {
    return reduce(2.0L * (k0_l * config.com_m + static_cast<long double>(dk) * config.com_m));
  }

  MembraneCoefficients at(double dk) const {
    if (std::holds_alternative<SyntheticMembrane>(config.membrane)) return frozen;
    return membrane_coefficients(config.membrane, k0 + dk);
  }

  /// Labelled form of the R < 1 mode equation; its roots are the resonances of mode m.
  double label_function(double dk) const {
    const auto mc = at(dk);
    const auto p = parts_from_phases(kq(dk) + mc.phase, two_kcom(dk), mc.reflectivity, mc.amplitude, exact_factor);
    return dk * length + 2 * mc.phase - parity * std::asin(std::clamp(p.f_tilde, -1.0, 1.0)) + p.theta;
  }

  double residual(double dk) const {
    const auto mc = at(dk);
    const double klp = kl(dk) + 2 * mc.phase;
    const double kqp = kq(dk) + mc.phase;
    return std::sin(klp) - mc.reflectivity * std::sin(klp - 2 * kqp) +
           exact_factor * mc.amplitude * std::cos(two_kcom(dk)) * std::sin(kqp);
  }

  double h(double dk) const {
    // q' is frozen at q + phi/k0, so k q' = k q + phi (1 + dk/k0).
    const double kqp = kq(dk) + phi * (1.0 + dk / k0);
    const auto p = parts_from_phases(kqp, two_kcom(dk), rm, amplitude, 2.0);
    return (parity * std::asin(std::clamp(p.f_tilde, -1.0, 1.0)) - p.theta - 2 * phi) / length;
  }

  const CavityConfig& config;
  long m;
  double length = 0.0;
  long double k0_l = 0.0L;
  double k0 = 0.0;
  MembraneCoefficients frozen;
  double rm = 0.0, tm = 1.0, amplitude = 0.0, phi = 0.0, R = 0.0;
  double exact_factor = 2.0;
  double parity = 1.0;
};

double bisect(const ModeModel& model, double a, double b, double fa) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = model.label_function(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> sample_nodes(const ModeModel& model, double lo, double hi) {
  constexpr int kGrid = 2048;
  std::vector<double> nodes;
  nodes.reserve(kGrid + 256);
  for (int i = 0; i < kGrid; ++i) nodes.push_back(lo + (hi - lo) * i / (kGrid - 1));

  // The phase function jumps across inner-cavity resonances (k q' = p pi)
  // over a width ~ T_m / q; seed nodes there so narrow brackets are not missed.
  const double q = model.config.separation_m;
  const double width = std::max(model.tm, 1e-15) / q;
  const long double base = model.k0_l * q + model.phi;
  const long p_lo = static_cast<long>(std::floor((base + lo * q) / kPiL)) - 1;
  const long p_hi = static_cast<long>(std::ceil((base + hi * q) / kPiL)) + 1;
  for (long p = p_lo; p <= p_hi && p - p_lo < 16; ++p) {
    const double centre = static_cast<double>((p * kPiL - base) / q);
    nodes.push_back(centre);
    for (int j = 0; j <= 24; ++j) {
      const double off = width * std::pow(10.0, -3.0 + 6.0 * j / 24.0);
      nodes.push_back(centre - off);
      nodes.push_back(centre + off);
    }
  }
  std::erase_if(nodes, [&](double x) { return !(x >= lo && x <= hi); });
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

}  // namespace

std::string_view to_string(ShiftMethod method) {
  switch (method) {
    case ShiftMethod::exact: return "exact";
    case ShiftMethod::zeroth: return "zeroth";
    case ShiftMethod::first: return "first";
  }
  return "unknown";
}

double empty_mode(long m, double length_m) {
  if (m < 1 || !(length_m > 0.0)) throw CavityError(ErrorCode::invalid_config, "need m >= 1 and L > 0");
  return static_cast<double>(m) * kPi / length_m;
}

long nearest_mode(const CavityConfig& config) {
  return std::max(1L, std::lround(2.0 * config.length_m / config.wavelength_m));
}

ShiftFunctionParts shift_parts(const CavityConfig& config, double k) {
  validate(config);
  const auto mc = membrane_coefficients(config.membrane, k);
  const double kqp = reduced_phase(k, config.separation_m) + mc.phase;
  const double two_kq = reduced_phase(2.0 * k, config.com_m);
  return parts_from_phases(kqp, two_kq, mc.reflectivity, mc.amplitude, 2.0);
}

double mode_residual(const CavityConfig& config, double k) {
  validate(config);
  const auto mc = membrane_coefficients(config.membrane, k);
  const double R = config.mirror_reflectivity;
  const double klp = reduced_phase(k, config.length_m) + 2 * mc.phase;
  const double kqp = reduced_phase(k, config.separation_m) + mc.phase;
  const double two_kq = reduced_phase(2.0 * k, config.com_m);
  return std::sin(klp) - mc.reflectivity * std::sin(klp - 2 * kqp) +
         (1 + R) / std::sqrt(R) * mc.amplitude * std::cos(two_kq) * std::sin(kqp);
}

std::vector<double> exact_roots(const CavityConfig& config, long m) {
  const ModeModel model(config, m);
  // |asin| <= pi/2 and |theta| < pi/2 confine roots to |dk L + 2 phi| < pi.
  // The margin absorbs the drift of a dispersive phi across the window.
  const double margin = 0.05 * kPi / model.length;
  const double lo = (-kPi - 2 * model.phi) / model.length - margin;
  const double hi = (kPi - 2 * model.phi) / model.length + margin;

  const auto nodes = sample_nodes(model, lo, hi);
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = model.label_function(nodes[i]);

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (values[i] == 0.0) {
      roots.push_back(nodes[i]);
    } else if ((values[i] < 0) != (values[i + 1] < 0) && values[i + 1] != 0.0) {
      roots.push_back(bisect(model, nodes[i], nodes[i + 1], values[i]));
    }
  }
  if (!values.empty() && values.back() == 0.0) roots.push_back(nodes.back());
  if (roots.empty()) throw CavityError(ErrorCode::no_root, "no sign change of the mode equation in window");
  return roots;
}

ModeSolution select_root(const CavityConfig& config, long m, const std::vector<double>& roots,
                         std::optional<double> hint) {
  if (roots.empty()) throw CavityError(ErrorCode::no_root, "empty root set");
  const ModeModel model(config, m);
  const double target = hint.value_or(0.0);
  const double best = *std::min_element(roots.begin(), roots.end(), [&](double a, double b) {
    return std::abs(a - target) < std::abs(b - target);
  });

  // Where |F~| exceeds one (only for R_m very close to R) the mode equation has
  // no exact root; the clamped root sits where X(kL') is extremal, which is the
  // transmission maximum to the same order. The residual then stays nonzero.
  ModeSolution s;
  s.m = m;
  s.k0 = model.k0;
  s.delta_k = best;
  s.k = model.k0 + best;
  s.method = ShiftMethod::exact;
  s.residual = model.residual(best);
  s.converged = std::isfinite(best);
  if (!s.converged) return s;

  // One ulp of k can move the residual by ~1e-10 in long cavities, so settle
  // on the neighbouring double where the residual is smallest.
  double k = s.k, best_res = std::abs(mode_residual(config, k));
  for (double dir : {-1.0, 1.0}) {
    double probe = s.k;
    for (int i = 0; i < 4; ++i) {
      probe = std::nextafter(probe, dir * std::numeric_limits<double>::infinity());
      const double r = std::abs(mode_residual(config, probe));
      if (r < best_res) {
        best_res = r;
        k = probe;
      }
    }
  }
  s.delta_k += k - s.k;
  s.k = k;
  s.residual = mode_residual(config, k);
  return s;
}

ModeSolution exact_shift(const CavityConfig& config, long m, std::optional<double> hint) {
  return select_root(config, m, exact_roots(config, m), hint);
}

double shift_function(const CavityConfig& config, long m, double k) {
  const ModeModel model(config, m);
  return model.h(k - model.k0);
}

ModeSolution zeroth_order_shift(const CavityConfig& config, long m) {
  const ModeModel model(config, m);
  ModeSolution s;
  s.m = m;
  s.k0 = model.k0;
  s.delta_k = model.h(0.0);
  s.k = model.k0 + s.delta_k;
  s.method = ShiftMethod::zeroth;
  s.converged = true;
  return s;
}

ModeSolution first_order_shift(const CavityConfig& config, long m) {
  const ModeModel model(config, m);
  const double step = 1e-6 * kPi / model.length;
  const double h0 = model.h(0.0);
  const double hp = (model.h(step) - model.h(-step)) / (2 * step);
  if (std::abs(1.0 - hp) < 1e-3)
    throw CavityError(ErrorCode::divergent_correction, "h'(k0) = " + std::to_string(hp));
  ModeSolution s;
  s.m = m;
  s.k0 = model.k0;
  s.delta_k = h0 / (1.0 - hp);
  s.k = model.k0 + s.delta_k;
  s.method = ShiftMethod::first;
  s.h_prime = hp;
  s.converged = true;
  return s;
}

ModeSolution solve_shift(const CavityConfig& config, long m, ShiftMethod method) {
  switch (method) {
    case ShiftMethod::exact: return exact_shift(config, m);
    case ShiftMethod::zeroth: return zeroth_order_shift(config, m);
    case ShiftMethod::first: return first_order_shift(config, m);
  }
  throw CavityError(ErrorCode::invalid_config, "unknown method");
}

}  // namespace cavimode
