#include "cavimode/cavity.hpp"

#include <cmath>
#include <numbers>

#include "cavimode/error.hpp"

namespace cavimode {

namespace {

using cplx = std::complex<double>;

constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

cplx unit(double phase) { return std::polar(1.0, phase); }

struct Phases {
  double l1, l2, l3;  // k * L_i reduced mod 2pi
};

Phases phases(const CavityConfig& cfg, double k) {
  return {reduced_phase(k, cfg.left_length()), reduced_phase(k, cfg.inner_length()),
          reduced_phase(k, cfg.right_length())};
}

}  // namespace

double reduced_phase(double k, double length) {
  long double p = std::fmod(static_cast<long double>(k) * static_cast<long double>(length), kTwoPiL);
  if (p < 0) p += kTwoPiL;
  return static_cast<double>(p);
}

void validate(const CavityConfig& cfg) {
  if (!(cfg.length_m > 0.0) || !std::isfinite(cfg.length_m))
    throw CavityError(ErrorCode::invalid_config, "cavity length must be > 0");
  if (!(cfg.mirror_reflectivity > 0.0 && cfg.mirror_reflectivity < 1.0))
    throw CavityError(ErrorCode::invalid_config, "mirror reflectivity must lie in (0, 1)");
  if (!(cfg.wavelength_m > 0.0) || !std::isfinite(cfg.wavelength_m))
    throw CavityError(ErrorCode::invalid_config, "wavelength must be > 0");
  if (!(cfg.separation_m > 0.0))
    throw CavityError(ErrorCode::invalid_config, "membrane separation q must be > 0");
  if (!(std::abs(cfg.com_m) + 0.5 * cfg.separation_m < 0.5 * cfg.length_m))
    throw CavityError(ErrorCode::invalid_config, "membranes must lie strictly inside the cavity");
  try {
    validate(cfg.membrane);
  } catch (const CavityError& e) {
    throw CavityError(ErrorCode::invalid_config, e.what());
  }
}

FieldSolution solve_fields(const CavityConfig& cfg, double k) {
  validate(cfg);
  const auto mc = membrane_coefficients(cfg.membrane, k);
  const cplx i(0.0, 1.0);
  const double r = std::sqrt(cfg.mirror_reflectivity);
  const double t = std::sqrt(1.0 - cfg.mirror_reflectivity);
  const auto ph = phases(cfg, k);
  const cplx e1 = unit(ph.l1), e2 = unit(ph.l2), e3 = unit(ph.l3);
  const cplx rm = mc.r, tm = mc.t;

  // Eliminate from the right mirror inwards: each step expresses the
  // backward wave at one interface as a multiple of the forward wave.
  const cplx den5 = 1.0 + rm * r * e3 * e3;
  if (std::abs(den5) == 0.0) throw CavityError(ErrorCode::singular_system, "right subcavity");
  const cplx a5_per_a3 = i * tm * e2 / den5;
  const cplx a4_per_a3 = i * tm * e3 * r * e3 * a5_per_a3 - rm * e2;
  const cplx den3 = 1.0 + rm * e2 * a4_per_a3;
  if (std::abs(den3) == 0.0) throw CavityError(ErrorCode::singular_system, "inner subcavity");
  const cplx a3_per_a1 = i * tm * e1 / den3;
  const cplx a2_per_a1 = i * tm * e2 * a4_per_a3 * a3_per_a1 - rm * e1;
  const cplx den1 = 1.0 - r * e1 * a2_per_a1;
  if (std::abs(den1) == 0.0) throw CavityError(ErrorCode::singular_system, "left subcavity");

  FieldSolution s;
  s.a1 = i * t * s.input / den1;
  s.a2 = a2_per_a1 * s.a1;
  s.a3 = a3_per_a1 * s.a1;
  s.a4 = a4_per_a3 * s.a3;
  s.a5 = a5_per_a3 * s.a3;
  s.a6 = r * s.a5 * e3;
  s.reflected = i * t * s.a2 * e1 + r * s.input;
  s.transmitted = i * t * s.a5 * e3;
  return s;
}

namespace {

cplx closed_denominator(const CavityConfig& cfg, double k, const MembraneCoefficients& mc) {
  const double R = cfg.mirror_reflectivity;
  const double Rm = mc.reflectivity;
  const double phi = mc.phase;
  const auto ph = phases(cfg, k);
  const double L = ph.l1 + ph.l2 + ph.l3;
  const double cross = std::sqrt(R) * mc.amplitude;  // signed sqrt(R R_m)
  return 1.0 - Rm * unit(2 * ph.l2 + 2 * phi) + R * Rm * unit(2 * (ph.l1 + ph.l3) + 2 * phi) -
         R * unit(2 * L + 4 * phi) +
         cross * (unit(2 * ph.l1 + phi) + unit(2 * ph.l3 + phi) - unit(2 * (ph.l1 + ph.l2) + 3 * phi) -
                  unit(2 * (ph.l2 + ph.l3) + 3 * phi));
}

}  // namespace

double transmission_closed_form(const CavityConfig& cfg, double k) {
  validate(cfg);
  const auto mc = membrane_coefficients(cfg.membrane, k);
  const double R = cfg.mirror_reflectivity;
  const double num = (1 - R) * (1 - R) * mc.transmissivity * mc.transmissivity;
  return num / std::norm(closed_denominator(cfg, k, mc));
}

DenominatorParts denominator_parts(const CavityConfig& cfg, double k) {
  validate(cfg);
  const auto mc = membrane_coefficients(cfg.membrane, k);
  const double R = cfg.mirror_reflectivity;
  const double Rm = mc.reflectivity;
  const double phi = mc.phase;
  const auto ph = phases(cfg, k);

  const double kLp = ph.l1 + ph.l2 + ph.l3 + 2 * phi;
  const double kqp = ph.l2 + phi;
  const double kQ2 = ph.l1 - ph.l3;  // 2kQ up to a multiple of 2pi
  const double skq = std::sin(kqp);

  DenominatorParts p;
  p.d = closed_denominator(cfg, k, mc);
  p.lprime_m = cfg.length_m + 2 * phi / k;
  p.qprime_m = cfg.separation_m + phi / k;
  p.x = std::sin(kLp) - Rm * std::sin(kLp - 2 * kqp);
  p.a = 4 * R;
  p.b = 8 * std::sqrt(R) * mc.amplitude * (1 + R) * std::cos(kQ2) * skq;
  p.c = 8 * R * Rm * std::cos(2 * kQ2) * skq * skq - 2 * R * mc.transmissivity * mc.transmissivity +
        (1 + R * R) * (1 - 2 * Rm * std::cos(2 * kqp) + Rm * Rm);
  return p;
}

}  // namespace cavimode
