#include "cavimode/membrane.hpp"

#include <cmath>

#include "cavimode/constants.hpp"
#include "cavimode/error.hpp"

namespace cavimode {

namespace {

struct Validator {
  void operator()(const PhysicalMembrane& m) const {
    if (!(m.index >= 1.0) || !std::isfinite(m.index))
      throw CavityError(ErrorCode::invalid_spec, "refractive index must be >= 1");
    if (!(m.thickness_m > 0.0) || !std::isfinite(m.thickness_m))
      throw CavityError(ErrorCode::invalid_spec, "membrane thickness must be > 0");
  }
  void operator()(const SyntheticMembrane& m) const {
    if (!(m.reflectivity >= 0.0 && m.reflectivity < 1.0))
      throw CavityError(ErrorCode::invalid_spec, "membrane reflectivity must lie in [0, 1)");
    if (!(m.phase_rad > -kPi && m.phase_rad <= kPi))
      throw CavityError(ErrorCode::invalid_spec, "membrane phase must lie in (-pi, pi]");
  }
};

}  // namespace

void validate(const MembraneSpec& spec) { std::visit(Validator{}, spec); }

MembraneCoefficients membrane_coefficients(const MembraneSpec& spec, double k) {
  if (!(k > 0.0)) throw CavityError(ErrorCode::invalid_spec, "wavenumber must be > 0");
  validate(spec);

  MembraneCoefficients out;
  if (const auto* phys = std::get_if<PhysicalMembrane>(&spec)) {
    const double n = phys->index;
    const double beta = n * k * phys->thickness_m;
    const double s = std::sin(beta);
    const double c = std::cos(beta);
    const std::complex<double> den((n * n + 1.0) * s, 2.0 * n * c);
    out.r = (n * n - 1.0) * s / den;
    out.t = 2.0 * n / den;
    out.reflectivity = std::norm(out.r);
    out.transmissivity = 1.0 - out.reflectivity;
    out.phase = std::arg(out.t);
    // r/t = (n^2-1) sin(beta) / 2n is real; its sign decides the branch.
    const double ratio = (n * n - 1.0) * s / (2.0 * n);
    out.amplitude = ratio * std::abs(out.t);
  } else {
    const auto& syn = std::get<SyntheticMembrane>(spec);
    const auto phase = std::polar(1.0, syn.phase_rad);
    out.amplitude = std::sqrt(syn.reflectivity);
    out.r = out.amplitude * phase;
    out.t = std::sqrt(1.0 - syn.reflectivity) * phase;
    out.reflectivity = syn.reflectivity;
    out.transmissivity = 1.0 - syn.reflectivity;
    out.phase = syn.phase_rad;
  }
  return out;
}

double membrane_phase(const MembraneCoefficients& coeffs) { return std::arg(coeffs.t); }

}  // namespace cavimode
