#pragma once

#include <complex>
#include <variant>

namespace cavimode {

/// Dielectric slab described by its refractive index and thickness.
struct PhysicalMembrane {
  double index = 1.0;       // n >= 1
  double thickness_m = 0.0; // L_m > 0

  bool operator==(const PhysicalMembrane&) const = default;
};

/// Membrane described directly by intensity reflectivity and common phase.
/// Used for patterned/photonic-crystal membranes whose reflectivity is a free knob.
struct SyntheticMembrane {
  double reflectivity = 0.0;  // 0 <= R_m < 1
  double phase_rad = 0.0;     // (-pi, pi]

  bool operator==(const SyntheticMembrane&) const = default;
};

using MembraneSpec = std::variant<PhysicalMembrane, SyntheticMembrane>;

/// Amplitude coefficients of a lossless membrane.
///
/// For real n the reflection and transmission share a phase up to a sign. The
/// phase is always taken from t_m; `amplitude` carries the sign so that
/// r_m = amplitude * exp(i phi) exactly, while reflectivity = amplitude^2.
struct MembraneCoefficients {
  std::complex<double> r;
  std::complex<double> t;
  double reflectivity = 0.0;    // |r|^2
  double transmissivity = 1.0;  // 1 - |r|^2
  double phase = 0.0;           // arg(t)
  double amplitude = 0.0;       // signed sqrt(reflectivity)
};

void validate(const MembraneSpec& spec);

MembraneCoefficients membrane_coefficients(const MembraneSpec& spec, double k);

double membrane_phase(const MembraneCoefficients& coeffs);

}  // namespace cavimode
