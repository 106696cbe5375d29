#pragma once

#include <complex>

#include "cavimode/membrane.hpp"

namespace cavimode {

/// Two identical membranes inside a cavity bounded by identical mirrors at -L/2 and +L/2.
/// Q is the membranes' centre of mass, q their separation q2 - q1.
struct CavityConfig {
  double length_m = 0.01;
  double mirror_reflectivity = 0.9999;
  MembraneSpec membrane = SyntheticMembrane{};
  double com_m = 0.0;
  double separation_m = 0.0;
  double wavelength_m = 1064e-9;

  double left_length() const { return 0.5 * length_m + com_m - 0.5 * separation_m; }
  double inner_length() const { return separation_m; }
  double right_length() const { return 0.5 * length_m - com_m - 0.5 * separation_m; }

  bool operator==(const CavityConfig&) const = default;
};

/// Throws CavityError(invalid_config) unless both membranes sit strictly inside the cavity.
void validate(const CavityConfig& config);

/// Field amplitudes normalised to a unit input field.
struct FieldSolution {
  std::complex<double> input{1.0, 0.0};
  std::complex<double> a1, a2, a3, a4, a5, a6;
  std::complex<double> reflected, transmitted;
};

struct DenominatorParts {
  std::complex<double> d;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double x = 0.0;        // sin(kL') - R_m sin(kL' - 2kq')
  double lprime_m = 0.0; // L + 2 phi / k
  double qprime_m = 0.0; // q + phi / k

  double quadratic() const { return a * x * x + b * x + c; }
};

FieldSolution solve_fields(const CavityConfig& config, double k);

double transmission_closed_form(const CavityConfig& config, double k);

DenominatorParts denominator_parts(const CavityConfig& config, double k);

/// k * length reduced to [0, 2pi), with the product formed in extended precision.
double reduced_phase(double k, double length);

}  // namespace cavimode
