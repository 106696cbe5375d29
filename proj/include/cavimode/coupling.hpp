#pragma once

#include <optional>

#include "cavimode/cavity.hpp"

namespace cavimode {

struct MechanicalSpec {
  double mass_kg = 2e-12;            // 2 ng
  double frequency_rad_s = 9.4e5;
  std::optional<double> damping_rad_s;
  std::optional<double> quality_factor;

  /// gamma_m, preferring an explicit damping rate over omega_m / Q_m.
  double damping() const;

  bool operator==(const MechanicalSpec&) const = default;
};

enum class Coordinate { relative, com };

struct CouplingReport {
  double g_q = 0.0;
  double g_com = 0.0;
  double g1 = 0.0;  // g_Q/2 - g_q
  double g2 = 0.0;  // g_Q/2 + g_q
  double g_single = 0.0;
  double g_q_max = 0.0;
  std::optional<double> g_q_analytic;  // empty outside its validity domain
  double enhancement = 0.0;            // L / 2q
  double x_zpm = 0.0;
  double omega0 = 0.0;
};

double zero_point_motion(const MechanicalSpec& mech);

/// d(delta_k)/dx of the exact resonance of mode m along q or Q, by central
/// differences with one Richardson step.
double shift_derivative(const CavityConfig& config, long m, Coordinate coordinate);

double coupling_numeric(const CavityConfig& config, long m, const MechanicalSpec& mech, Coordinate coordinate);

/// Near-resonance formula -(cos 2k0Q + sqrt R_m) / T_m * g_sing.
/// Throws out_of_validity when |h'(k0)| at the nearest inner resonance is not small.
double coupling_analytic(const CavityConfig& config, long m, const MechanicalSpec& mech);

/// 2 sqrt(R_m) (omega0 / L) x_zpm.
double single_membrane_coupling(const CavityConfig& config, long m, const MechanicalSpec& mech);

/// (omega0 / q) x_zpm.
double coupling_cap(const CavityConfig& config, long m, const MechanicalSpec& mech);

double cooperativity(double g, double kappa, const MechanicalSpec& mech);

CouplingReport coupling_report(const CavityConfig& config, long m, const MechanicalSpec& mech);

/// Separation q' = q + phi/k0 of the inner-cavity resonance nearest to the
/// configured separation where the shift of mode m is steepest.
double steep_separation(const CavityConfig& config, long m);

struct SlopePeak {
  double separation_m = 0.0;  // q at the maximum
  double slope = 0.0;         // d(delta_k)/dq there, 1/m^2
  double width_m = 0.0;       // q-interval where |slope| exceeds half its peak
};

/// Locates the steepest point of delta_k(q) around the nearest steep separation
/// and measures the full width at half maximum of |d delta_k / dq|.
SlopePeak relative_slope_peak(const CavityConfig& config, long m);

}  // namespace cavimode
