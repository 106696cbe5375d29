#pragma once

#include "cavimode/cavity.hpp"
#include "cavimode/coupling.hpp"

namespace cavimode {

struct FinesseReport {
  double finesse_numeric = 0.0;     // pi / 2 beta, beta measured in delta = kL' at fixed kq', kQ
  double finesse_wavenumber = 0.0;  // same from the half-width in k with all phases moving
  double finesse_closed = 0.0;  // NaN unless Q = 0
  double finesse_empty = 0.0;
  double beta_halfwidth = 0.0;  // half-width in units of the round-trip phase kL'
  double asymmetry = 0.0;       // |w+ - w-| / (w+ + w-)
  bool lorentzian_ok = true;    // asymmetry <= 5%
  double kappa = 0.0;           // rad/s
  double tc_max = 0.0;
  double peak_k = 0.0;
};

double empty_finesse(double mirror_reflectivity);

/// kappa = pi c / (2 L F).
double decay_rate(double length_m, double finesse);

FinesseReport finesse_numeric(const CavityConfig& config, long m);

/// Closed form valid at Q = 0, evaluated at the solved resonance.
double finesse_closed_form(const CavityConfig& config, long m);

struct StrongCouplingFigures {
  double g_q = 0.0;
  double g_q_max = 0.0;
  double finesse = 0.0;
  double kappa = 0.0;
  double g_over_kappa = 0.0;
  double g_max_over_kappa = 0.0;
  double double_over_single = 0.0;  // L / 2q
  double cooperativity = 0.0;       // NaN when gamma_m is unknown
};

/// g_q_max / kappa = 2 omega0 F L x_zpm / (pi c q).
double max_coupling_over_kappa(double omega0, double finesse, double length_m, double separation_m, double x_zpm);

/// Figures of merit for a given finesse and relative coupling g_q.
StrongCouplingFigures strong_coupling_figures(const CavityConfig& config, long m, const MechanicalSpec& mech,
                                              double finesse, double g_q);

}  // namespace cavimode
