#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cavimode/cavity.hpp"

namespace cavimode {

enum class ShiftMethod { exact, zeroth, first };

std::string_view to_string(ShiftMethod method);

struct ModeSolution {
  long m = 0;
  double k0 = 0.0;
  double delta_k = 0.0;
  double k = 0.0;
  ShiftMethod method = ShiftMethod::exact;
  bool converged = false;
  /// Mode-equation residual at k (exact method only).
  double residual = 0.0;
  /// h'(k0), filled by the first-order method.
  double h_prime = 0.0;
};

struct ShiftFunctionParts {
  double a_trig = 0.0;  // 1 - R_m cos(2kq')
  double b_trig = 0.0;  // R_m sin(2kq')
  double f_val = 0.0;   // -2 sqrt(R_m) cos(2kQ) sin(kq')
  double f_tilde = 0.0;
  double theta = 0.0;
};

/// Empty-cavity wavenumber m pi / L.
double empty_mode(long m, double length_m);

/// Mode index whose empty-cavity wavenumber is closest to 2 pi / lambda.
long nearest_mode(const CavityConfig& config);

ShiftFunctionParts shift_parts(const CavityConfig& config, double k);

/// Left-hand side of the R < 1 mode equation at wavenumber k.
double mode_residual(const CavityConfig& config, double k);

/// Every exact resonance of mode m, as shifts delta_k sorted ascending.
std::vector<double> exact_roots(const CavityConfig& config, long m);

/// Exact resonance of mode m. With a hint, the root closest to it is chosen
/// (scan continuity); otherwise the root closest to the empty-cavity mode.
ModeSolution exact_shift(const CavityConfig& config, long m, std::optional<double> hint = std::nullopt);

/// Picks from precomputed roots the one a scan would select.
ModeSolution select_root(const CavityConfig& config, long m, const std::vector<double>& roots,
                         std::optional<double> hint);

/// h(k) = L^-1 { (-1)^m asin F~(kQ, kq') - theta(kq') - 2 phi }, q' fixed at q + phi/k0.
double shift_function(const CavityConfig& config, long m, double k);

ModeSolution zeroth_order_shift(const CavityConfig& config, long m);
ModeSolution first_order_shift(const CavityConfig& config, long m);

ModeSolution solve_shift(const CavityConfig& config, long m, ShiftMethod method);

}  // namespace cavimode
