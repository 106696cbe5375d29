#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavimode/cavity.hpp"
#include "cavimode/coupling.hpp"
#include "cavimode/modes.hpp"

namespace cavimode {

enum class ScanKind { shift_1d, shift_2d, reflectivity_sweep, coupling_report, finesse_scan };
enum class OutputFormat { csv, json };

std::string_view to_string(ScanKind kind);
ScanKind parse_scan_kind(std::string_view text);

/// One swept parameter. Either a linear grid (start, stop, points) or an explicit list.
///
/// Recognised names: a (q = q_base + a lambda), b (Q = Q_base + b lambda),
/// Rm, Tm (R_m = 1 - Tm), q_m and Q_m (absolute positions in metres).
struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  std::vector<double> list;

  std::vector<double> values() const;
  bool operator==(const Axis&) const = default;
};

struct ScanRequest {
  std::string name;
  ScanKind kind = ScanKind::shift_1d;
  CavityConfig config;
  std::optional<long> mode;
  std::vector<Axis> axes;
  std::vector<ShiftMethod> methods{ShiftMethod::exact, ShiftMethod::zeroth, ShiftMethod::first};
  MechanicalSpec mech;
  std::optional<double> finesse_override;

  bool operator==(const ScanRequest&) const = default;
};

void validate(const ScanRequest& request);

/// Mode index used for every row: the explicit one, or the nearest to 2L/lambda.
long scan_mode(const ScanRequest& request);

/// Configuration at one grid point; coordinates are in axis order.
CavityConfig grid_config(const ScanRequest& request, const std::vector<double>& coordinates);

struct ScanSummary {
  std::size_t rows = 0;
  std::size_t warnings = 0;
  double max_abs_dk_exact = 0.0;
  double max_abs_dk_zeroth = 0.0;
  double max_abs_dk_first = 0.0;
  double max_abs_g_q = 0.0;
  double finesse_min = 0.0;
  double finesse_max = 0.0;
};

struct ScanResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<bool> converged;
  std::vector<std::string> errors;  // empty string when the point succeeded
  ScanSummary summary;

  /// Column index by name; throws std::out_of_range when absent.
  std::size_t column(std::string_view name) const;
};

enum class Execution { serial, parallel };

/// Evaluates every grid point. Points are computed independently (in parallel
/// with Execution::parallel); root selection then runs serially along the last
/// axis so that each row continues the branch of the previous one.
ScanResult run_scan(const ScanRequest& request, Execution execution = Execution::parallel, int threads = 0);

void write_csv(const ScanResult& result, std::ostream& out);
void write_json(const ScanResult& result, std::ostream& out);
std::string summary_json(const ScanSummary& summary);

// Presets reproducing the published figures.
std::vector<std::string> preset_names();
ScanRequest preset(std::string_view name);

// Flat "key = value" text with units in key names.
std::string serialize(const ScanRequest& request);
ScanRequest parse_request(std::string_view text);

}  // namespace cavimode
