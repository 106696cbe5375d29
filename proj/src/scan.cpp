#include "cavimode/scan.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "cavimode/constants.hpp"
#include "cavimode/error.hpp"
#include "cavimode/finesse.hpp"

namespace cavimode {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PointValues {
  std::vector<double> roots;
  double rm = kNaN;
  double dk_exact = kNaN, dk_zeroth = kNaN, dk_first = kNaN;
  double g_q = kNaN;
  double g_q_peak = kNaN, q_peak = kNaN;
  double tc_max = kNaN;
  double finesse_k = kNaN;
  double finesse_numeric = kNaN, finesse_closed = kNaN, finesse_empty = kNaN, kappa = kNaN;
  CouplingReport coupling;
  StrongCouplingFigures figures;
  bool converged = true;
  std::string error;
};

bool wants(const ScanRequest& req, ShiftMethod m) {
  return std::find(req.methods.begin(), req.methods.end(), m) != req.methods.end();
}

std::vector<std::string> value_columns(ScanKind kind) {
  switch (kind) {
    case ScanKind::shift_1d:
    case ScanKind::shift_2d:
      return {"q_m", "Q_m", "Rm", "dk_exact", "dk_zeroth", "dk_first", "Tc_max", "converged"};
    case ScanKind::reflectivity_sweep:
      return {"q_m", "Q_m", "Rm", "dk_exact", "dk_zeroth", "dk_first", "g_q", "Tc_max", "converged"};
    case ScanKind::finesse_scan:
      return {"q_m", "Q_m", "Rm", "finesse_numeric", "finesse_closed", "finesse_empty", "finesse_k", "kappa",
              "Tc_max", "converged"};
    case ScanKind::coupling_report:
      return {"q_m",       "Q_m",   "Rm",     "g_q",     "g_Q",          "g1",
              "g2",        "g_sing", "g_q_max", "g_q_analytic", "q_peak_m", "g_q_peak", "x_zpm", "omega0",
              "enhancement", "finesse", "kappa", "g_over_kappa", "g_max_over_kappa", "C0",
              "converged"};
  }
  return {};
}

double column_value(std::string_view col, const CavityConfig& cfg, const PointValues& v) {
  if (col == "q_m") return cfg.separation_m;
  if (col == "Q_m") return cfg.com_m;
  if (col == "Rm") return v.rm;
  if (col == "dk_exact") return v.dk_exact;
  if (col == "dk_zeroth") return v.dk_zeroth;
  if (col == "dk_first") return v.dk_first;
  if (col == "g_q") return v.g_q;
  if (col == "Tc_max") return v.tc_max;
  if (col == "finesse_numeric") return v.finesse_numeric;
  if (col == "finesse_closed") return v.finesse_closed;
  if (col == "finesse_empty") return v.finesse_empty;
  if (col == "finesse_k") return v.finesse_k;
  if (col == "kappa") return v.kappa;
  if (col == "g_Q") return v.coupling.g_com;
  if (col == "g1") return v.coupling.g1;
  if (col == "g2") return v.coupling.g2;
  if (col == "g_sing") return v.coupling.g_single;
  if (col == "g_q_max") return v.coupling.g_q_max;
  if (col == "g_q_analytic") return v.coupling.g_q_analytic.value_or(kNaN);
  if (col == "q_peak_m") return v.q_peak;
  if (col == "g_q_peak") return v.g_q_peak;
  if (col == "x_zpm") return v.coupling.x_zpm;
  if (col == "omega0") return v.coupling.omega0;
  if (col == "enhancement") return v.coupling.enhancement;
  if (col == "finesse") return v.figures.finesse;
  if (col == "g_over_kappa") return v.figures.g_over_kappa;
  if (col == "g_max_over_kappa") return v.figures.g_max_over_kappa;
  if (col == "C0") return v.figures.cooperativity;
  if (col == "converged") return v.converged ? 1.0 : 0.0;
  return kNaN;
}

void evaluate_point(const ScanRequest& req, const CavityConfig& cfg, long m, PointValues& v) {
  v.rm = membrane_coefficients(cfg.membrane, empty_mode(m, cfg.length_m)).reflectivity;
  switch (req.kind) {
    case ScanKind::shift_1d:
    case ScanKind::shift_2d:
    case ScanKind::reflectivity_sweep:
      if (wants(req, ShiftMethod::zeroth)) v.dk_zeroth = zeroth_order_shift(cfg, m).delta_k;
      if (wants(req, ShiftMethod::first)) v.dk_first = first_order_shift(cfg, m).delta_k;
      if (wants(req, ShiftMethod::exact)) {
        v.roots = exact_roots(cfg, m);
        if (req.kind == ScanKind::reflectivity_sweep)
          v.g_q = coupling_numeric(cfg, m, req.mech, Coordinate::relative);
      }
      break;
    case ScanKind::finesse_scan: {
      const auto rep = finesse_numeric(cfg, m);
      v.finesse_numeric = rep.finesse_numeric;
      v.finesse_closed = rep.finesse_closed;
      v.finesse_empty = rep.finesse_empty;
      v.finesse_k = rep.finesse_wavenumber;
      v.kappa = rep.kappa;
      v.tc_max = rep.tc_max;
      break;
    }
    case ScanKind::coupling_report: {
      v.coupling = coupling_report(cfg, m, req.mech);
      v.g_q = v.coupling.g_q;
      // figures of merit use the coupling at the steepest separation nearby
      const auto peak = relative_slope_peak(cfg, m);
      auto at_peak = cfg;
      at_peak.separation_m = peak.separation_m;
      v.q_peak = peak.separation_m;
      v.g_q_peak = coupling_numeric(at_peak, m, req.mech, Coordinate::relative);
      const double finesse = req.finesse_override ? *req.finesse_override : finesse_numeric(cfg, m).finesse_numeric;
      v.figures = strong_coupling_figures(cfg, m, req.mech, finesse, v.g_q_peak);
      v.kappa = v.figures.kappa;
      break;
    }
  }
}

void evaluate_guarded(const ScanRequest& req, const CavityConfig& cfg, long m, PointValues& v) {
  try {
    evaluate_point(req, cfg, m, v);
  } catch (const CavityError& e) {
    v.converged = false;
    v.error = std::string(to_string(e.code()));
  } catch (const std::exception& e) {
    v.converged = false;
    v.error = e.what();
  }
}

double max_abs(const std::vector<std::vector<double>>& rows, std::size_t col) {
  double best = kNaN;
  for (const auto& r : rows)
    if (std::isfinite(r[col])) best = std::isnan(best) ? std::abs(r[col]) : std::max(best, std::abs(r[col]));
  return best;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string_view to_string(ScanKind kind) {
  switch (kind) {
    case ScanKind::shift_1d: return "shift-1d";
    case ScanKind::shift_2d: return "shift-2d";
    case ScanKind::reflectivity_sweep: return "reflectivity-sweep";
    case ScanKind::coupling_report: return "coupling-report";
    case ScanKind::finesse_scan: return "finesse-scan";
  }
  return "unknown";
}

ScanKind parse_scan_kind(std::string_view text) {
  for (auto k : {ScanKind::shift_1d, ScanKind::shift_2d, ScanKind::reflectivity_sweep, ScanKind::coupling_report,
                 ScanKind::finesse_scan})
    if (to_string(k) == text) return k;
  throw CavityError(ErrorCode::invalid_config, "unknown scan kind '" + std::string(text) + "'");
}

std::vector<double> Axis::values() const {
  if (!list.empty()) return list;
  std::vector<double> out(static_cast<std::size_t>(std::max(points, 0)));
  for (int i = 0; i < points; ++i)
    out[i] = (i == points - 1) ? stop : start + (stop - start) * i / (points - 1);
  return out;
}

std::size_t ScanResult::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column " + std::string(name));
}

long scan_mode(const ScanRequest& request) { return request.mode.value_or(nearest_mode(request.config)); }

CavityConfig grid_config(const ScanRequest& request, const std::vector<double>& coordinates) {
  CavityConfig cfg = request.config;
  const double lambda = cfg.wavelength_m;
  for (std::size_t i = 0; i < request.axes.size(); ++i) {
    const auto& name = request.axes[i].name;
    const double x = coordinates.at(i);
    if (name == "a") {
      cfg.separation_m = request.config.separation_m + x * lambda;
    } else if (name == "b") {
      cfg.com_m = request.config.com_m + x * lambda;
    } else if (name == "q_m") {
      cfg.separation_m = x;
    } else if (name == "Q_m") {
      cfg.com_m = x;
    } else if (name == "Rm" || name == "Tm") {
      auto* syn = std::get_if<SyntheticMembrane>(&cfg.membrane);
      if (!syn) throw CavityError(ErrorCode::invalid_config, "reflectivity axes need a synthetic membrane");
      syn->reflectivity = (name == "Rm") ? x : 1.0 - x;
    } else {
      throw CavityError(ErrorCode::invalid_config, "unknown axis '" + name + "'");
    }
  }
  return cfg;
}

void validate(const ScanRequest& req) {
  for (const auto& axis : req.axes) {
    if (axis.list.empty() && axis.points < 2)
      throw CavityError(ErrorCode::invalid_config, "axis '" + axis.name + "' needs at least 2 points");
  }
  if (req.kind == ScanKind::shift_1d && req.axes.size() != 1)
    throw CavityError(ErrorCode::invalid_config, "shift-1d needs exactly one axis");
  if (req.kind == ScanKind::shift_2d && req.axes.size() != 2)
    throw CavityError(ErrorCode::invalid_config, "shift-2d needs exactly two axes");
  if (req.methods.empty()) throw CavityError(ErrorCode::invalid_config, "no methods requested");
  if (req.mode && *req.mode < 1) throw CavityError(ErrorCode::invalid_config, "mode index must be >= 1");
  validate(req.config);

  // Every grid point must stay a valid cavity; checking each axis extreme
  // independently is enough because the mapping is monotone per axis.
  std::vector<std::vector<double>> extremes;
  for (const auto& axis : req.axes) {
    const auto v = axis.values();
    if (v.empty()) throw CavityError(ErrorCode::invalid_config, "empty axis '" + axis.name + "'");
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    extremes.push_back({*lo, *hi});
  }
  const std::size_t corners = std::size_t{1} << extremes.size();
  for (std::size_t c = 0; c < corners; ++c) {
    std::vector<double> coords;
    for (std::size_t i = 0; i < extremes.size(); ++i) coords.push_back(extremes[i][(c >> i) & 1U]);
    validate(grid_config(req, coords));
  }
}

ScanResult run_scan(const ScanRequest& req, Execution execution, int threads) {
  validate(req);
  const long m = scan_mode(req);

  std::vector<std::vector<double>> axis_values;
  std::size_t total = 1;
  for (const auto& axis : req.axes) {
    axis_values.push_back(axis.values());
    total *= axis_values.back().size();
  }
  const std::size_t inner = axis_values.empty() ? 1 : axis_values.back().size();

  std::vector<std::vector<double>> coords(total);
  std::vector<CavityConfig> configs(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    coords[idx].resize(axis_values.size());
    for (std::size_t a = axis_values.size(); a-- > 0;) {
      coords[idx][a] = axis_values[a][rem % axis_values[a].size()];
      rem /= axis_values[a].size();
    }
    configs[idx] = grid_config(req, coords[idx]);
  }

  std::vector<PointValues> values(total);
  const auto n = static_cast<std::int64_t>(total);
  if (execution == Execution::parallel) {
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (std::int64_t i = 0; i < n; ++i) evaluate_guarded(req, configs[i], m, values[i]);
  } else {
    for (std::int64_t i = 0; i < n; ++i) evaluate_guarded(req, configs[i], m, values[i]);
  }

  // Branch continuity along the innermost axis.
  for (std::size_t line = 0; line < total; line += inner) {
    std::optional<double> previous;
    for (std::size_t i = line; i < line + inner && i < total; ++i) {
      auto& v = values[i];
      if (v.roots.empty() || !v.converged) continue;
      try {
        const auto sol = select_root(configs[i], m, v.roots, previous);
        v.dk_exact = sol.delta_k;
        v.tc_max = transmission_closed_form(configs[i], sol.k);
        previous = sol.delta_k;
      } catch (const CavityError& e) {
        v.converged = false;
        v.error = std::string(to_string(e.code()));
      }
    }
  }

  ScanResult result;
  for (const auto& axis : req.axes) result.columns.push_back(axis.name);
  // an axis that already is a value column (Rm, q_m, Q_m) is not repeated
  std::vector<std::string> own;
  for (auto& c : value_columns(req.kind))
    if (std::find(result.columns.begin(), result.columns.end(), c) == result.columns.end()) own.push_back(c);
  result.columns.insert(result.columns.end(), own.begin(), own.end());
  result.rows.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<double> row = coords[i];
    for (const auto& c : own) row.push_back(column_value(c, configs[i], values[i]));
    result.rows.push_back(std::move(row));
    result.converged.push_back(values[i].converged);
    result.errors.push_back(values[i].error);
  }

  auto& s = result.summary;
  s.rows = total;
  s.warnings = static_cast<std::size_t>(std::count(result.converged.begin(), result.converged.end(), false));
  auto col_max = [&](std::string_view name) {
    const auto it = std::find(result.columns.begin(), result.columns.end(), name);
    return it == result.columns.end() ? kNaN
                                      : max_abs(result.rows, static_cast<std::size_t>(it - result.columns.begin()));
  };
  s.max_abs_dk_exact = col_max("dk_exact");
  s.max_abs_dk_zeroth = col_max("dk_zeroth");
  s.max_abs_dk_first = col_max("dk_first");
  s.max_abs_g_q = col_max("g_q");
  s.finesse_min = s.finesse_max = kNaN;
  if (const auto it = std::find(result.columns.begin(), result.columns.end(), "finesse_numeric");
      it != result.columns.end()) {
    const auto col = static_cast<std::size_t>(it - result.columns.begin());
    for (const auto& r : result.rows) {
      if (!std::isfinite(r[col])) continue;
      s.finesse_min = std::isnan(s.finesse_min) ? r[col] : std::min(s.finesse_min, r[col]);
      s.finesse_max = std::isnan(s.finesse_max) ? r[col] : std::max(s.finesse_max, r[col]);
    }
  }
  return result;
}

void write_csv(const ScanResult& result, std::ostream& out) {
  for (std::size_t i = 0; i < result.columns.size(); ++i) out << (i ? "," : "") << result.columns[i];
  out << '\n';
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (result.columns[i] == "converged")
        out << static_cast<int>(row[i]);
      else
        out << format_number(row[i]);
    }
    out << '\n';
  }
}

namespace {

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json summary_object(const ScanSummary& s) {
  return {{"rows", s.rows},
          {"warnings", s.warnings},
          {"max_abs_dk_exact", number_or_null(s.max_abs_dk_exact)},
          {"max_abs_dk_zeroth", number_or_null(s.max_abs_dk_zeroth)},
          {"max_abs_dk_first", number_or_null(s.max_abs_dk_first)},
          {"max_abs_g_q", number_or_null(s.max_abs_g_q)},
          {"finesse_min", number_or_null(s.finesse_min)},
          {"finesse_max", number_or_null(s.finesse_max)}};
}

}  // namespace

std::string summary_json(const ScanSummary& summary) { return summary_object(summary).dump(2); }

void write_json(const ScanResult& result, std::ostream& out) {
  nlohmann::json doc;
  doc["summary"] = summary_object(result.summary);
  doc["columns"] = result.columns;
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    auto row = nlohmann::json::array();
    for (double x : result.rows[i]) row.push_back(number_or_null(x));
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  auto errors = nlohmann::json::object();
  for (std::size_t i = 0; i < result.errors.size(); ++i)
    if (!result.errors[i].empty()) errors[std::to_string(i)] = result.errors[i];
  doc["errors"] = std::move(errors);
  out << doc.dump(2) << '\n';
}

}  // namespace cavimode
