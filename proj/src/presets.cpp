#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "cavimode/constants.hpp"
#include "cavimode/error.hpp"
#include "cavimode/scan.hpp"

namespace cavimode {

namespace {

constexpr double kLambda = 1064e-9;

CavityConfig figure_cavity(double membrane_reflectivity, double phase = 0.0) {
  CavityConfig cfg;
  cfg.length_m = 0.01;
  cfg.mirror_reflectivity = 0.9999;
  cfg.wavelength_m = kLambda;
  cfg.membrane = SyntheticMembrane{membrane_reflectivity, phase};
  cfg.com_m = 0.0;
  cfg.separation_m = 10.5 * kLambda;
  return cfg;
}

Axis a_axis(int points = 201) { return Axis{"a", -0.5, 0.5, points, {}}; }

ScanRequest fig3(std::string name, double rm) {
  ScanRequest req;
  req.name = std::move(name);
  req.kind = ScanKind::shift_1d;
  const double phi = kPi / 6.0;
  req.config = figure_cavity(rm, phi);
  req.config.com_m = 100.0 * kLambda;
  const double k0 = empty_mode(nearest_mode(req.config), req.config.length_m);
  req.config.separation_m = 200.0 * kLambda - phi / k0;
  req.axes = {a_axis()};
  return req;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    s = trim(s);
    if (s.empty()) break;
    const auto pos = (sep == ' ') ? s.find_first_of(" \t") : s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

double to_double(std::string_view key, std::string_view text) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw CavityError(ErrorCode::invalid_config, "bad number '" + std::string(text) + "' for " + std::string(key));
  return x;
}

long to_long(std::string_view key, std::string_view text) {
  long x = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw CavityError(ErrorCode::invalid_config, "bad integer '" + std::string(text) + "' for " + std::string(key));
  return x;
}

ShiftMethod parse_method(std::string_view text) {
  for (auto m : {ShiftMethod::exact, ShiftMethod::zeroth, ShiftMethod::first})
    if (to_string(m) == text) return m;
  throw CavityError(ErrorCode::invalid_config, "unknown method '" + std::string(text) + "'");
}

Axis parse_axis(std::string_view text) {
  const auto parts = split(text, ' ');
  if (parts.size() < 3) throw CavityError(ErrorCode::invalid_config, "axis needs: NAME linspace START STOP N | NAME list X...");
  Axis axis;
  axis.name = std::string(parts[0]);
  if (parts[1] == "linspace") {
    if (parts.size() != 5) throw CavityError(ErrorCode::invalid_config, "linspace axis needs START STOP N");
    axis.start = to_double("axis", parts[2]);
    axis.stop = to_double("axis", parts[3]);
    axis.points = static_cast<int>(to_long("axis", parts[4]));
  } else if (parts[1] == "list") {
    for (std::size_t i = 2; i < parts.size(); ++i) axis.list.push_back(to_double("axis", parts[i]));
  } else {
    throw CavityError(ErrorCode::invalid_config, "axis spacing must be linspace or list");
  }
  return axis;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c", "fig4", "strong-coupling-report"};
}

ScanRequest preset(std::string_view name) {
  ScanRequest req;
  req.name = std::string(name);
  if (name == "fig2a") {
    req.kind = ScanKind::shift_2d;
    req.config = figure_cavity(0.8);
    req.axes = {Axis{"b", 0.0, 1.0, 51, {}}, a_axis(51)};
    req.methods = {ShiftMethod::zeroth};
  } else if (name == "fig2b") {
    req.kind = ScanKind::shift_2d;
    req.config = figure_cavity(0.8);
    req.axes = {Axis{"Rm", 0, 0, 0, {0.5, 0.8, 0.95}}, a_axis()};
    req.methods = {ShiftMethod::exact, ShiftMethod::zeroth};
  } else if (name == "fig2c") {
    req.kind = ScanKind::reflectivity_sweep;
    req.config = figure_cavity(0.998);
    req.axes = {Axis{"Tm", 0, 0, 0, {2e-3, 1e-3, 1e-4, 1e-5, 1e-6}}, a_axis()};
    req.methods = {ShiftMethod::exact};
  } else if (name == "fig3a") {
    req = fig3("fig3a", 0.2);
  } else if (name == "fig3b") {
    req = fig3("fig3b", 0.8);
  } else if (name == "fig3c") {
    req = fig3("fig3c", 0.99);
  } else if (name == "fig4") {
    req.kind = ScanKind::finesse_scan;
    req.config = figure_cavity(0.999);
    req.axes = {a_axis()};
    req.methods = {ShiftMethod::exact};
  } else if (name == "strong-coupling-report") {
    req.kind = ScanKind::coupling_report;
    req.config = figure_cavity(0.998);
    req.config.separation_m = 10e-6;
    req.mech.quality_factor = 1e6;
    req.finesse_override = 6e4;
  } else {
    throw CavityError(ErrorCode::unknown_preset, "unknown preset '" + std::string(name) + "'");
  }
  return req;
}

std::string serialize(const ScanRequest& req) {
  std::ostringstream out;
  out << "name = " << req.name << '\n';
  out << "kind = " << to_string(req.kind) << '\n';
  const auto& c = req.config;
  out << "cavity_length_m = " << fmt(c.length_m) << '\n';
  out << "mirror_reflectivity = " << fmt(c.mirror_reflectivity) << '\n';
  out << "wavelength_m = " << fmt(c.wavelength_m) << '\n';
  if (const auto* syn = std::get_if<SyntheticMembrane>(&c.membrane)) {
    out << "membrane_reflectivity = " << fmt(syn->reflectivity) << '\n';
    out << "membrane_phase_rad = " << fmt(syn->phase_rad) << '\n';
  } else {
    const auto& phys = std::get<PhysicalMembrane>(c.membrane);
    out << "membrane_index = " << fmt(phys.index) << '\n';
    out << "membrane_thickness_m = " << fmt(phys.thickness_m) << '\n';
  }
  out << "com_m = " << fmt(c.com_m) << '\n';
  out << "separation_m = " << fmt(c.separation_m) << '\n';
  if (req.mode) out << "mode_index = " << *req.mode << '\n';
  for (const auto& axis : req.axes) {
    out << "axis = " << axis.name;
    if (axis.list.empty()) {
      out << " linspace " << fmt(axis.start) << ' ' << fmt(axis.stop) << ' ' << axis.points;
    } else {
      out << " list";
      for (double x : axis.list) out << ' ' << fmt(x);
    }
    out << '\n';
  }
  out << "methods = ";
  for (std::size_t i = 0; i < req.methods.size(); ++i) out << (i ? "," : "") << to_string(req.methods[i]);
  out << '\n';
  out << "mass_kg = " << fmt(req.mech.mass_kg) << '\n';
  out << "mech_frequency_rad_s = " << fmt(req.mech.frequency_rad_s) << '\n';
  if (req.mech.damping_rad_s) out << "mech_damping_rad_s = " << fmt(*req.mech.damping_rad_s) << '\n';
  if (req.mech.quality_factor) out << "mech_quality_factor = " << fmt(*req.mech.quality_factor) << '\n';
  if (req.finesse_override) out << "finesse_override = " << fmt(*req.finesse_override) << '\n';
  return out.str();
}

ScanRequest parse_request(std::string_view text) {
  ScanRequest req;
  std::optional<SyntheticMembrane> syn;
  std::optional<PhysicalMembrane> phys;
  bool methods_seen = false;
  std::map<std::string, int, std::less<>> seen;

  std::size_t lineno = 0;
  for (auto raw : split(text, '\n')) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw CavityError(ErrorCode::invalid_config, "line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key != "axis" && seen[std::string(key)]++)
      throw CavityError(ErrorCode::invalid_config, "duplicate key '" + std::string(key) + "'");

    if (key == "name") {
      req.name = std::string(value);
    } else if (key == "kind") {
      req.kind = parse_scan_kind(value);
    } else if (key == "cavity_length_m") {
      req.config.length_m = to_double(key, value);
    } else if (key == "mirror_reflectivity") {
      req.config.mirror_reflectivity = to_double(key, value);
    } else if (key == "wavelength_m") {
      req.config.wavelength_m = to_double(key, value);
    } else if (key == "membrane_reflectivity") {
      if (!syn) syn.emplace();
      syn->reflectivity = to_double(key, value);
    } else if (key == "membrane_phase_rad") {
      if (!syn) syn.emplace();
      syn->phase_rad = to_double(key, value);
    } else if (key == "membrane_index") {
      if (!phys) phys.emplace();
      phys->index = to_double(key, value);
    } else if (key == "membrane_thickness_m") {
      if (!phys) phys.emplace();
      phys->thickness_m = to_double(key, value);
    } else if (key == "com_m") {
      req.config.com_m = to_double(key, value);
    } else if (key == "separation_m") {
      req.config.separation_m = to_double(key, value);
    } else if (key == "mode_index") {
      req.mode = to_long(key, value);
    } else if (key == "axis") {
      req.axes.push_back(parse_axis(value));
    } else if (key == "methods") {
      methods_seen = true;
      req.methods.clear();
      for (auto m : split(value, ',')) req.methods.push_back(parse_method(m));
    } else if (key == "mass_kg") {
      req.mech.mass_kg = to_double(key, value);
    } else if (key == "mech_frequency_rad_s") {
      req.mech.frequency_rad_s = to_double(key, value);
    } else if (key == "mech_damping_rad_s") {
      req.mech.damping_rad_s = to_double(key, value);
    } else if (key == "mech_quality_factor") {
      req.mech.quality_factor = to_double(key, value);
    } else if (key == "finesse_override") {
      req.finesse_override = to_double(key, value);
    } else {
      throw CavityError(ErrorCode::invalid_config, "unknown key '" + std::string(key) + "'");
    }
  }
  if (syn && phys) throw CavityError(ErrorCode::invalid_config, "membrane is either synthetic or physical, not both");
  if (syn) req.config.membrane = *syn;
  if (phys) req.config.membrane = *phys;
  if (methods_seen && req.methods.empty()) throw CavityError(ErrorCode::invalid_config, "empty methods list");
  return req;
}

}  // namespace cavimode
