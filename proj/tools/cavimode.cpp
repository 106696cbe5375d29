#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cavimode/coupling.hpp"
#include "cavimode/error.hpp"
#include "cavimode/finesse.hpp"
#include "cavimode/scan.hpp"

using namespace cavimode;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

ScanRequest load_request(const std::string& preset_name, const std::string& config_path) {
  if (!preset_name.empty()) return preset(preset_name);
  std::ifstream in(config_path);
  if (!in) throw CavityError(ErrorCode::io, "cannot read " + config_path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_request(text.str());
}

std::vector<ShiftMethod> parse_methods(const std::string& text) {
  // reuse the config parser so both accept the same spelling
  return parse_request("methods = " + text).methods;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CavityError(ErrorCode::io, "cannot write " + path);
  out << content;
  if (!out) throw CavityError(ErrorCode::io, "write failed for " + path);
}

int run_scan_command(const std::string& preset_name, const std::string& config_path, const std::string& methods,
                     std::optional<long> mode, const std::string& out_path, const std::string& format, int threads) {
  auto req = load_request(preset_name, config_path);
  if (!methods.empty()) req.methods = parse_methods(methods);
  if (mode) req.mode = mode;

  const auto result = run_scan(req, Execution::parallel, threads);

  std::ostringstream body;
  if (format == "json")
    write_json(result, body);
  else
    write_csv(result, body);

  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    write_file(out_path, body.str());
    if (format == "csv") write_file(out_path + ".summary.json", summary_json(result.summary) + "\n");
  }
  if (result.summary.warnings > 0) {
    std::cerr << "warning: " << result.summary.warnings << " of " << result.summary.rows
              << " grid points failed\n";
    for (std::size_t i = 0; i < result.errors.size(); ++i)
      if (!result.errors[i].empty()) std::cerr << "  row " << i << ": " << result.errors[i] << '\n';
  }
  return 0;
}

int run_report(const std::string& preset_name, const std::string& config_path) {
  const auto req = load_request(preset_name, config_path);
  const long m = scan_mode(req);
  validate(req.config);

  const auto rep = coupling_report(req.config, m, req.mech);
  const double finesse = req.finesse_override ? *req.finesse_override : finesse_numeric(req.config, m).finesse_numeric;
  std::optional<double> g_peak;
  try {
    const auto peak = relative_slope_peak(req.config, m);
    auto at_peak = req.config;
    at_peak.separation_m = peak.separation_m;
    g_peak = coupling_numeric(at_peak, m, req.mech, Coordinate::relative);
  } catch (const CavityError& e) {
    std::cerr << "warning: slope peak not found: " << e.what() << '\n';
  }
  const auto fig = strong_coupling_figures(req.config, m, req.mech, finesse, g_peak.value_or(rep.g_q));

  auto line = [](const char* label, double value, const char* unit = "") {
    std::printf("%-28s %.6g %s\n", label, value, unit);
  };
  std::printf("mode m                       %ld\n", m);
  line("omega0", rep.omega0, "rad/s");
  line("x_zpm", rep.x_zpm, "m");
  line("g_q (configured q)", rep.g_q, "rad/s");
  if (g_peak) {
    line("g_q (steepest q)", *g_peak, "rad/s");
    line("|g_q|/g_q_max at peak", std::abs(*g_peak) / rep.g_q_max);
  }
  line("g_Q", rep.g_com, "rad/s");
  line("g_sing", rep.g_single, "rad/s");
  line("g_q_max", rep.g_q_max, "rad/s");
  line("L/2q", fig.double_over_single);
  line("F_cav", fig.finesse);
  line("kappa", fig.kappa, "rad/s");
  line(g_peak ? "g/kappa (steepest q)" : "g/kappa", fig.g_over_kappa);
  line("g_q_max/kappa", fig.g_max_over_kappa);
  if (std::isnan(fig.cooperativity))
    std::printf("%-28s n/a (no mechanical damping given)\n", "C0");
  else
    line("C0", fig.cooperativity);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-membrane cavity mode solver and parameter scans"};
  app.require_subcommand(1);

  std::string preset_name, config_path, methods, out_path, format = "csv";
  int threads = 0;
  long mode_flag = 0;

  auto* scan = app.add_subcommand("scan", "Run a parameter sweep");
  auto* src = scan->add_option_group("source");
  src->add_option("--preset", preset_name, "Named preset")->check(CLI::IsMember(preset_names()));
  src->add_option("--config", config_path, "Config file (key = value)");
  src->require_option(1);
  scan->add_option("--method", methods, "Comma separated: exact,zeroth,first");
  auto* mode_opt = scan->add_option("--mode", mode_flag, "Longitudinal mode index m");
  scan->add_option("--out", out_path, "Output file (stdout when omitted)");
  scan->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--threads", threads, "Worker threads (0 = all available)")->check(CLI::NonNegativeNumber);

  auto* report = app.add_subcommand("report", "Figures of merit");
  auto* strong = report->add_subcommand("strong-coupling", "Coupling, finesse and cooperativity");
  report->require_subcommand(1);
  auto* rsrc = strong->add_option_group("source");
  rsrc->add_option("--preset", preset_name, "Named preset")->check(CLI::IsMember(preset_names()));
  rsrc->add_option("--config", config_path, "Config file (key = value)");
  rsrc->require_option(1);

  std::string dump_name;
  auto* dump = app.add_subcommand("preset", "Print a preset as config text");
  dump->add_option("name", dump_name, "Preset name")->required()->check(CLI::IsMember(preset_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*scan) {
      std::optional<long> mode;
      if (*mode_opt) mode = mode_flag;
      return run_scan_command(preset_name, config_path, methods, mode, out_path, format, threads);
    }
    if (*strong) return run_report(preset_name, config_path);
    if (*dump) {
      std::cout << serialize(preset(dump_name));
      return 0;
    }
  } catch (const CavityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::io ? kExitIo : kExitInvalid;
  }
  return 0;
}
