#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cantisim/runner.hpp"

using namespace cantisim;

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("CANTISIM_OUT");
  return (env && *env) ? env : "out";
}

bool is_preset(const std::string& name) {
  for (const auto& n : preset_names())
    if (n == name) return true;
  return false;
}

ScenarioConfig load_target(const std::string& target, bool full) {
  if (is_preset(target)) return preset_scenario(target, full);
  if (full)
    throw ConfigError("--full selects the high-resolution variant of a built-in preset "
                      "and cannot be combined with a config file");
  std::ifstream f(target, std::ios::binary);
  if (!f) {
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("cannot open '" + target + "' (not a file, and not one of the presets: " +
                      names + ")");
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

void print_modal_table(const RunResult& r, std::ostream& os) {
  const auto& sol = *r.modal;
  const int n_modes = std::min<int>(r.config.continuum.modes, int(sol.omega_bar.size()));
  os << "n  omega_bar       ratio_to_first  Omega_vs_unloaded\n";
  for (int n = 0; n < n_modes; ++n) {
    char line[128];
    std::snprintf(line, sizeof line, "%-2d %-15.10g %-15.10g %.10g\n", n + 1,
                  sol.omega_bar[n], sol.omega_bar[n] / sol.omega_bar[0],
                  sol.omega_bar[n] / 3.5160153);
    os << line;
  }
}

void print_summary(const RunResult& r, std::ostream& os) {
  if (r.modal) {
    os << "scenario '" << r.config.name << "' (modal solve)\n";
    print_modal_table(r, os);
    if (!r.dir.empty()) os << "artifacts: " << r.dir << "\n";
    return;
  }
  os << "scenario '" << r.config.name << "'\n";
  os << "  omega0 reference = " << format_number(r.omega0_meas)
     << "  (continuum estimate " << format_number(r.omega0_est) << ")\n";
  os << "  fundamental = " << format_number(r.fundamental)
     << "  Omega = " << format_number(r.fundamental / r.omega0_meas) << "\n";
  os << "  dt = " << format_number(r.dt) << ", steps = " << r.steps
     << ", avg sweeps = " << format_number(r.avg_sweeps)
     << ", wall = " << format_number(r.wall_seconds) << " s\n";
  for (const auto& p : r.probes) {
    double max_mag = 0.0;
    for (const auto& pk : p.peaks) max_mag = std::max(max_mag, pk.magnitude);
    os << "  " << p.probe.label << " peaks (Omega, weight):";
    size_t shown = 0;
    for (const auto& pk : p.peaks) {
      if (shown++ == 8) {
        os << " ...";
        break;
      }
      char item[64];
      std::snprintf(item, sizeof item, " %.4g (%.2f)", pk.omega / r.omega0_meas,
                    max_mag > 0 ? pk.magnitude / max_mag : 0.0);
      os << item;
    }
    os << "\n";
  }
  for (const auto& w : r.warnings) os << "  warning: " << w << "\n";
  if (!r.dir.empty()) os << "artifacts: " << r.dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cantisim: discrete elastic cantilever dynamics, spectra, and modal tables"};
  app.set_version_flag("--version", std::string("cantisim ") + kLibraryVersion);
  app.require_subcommand(1);

  // --- run ---
  auto* run_cmd = app.add_subcommand("run", "run one scenario: a config file or a preset name");
  std::string target, out_dir = default_out_dir();
  bool full = false, effective_only = false, quiet = false, no_artifacts = false;
  run_cmd->add_option("target", target, "config file path or preset name")->required();
  run_cmd->add_flag("--full", full, "use the high-resolution variant of a preset");
  run_cmd->add_option("--out", out_dir, "artifact directory (default $CANTISIM_OUT or ./out)");
  run_cmd->add_flag("--print-effective-config", effective_only,
                    "print the resolved config and exit without running");
  run_cmd->add_flag("--no-artifacts", no_artifacts, "compute only; write nothing");
  run_cmd->add_flag("--quiet", quiet, "suppress progress output");

  // --- oracle ---
  auto* oracle_cmd =
      app.add_subcommand("oracle", "print the continuum modal table for a loaded beam");
  double lf = 0.05, ratio = 0.72;
  int basis = 50, modes = 5;
  oracle_cmd->add_option("lf", lf, "loaded fraction of the span, in (0, 1]")->required();
  oracle_cmd->add_option("ratio", ratio, "added mass / beam mass, >= 0")->required();
  oracle_cmd->add_option("basis", basis, "expansion size (default 50)");
  oracle_cmd->add_option("--modes", modes, "modes to print (default 5)");

  // --- suite ---
  auto* suite_cmd = app.add_subcommand("suite", "run every built-in preset");
  std::string suite_kind = "paper";
  std::string suite_out = default_out_dir();
  bool suite_quiet = false;
  suite_cmd->add_option("kind", suite_kind, "paper (desk scale) or full")
      ->check(CLI::IsMember({"paper", "full"}));
  suite_cmd->add_option("--out", suite_out, "artifact directory");
  suite_cmd->add_flag("--quiet", suite_quiet, "suppress progress output");

  // --- presets ---
  auto* list_cmd = app.add_subcommand("presets", "list built-in preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) {
      ScenarioConfig cfg = load_target(target, full);
      if (effective_only) {
        std::cout << cfg.effective_text();
        return 0;
      }
      RunOptions opt;
      opt.out_dir = out_dir;
      opt.write_artifacts = !no_artifacts;
      if (!quiet) opt.progress = &std::cerr;
      const RunResult r = run_scenario(cfg, opt);
      print_summary(r, std::cout);
    } else if (*oracle_cmd) {
      ScenarioConfig cfg;
      cfg.name = "oracle";
      cfg.model = ModelKind::ContinuumOnly;
      cfg.continuum.lf_hat = lf;
      cfg.continuum.mass_ratio = ratio;
      cfg.continuum.basis = basis;
      cfg.continuum.modes = modes;
      cfg.finalize();
      RunOptions opt;
      opt.write_artifacts = false;
      const RunResult r = run_scenario(cfg, opt);
      print_modal_table(r, std::cout);
    } else if (*suite_cmd) {
      const bool suite_full = suite_kind == "full";
      std::map<std::string, double> twin_cache;
      std::vector<RunResult> results;
      for (const auto& name : preset_names()) {
        ScenarioConfig cfg = preset_scenario(name, suite_full);
        RunOptions opt;
        opt.out_dir = suite_out;
        opt.twin_cache = &twin_cache;
        if (!suite_quiet) opt.progress = &std::cerr;
        if (!suite_quiet) std::cerr << "=== " << name << " ===\n";
        results.push_back(run_scenario(cfg, opt));
        print_summary(results.back(), std::cout);
        std::cout << "\n";
      }
      std::cout << "suite complete: " << results.size() << " scenarios under " << suite_out
                << "\n";
    } else if (*list_cmd) {
      for (const auto& n : preset_names()) std::cout << n << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
