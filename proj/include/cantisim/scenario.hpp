#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cantisim/csv.hpp"
#include "cantisim/errors.hpp"
#include "cantisim/excitation.hpp"
#include "cantisim/lattice.hpp"
#include "cantisim/spectral.hpp"

namespace cantisim {

enum class ModelKind : uint8_t { Uniform, LoadedSimplified, LoadedSphere, ContinuumOnly };

struct ContinuumParams {
  double lf_hat = 0.05;
  double mass_ratio = 0.72;
  int basis = 50;
  int modes = 5;
  int grid = 241;
};

struct SpectralParams {
  int bins = 4096;
  WindowKind window = WindowKind::Hann;
  double threshold = 0.02;
  double max_omega_ratio = 0.0;  // 0 = auto from the sampling rate
};

struct ScenarioConfig {
  std::string name = "run";
  ModelKind model = ModelKind::Uniform;
  double duration_periods = 0.0;  // 0 = model default (60 uniform, 30/15 loaded)
  int samples_per_period = 300;
  LatticeConfig lattice;
  std::optional<LoadSpec> load;
  BoundaryDriver driver;
  bool driver_given = false;
  IntegratorConfig integrator;
  SpectralParams spectral;
  std::vector<ProbeSpec> probes;
  ContinuumParams continuum;
  bool emit_csv = true;
  bool emit_svg = true;

  void finalize();  // fill model-dependent defaults, cross-validate
  std::string effective_text() const;
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
  for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] inline void parse_fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

inline double to_double(const std::string& v, int line) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) parse_fail(line, "trailing junk in number '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    parse_fail(line, "expected a number, got '" + v + "'");
  }
}

inline int to_int(const std::string& v, int line) {
  const double x = to_double(v, line);
  const int i = static_cast<int>(std::lround(x));
  if (std::abs(x - i) > 1e-9) parse_fail(line, "expected an integer, got '" + v + "'");
  return i;
}

inline bool to_switch(const std::string& v, int line) {
  const std::string s = lower(v);
  if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "0" || s == "no") return false;
  parse_fail(line, "expected on/off, got '" + v + "'");
}

inline ProbeSpec parse_probe(const std::string& value, int line) {
  std::istringstream in(value);
  std::string head;
  in >> head;
  head = lower(head);
  const auto axis_of = [&](bool required) {
    std::string ax;
    in >> ax;
    ax = lower(ax);
    if (ax == "x") return ProbeAxis::X;
    if (ax == "z") return ProbeAxis::Z;
    if (!required && ax.empty()) return ProbeAxis::Z;
    parse_fail(line, "probe axis must be x or z");
  };
  ProbeSpec spec;
  if (head == "end") {
    spec.kind = ProbeKind::EndPoint;
    spec.axis = axis_of(true);
  } else if (head == "tip") {
    spec.kind = ProbeKind::AverageRightmostThree;
    spec.axis = axis_of(true);
  } else if (head == "mid") {
    spec.kind = ProbeKind::MidSpanPoint;
    spec.axis = axis_of(true);
  } else if (head == "seg") {
    spec.kind = ProbeKind::AverageAttachmentRegion;
    spec.axis = axis_of(true);
  } else if (head == "beta") {
    spec.kind = ProbeKind::SphereAngle;
  } else if (head == "point") {
    spec.kind = ProbeKind::SinglePoint;
    if (!(in >> spec.point_id)) parse_fail(line, "probe 'point' needs an id");
    spec.axis = axis_of(true);
  } else {
    parse_fail(line, "unknown probe '" + head + "' (end/tip/mid/seg/beta/point)");
  }
  std::string extra;
  if (in >> extra) parse_fail(line, "trailing junk in probe spec");
  return spec;
}

inline std::string probe_text(const ProbeSpec& p) {
  const char* ax = p.axis == ProbeAxis::X ? "x" : "z";
  switch (p.kind) {
    case ProbeKind::EndPoint: return std::string("end ") + ax;
    case ProbeKind::AverageRightmostThree: return std::string("tip ") + ax;
    case ProbeKind::MidSpanPoint: return std::string("mid ") + ax;
    case ProbeKind::AverageAttachmentRegion: return std::string("seg ") + ax;
    case ProbeKind::SphereAngle: return "beta";
    case ProbeKind::SinglePoint:
      return "point " + std::to_string(p.point_id) + " " + ax;
  }
  return "";
}

}  // namespace detail

inline void ScenarioConfig::finalize() {
  using detail::parse_fail;
  if (name.empty()) throw ConfigError("scenario: name must not be empty");

  if (model == ModelKind::ContinuumOnly) {
    if (load) throw ConfigError("scenario: continuum-only model takes no [load]");
    if (driver_given) throw ConfigError("scenario: continuum-only model takes no [driver]");
    if (!probes.empty()) throw ConfigError("scenario: continuum-only model takes no probes");
    if (continuum.lf_hat <= 0.0 || continuum.lf_hat > 1.0)
      throw ConfigError("continuum: lf must be in (0, 1]");
    if (continuum.mass_ratio < 0.0) throw ConfigError("continuum: mass_ratio must be >= 0");
    if (continuum.basis < 8 || continuum.basis > 200)
      throw ConfigError("continuum: basis size must be in [8, 200]");
    if (continuum.modes < 1 || continuum.modes > continuum.basis / 2)
      throw ConfigError("continuum: modes must be in [1, basis/2]");
    if (continuum.grid < 16) throw ConfigError("continuum: grid too coarse");
    return;
  }

  switch (model) {
    case ModelKind::Uniform:
      if (load) throw ConfigError("scenario: uniform model takes no [load]");
      break;
    case ModelKind::LoadedSimplified: {
      if (!load) throw ConfigError("scenario: loaded-simplified model needs a [load]");
      if (load->kind != LoadKind::DistributedMass)
        throw ConfigError("scenario: loaded-simplified model needs kind = distributed");
      break;
    }
    case ModelKind::LoadedSphere: {
      if (!load) throw ConfigError("scenario: loaded-sphere model needs a [load]");
      if (load->kind != LoadKind::RigidSphere)
        throw ConfigError("scenario: loaded-sphere model needs kind = sphere");
      break;
    }
    default: break;
  }

  lattice.load = load;
  lattice.validate();

  if (!driver_given) {
    driver = BoundaryDriver{};
    driver.kind = DriverKind::ZPulse;
    driver.amplitude = lattice.length_l / 100.0;
  }
  driver.validate_static();
  integrator.validate();

  if (duration_periods == 0.0)
    duration_periods = model == ModelKind::Uniform ? 60.0 : 30.0;
  if (duration_periods < 1.0 || duration_periods > 10000.0)
    throw ConfigError("scenario: duration must be in [1, 10000] periods");
  if (samples_per_period < 16 || samples_per_period > 100000)
    throw ConfigError("scenario: samples_per_period must be in [16, 100000]");

  if (spectral.bins < 8) throw ConfigError("spectral: bins must be >= 8");
  if (spectral.threshold <= 0.0 || spectral.threshold >= 1.0)
    throw ConfigError("spectral: threshold must be in (0, 1)");
  if (spectral.max_omega_ratio < 0.0)
    throw ConfigError("spectral: max_omega_ratio must be >= 0");

  if (probes.empty()) probes.push_back({ProbeKind::EndPoint, ProbeAxis::Z, -1});
  for (const auto& p : probes) {
    if (p.kind == ProbeKind::SphereAngle && model != ModelKind::LoadedSphere)
      throw ConfigError("scenario: beta probe needs the loaded-sphere model");
    if (p.kind == ProbeKind::AverageAttachmentRegion && !load)
      throw ConfigError("scenario: seg probe needs a loaded model");
  }
}

inline ScenarioConfig parse_scenario(const std::string& text) {
  using namespace detail;
  ScenarioConfig cfg;
  bool saw_load = false, saw_continuum_key = false, saw_any = false;
  bool load_kind_given = false;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    saw_any = true;

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "unterminated [section]");
      section = lower(trim(line.substr(1, line.size() - 2)));
      static const char* known[] = {"scenario",   "lattice", "load",   "driver",
                                    "integrator", "spectral", "probes", "continuum",
                                    "output"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) parse_fail(line_no, "unknown section [" + section + "]");
      if (section == "load") saw_load = true;
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(line_no, "empty key");
    if (value.empty()) parse_fail(line_no, "empty value for '" + key + "'");
    if (section.empty()) parse_fail(line_no, "key outside any [section]");

    if (section == "scenario") {
      if (key == "name") cfg.name = value;
      else if (key == "model") {
        const std::string m = lower(value);
        if (m == "uniform") cfg.model = ModelKind::Uniform;
        else if (m == "loaded-simplified") cfg.model = ModelKind::LoadedSimplified;
        else if (m == "loaded-sphere") cfg.model = ModelKind::LoadedSphere;
        else if (m == "continuum-only") cfg.model = ModelKind::ContinuumOnly;
        else parse_fail(line_no, "unknown model '" + value + "'");
      } else if (key == "duration") cfg.duration_periods = to_double(value, line_no);
      else if (key == "samples_per_period") cfg.samples_per_period = to_int(value, line_no);
      else parse_fail(line_no, "unknown key '" + key + "' in [scenario]");
    } else if (section == "lattice") {
      if (key == "rows") cfg.lattice.rows = to_int(value, line_no);
      else if (key == "points") cfg.lattice.points_outer_row = to_int(value, line_no);
      else if (key == "length") cfg.lattice.length_l = to_double(value, line_no);
      else if (key == "width") cfg.lattice.width_a = to_double(value, line_no);
      else if (key == "mass") cfg.lattice.point_mass_m0 = to_double(value, line_no);
      else if (key == "stiffness") cfg.lattice.spring_k0 = to_double(value, line_no);
      else if (key == "anchor_columns") cfg.lattice.anchor_columns = to_int(value, line_no);
      else parse_fail(line_no, "unknown key '" + key + "' in [lattice]");
    } else if (section == "load") {
      if (!cfg.load) cfg.load = LoadSpec{};
      if (key == "kind") {
        const std::string k = lower(value);
        if (k == "distributed") cfg.load->kind = LoadKind::DistributedMass;
        else if (k == "sphere") cfg.load->kind = LoadKind::RigidSphere;
        else parse_fail(line_no, "unknown load kind '" + value + "'");
        load_kind_given = true;
      } else if (key == "mass_ratio") cfg.load->mass_ratio = to_double(value, line_no);
      else if (key == "lf") cfg.load->lf_hat = to_double(value, line_no);
      else if (key == "radius") cfg.load->radius_R = to_double(value, line_no);
      else if (key == "inertia") {
        const std::string k = lower(value);
        if (k == "solid") cfg.load->inertia = InertiaModel::Solid;
        else if (k == "shell") cfg.load->inertia = InertiaModel::Shell;
        else parse_fail(line_no, "inertia must be solid or shell");
      } else if (key == "inertia_override")
        cfg.load->inertia_override = to_double(value, line_no);
      else parse_fail(line_no, "unknown key '" + key + "' in [load]");
    } else if (section == "driver") {
      cfg.driver_given = true;
      if (key == "kind") {
        const std::string k = lower(value);
        if (k == "zpulse") cfg.driver.kind = DriverKind::ZPulse;
        else if (k == "xpulse") cfg.driver.kind = DriverKind::XPulse;
        else if (k == "harmonic") cfg.driver.kind = DriverKind::Harmonic;
        else if (k == "hold") cfg.driver.kind = DriverKind::Hold;
        else parse_fail(line_no, "unknown driver kind '" + value + "'");
      } else if (key == "amplitude") cfg.driver.amplitude = to_double(value, line_no);
      else if (key == "tau") cfg.driver.tau = to_double(value, line_no);
      else if (key == "omega") cfg.driver.omega_ex = to_double(value, line_no);
      else if (key == "burst_periods") cfg.driver.burst_periods = to_double(value, line_no);
      else if (key == "ramp") {
        const std::string k = lower(value);
        if (k == "linear") cfg.driver.ramp = RampShape::Linear;
        else if (k == "smoothstep") cfg.driver.ramp = RampShape::SmoothStep;
        else parse_fail(line_no, "ramp must be linear or smoothstep");
      } else parse_fail(line_no, "unknown key '" + key + "' in [driver]");
    } else if (section == "integrator") {
      if (key == "dt") {
        if (lower(value) == "auto") cfg.integrator.dt = 0.0;
        else cfg.integrator.dt = to_double(value, line_no);
      } else if (key == "tol") cfg.integrator.iteration_tol = to_double(value, line_no);
      else if (key == "max_iterations")
        cfg.integrator.max_iterations = to_int(value, line_no);
      else parse_fail(line_no, "unknown key '" + key + "' in [integrator]");
    } else if (section == "spectral") {
      if (key == "bins") cfg.spectral.bins = to_int(value, line_no);
      else if (key == "window") {
        const std::string k = lower(value);
        if (k == "hann") cfg.spectral.window = WindowKind::Hann;
        else if (k == "rect" || k == "rectangular")
          cfg.spectral.window = WindowKind::Rectangular;
        else parse_fail(line_no, "window must be hann or rect");
      } else if (key == "threshold") cfg.spectral.threshold = to_double(value, line_no);
      else if (key == "max_omega_ratio")
        cfg.spectral.max_omega_ratio = to_double(value, line_no);
      else parse_fail(line_no, "unknown key '" + key + "' in [spectral]");
    } else if (section == "probes") {
      if (key == "probe") cfg.probes.push_back(parse_probe(value, line_no));
      else parse_fail(line_no, "unknown key '" + key + "' in [probes]");
    } else if (section == "continuum") {
      saw_continuum_key = true;
      if (key == "lf") cfg.continuum.lf_hat = to_double(value, line_no);
      else if (key == "mass_ratio") cfg.continuum.mass_ratio = to_double(value, line_no);
      else if (key == "basis") cfg.continuum.basis = to_int(value, line_no);
      else if (key == "modes") cfg.continuum.modes = to_int(value, line_no);
      else if (key == "grid") cfg.continuum.grid = to_int(value, line_no);
      else parse_fail(line_no, "unknown key '" + key + "' in [continuum]");
    } else if (section == "output") {
      if (key == "csv") cfg.emit_csv = to_switch(value, line_no);
      else if (key == "svg") cfg.emit_svg = to_switch(value, line_no);
      else parse_fail(line_no, "unknown key '" + key + "' in [output]");
    }
  }
  if (!saw_any)
    throw ConfigError(
        "config is empty; minimum is [scenario] with model = "
        "uniform|loaded-simplified|loaded-sphere|continuum-only plus [lattice] points/length "
        "(or [continuum] lf/mass_ratio)");
  if (saw_load && cfg.load && !load_kind_given) {
    // default the kind from the chosen model
    cfg.load->kind = cfg.model == ModelKind::LoadedSphere ? LoadKind::RigidSphere
                                                          : LoadKind::DistributedMass;
  }
  if (saw_continuum_key && cfg.model != ModelKind::ContinuumOnly)
    throw ConfigError("[continuum] section requires model = continuum-only");
  cfg.finalize();
  return cfg;
}

inline std::string ScenarioConfig::effective_text() const {
  std::ostringstream out;
  const auto num = [](double v) { return format_number(v); };
  out << "[scenario]\n";
  out << "name = " << name << "\n";
  out << "model = ";
  switch (model) {
    case ModelKind::Uniform: out << "uniform"; break;
    case ModelKind::LoadedSimplified: out << "loaded-simplified"; break;
    case ModelKind::LoadedSphere: out << "loaded-sphere"; break;
    case ModelKind::ContinuumOnly: out << "continuum-only"; break;
  }
  out << "\n";
  if (model == ModelKind::ContinuumOnly) {
    out << "\n[continuum]\n";
    out << "lf = " << num(continuum.lf_hat) << "\n";
    out << "mass_ratio = " << num(continuum.mass_ratio) << "\n";
    out << "basis = " << continuum.basis << "\n";
    out << "modes = " << continuum.modes << "\n";
    out << "grid = " << continuum.grid << "\n";
    out << "\n[output]\n";
    out << "csv = " << (emit_csv ? "on" : "off") << "\n";
    out << "svg = " << (emit_svg ? "on" : "off") << "\n";
    return out.str();
  }
  out << "duration = " << num(duration_periods) << "\n";
  out << "samples_per_period = " << samples_per_period << "\n";
  out << "\n[lattice]\n";
  out << "rows = " << lattice.rows << "\n";
  out << "points = " << lattice.points_outer_row << "\n";
  out << "length = " << num(lattice.length_l) << "\n";
  out << "width = " << num(lattice.width_a) << "\n";
  out << "mass = " << num(lattice.point_mass_m0) << "\n";
  out << "stiffness = " << num(lattice.spring_k0) << "\n";
  out << "anchor_columns = " << lattice.anchor_columns << "\n";
  if (load) {
    out << "\n[load]\n";
    out << "kind = " << (load->kind == LoadKind::RigidSphere ? "sphere" : "distributed")
        << "\n";
    out << "mass_ratio = " << num(load->mass_ratio) << "\n";
    out << "lf = " << num(load->lf_hat) << "\n";
    if (load->kind == LoadKind::RigidSphere) {
      out << "radius = " << num(load->radius_R) << "\n";
      out << "inertia = " << (load->inertia == InertiaModel::Shell ? "shell" : "solid")
          << "\n";
      out << "inertia_override = " << num(load->inertia_override) << "\n";
    }
  }
  out << "\n[driver]\n";
  out << "kind = ";
  switch (driver.kind) {
    case DriverKind::ZPulse: out << "zpulse"; break;
    case DriverKind::XPulse: out << "xpulse"; break;
    case DriverKind::Harmonic: out << "harmonic"; break;
    case DriverKind::Hold: out << "hold"; break;
  }
  out << "\n";
  out << "amplitude = " << num(driver.amplitude) << "\n";
  out << "tau = " << num(driver.tau) << "\n";
  out << "omega = " << num(driver.omega_ex) << "\n";
  out << "burst_periods = " << num(driver.burst_periods) << "\n";
  out << "ramp = " << (driver.ramp == RampShape::Linear ? "linear" : "smoothstep") << "\n";
  out << "\n[integrator]\n";
  out << "dt = " << num(integrator.dt) << "\n";
  out << "tol = " << num(integrator.iteration_tol) << "\n";
  out << "max_iterations = " << integrator.max_iterations << "\n";
  out << "\n[spectral]\n";
  out << "bins = " << spectral.bins << "\n";
  out << "window = " << (spectral.window == WindowKind::Hann ? "hann" : "rect") << "\n";
  out << "threshold = " << num(spectral.threshold) << "\n";
  out << "max_omega_ratio = " << num(spectral.max_omega_ratio) << "\n";
  out << "\n[probes]\n";
  for (const auto& p : probes) out << "probe = " << detail::probe_text(p) << "\n";
  out << "\n[output]\n";
  out << "csv = " << (emit_csv ? "on" : "off") << "\n";
  out << "svg = " << (emit_svg ? "on" : "off") << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Built-in presets. Desk scale keeps runs tractable on one core; `full`
// restores the reference resolutions.

inline std::vector<std::string> preset_names() {
  return {"table-eq6", "fig4", "fig5", "fig7", "fig8", "fig9", "fig11"};
}

inline ScenarioConfig preset_scenario(const std::string& name, bool full = false) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.integrator.iteration_tol = 1e-8;
  cfg.spectral.window = WindowKind::Hann;

  const auto equilateral = [](int points) { return double(points - 1) / std::sqrt(3.0); };
  const auto zpulse = [](double amp) {
    BoundaryDriver d;
    d.kind = DriverKind::ZPulse;
    d.amplitude = amp;
    return d;
  };
  const auto xpulse = [](double amp) {
    BoundaryDriver d;
    d.kind = DriverKind::XPulse;
    d.amplitude = amp;
    return d;
  };

  if (name == "table-eq6" || name == "fig4") {
    cfg.model = ModelKind::Uniform;
    cfg.lattice.points_outer_row = full ? 607 : 201;
    cfg.lattice.length_l = full ? 350.0 : equilateral(201);
    cfg.driver = zpulse(5.0);
    cfg.driver_given = true;
    cfg.duration_periods = 60.0;
    cfg.probes = {{ProbeKind::EndPoint, ProbeAxis::Z, -1}};
  } else if (name == "fig5") {
    cfg.model = ModelKind::LoadedSimplified;
    cfg.lattice.points_outer_row = full ? 607 : 201;
    cfg.lattice.length_l = full ? 350.0 : equilateral(201);
    LoadSpec load;
    load.kind = LoadKind::DistributedMass;
    load.mass_ratio = 0.72;
    load.lf_hat = 0.05;
    cfg.load = load;
    cfg.driver = zpulse(cfg.lattice.length_l / 100.0);
    cfg.driver_given = true;
    cfg.duration_periods = 30.0;
    cfg.probes = {{ProbeKind::EndPoint, ProbeAxis::Z, -1}};
  } else if (name == "fig7") {
    cfg.model = ModelKind::LoadedSphere;
    cfg.lattice.points_outer_row = full ? 503 : 201;
    cfg.lattice.length_l = 290.0;
    LoadSpec load;
    load.kind = LoadKind::RigidSphere;
    load.mass_ratio = 0.75;
    load.lf_hat = 0.1525;
    load.radius_R = 60.0;
    load.inertia = InertiaModel::Solid;
    cfg.load = load;
    cfg.driver = xpulse(0.37);
    cfg.driver_given = true;
    cfg.duration_periods = 15.0;
    cfg.probes = {{ProbeKind::AverageRightmostThree, ProbeAxis::Z, -1},
                  {ProbeKind::SphereAngle, ProbeAxis::Z, -1},
                  {ProbeKind::EndPoint, ProbeAxis::X, -1},
                  {ProbeKind::AverageAttachmentRegion, ProbeAxis::Z, -1},
                  {ProbeKind::MidSpanPoint, ProbeAxis::Z, -1}};
  } else if (name == "fig8") {
    cfg.model = ModelKind::LoadedSimplified;
    cfg.lattice.points_outer_row = full ? 503 : 201;
    cfg.lattice.length_l = 290.0;
    LoadSpec load;
    load.kind = LoadKind::DistributedMass;
    load.mass_ratio = 0.75;
    load.lf_hat = 0.1525;
    cfg.load = load;
    cfg.driver.kind = DriverKind::Harmonic;
    cfg.driver.amplitude = cfg.lattice.length_l / 100.0;
    cfg.driver.omega_ex = 0.0;  // resolved to the estimated loaded fundamental
    cfg.driver.burst_periods = 3.0;
    cfg.driver_given = true;
    cfg.duration_periods = 15.0;
    cfg.probes = {{ProbeKind::EndPoint, ProbeAxis::Z, -1},
                  {ProbeKind::AverageRightmostThree, ProbeAxis::Z, -1}};
  } else if (name == "fig9") {
    cfg.model = ModelKind::ContinuumOnly;
    cfg.continuum.lf_hat = 0.05;
    cfg.continuum.mass_ratio = 0.72;
    cfg.continuum.basis = 50;
    cfg.continuum.modes = 5;
  } else if (name == "fig11") {
    cfg.model = ModelKind::LoadedSphere;
    cfg.lattice.points_outer_row = full ? 503 : 201;
    cfg.lattice.length_l = 290.0;
    LoadSpec load;
    load.kind = LoadKind::RigidSphere;
    load.mass_ratio = 0.75;
    load.lf_hat = 0.10893;
    load.radius_R = 60.0;
    load.inertia = InertiaModel::Shell;
    cfg.load = load;
    cfg.driver = xpulse(0.37);
    cfg.driver_given = true;
    cfg.duration_periods = 15.0;
    cfg.probes = {{ProbeKind::SphereAngle, ProbeAxis::Z, -1},
                  {ProbeKind::EndPoint, ProbeAxis::Z, -1},
                  {ProbeKind::MidSpanPoint, ProbeAxis::Z, -1},
                  {ProbeKind::AverageAttachmentRegion, ProbeAxis::Z, -1}};
  } else {
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (available: " + names + ")");
  }
  cfg.finalize();
  return cfg;
}

}  // namespace cantisim
