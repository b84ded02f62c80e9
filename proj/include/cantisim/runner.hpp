#pragma once

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cantisim/continuum.hpp"
#include "cantisim/csv.hpp"
#include "cantisim/dynamics.hpp"
#include "cantisim/rigid_body.hpp"
#include "cantisim/scenario.hpp"
#include "cantisim/spectral.hpp"
#include "cantisim/svg.hpp"

namespace cantisim {

inline constexpr const char* kLibraryVersion = "1.0.0";

struct RunOptions {
  std::string out_dir = "out";
  bool write_artifacts = true;
  std::ostream* progress = nullptr;
  std::map<std::string, double>* twin_cache = nullptr;  // geometry key -> omega0
};

struct EnergySample {
  double time, kinetic, elastic, rigid_kinetic, total, boundary_work;
};

struct SnapshotRow {
  double time = 0.0;
  std::vector<Vec2> middle_row;  // (x, z) of the axis row, left to right
};

struct ProbeResult {
  ResolvedProbe probe;
  std::vector<double> values;
  Spectrum spectrum;
  std::vector<Peak> peaks;
};

struct RunResult {
  ScenarioConfig config;
  std::string dir;
  std::vector<std::string> warnings;
  // continuum-only results
  std::optional<ModalSolution> modal;
  // lattice results
  double omega0_est = 0.0;   // continuum estimate of the unloaded fundamental
  double omega1_est = 0.0;   // estimated system fundamental (loaded ratio applied)
  double omega0_meas = 0.0;  // measured normalization reference (twin or self)
  double fundamental = 0.0;  // measured system fundamental
  double dt = 0.0, t_calc = 0.0;
  long steps = 0;
  double avg_sweeps = 0.0;
  double wall_seconds = 0.0;
  std::vector<double> times;
  std::vector<ProbeResult> probes;
  std::vector<EnergySample> energy;
  std::vector<SnapshotRow> snapshots;

  const ProbeResult* probe_by_label(const std::string& label) const {
    for (const auto& p : probes)
      if (p.probe.label == label) return &p;
    return nullptr;
  }
};

// Continuum estimate of the unloaded discrete fundamental: bending stiffness
// of the truss cross-section (k h sum z_r^2) and line density N m0 / l.
inline double estimate_omega0(const LatticeConfig& cfg) {
  const double a = cfg.width_a;
  double sum_z2 = 0.0;
  if (cfg.rows == 3) sum_z2 = a * a / 2.0;
  else sum_z2 = a * a * 5.0 / 8.0;
  const double ei = cfg.spring_k0 * cfg.h() * sum_z2;
  int n_points = 3 * cfg.points_outer_row + 1;
  if (cfg.rows == 5) n_points = 5 * cfg.points_outer_row + 2;
  const double mu = n_points * cfg.point_mass_m0 / cfg.length_l;
  return 3.5160153 * std::sqrt(ei / mu) / (cfg.length_l * cfg.length_l);
}

// Loaded-over-unloaded fundamental ratio from the continuum solver; used only
// to size durations, sampling, and scan bands (never as a reported result).
inline double loaded_ratio_estimate(double lf_hat, double mass_ratio) {
  if (mass_ratio <= 0.0) return 1.0;
  const BeamBasis basis = BeamBasis::build(40);
  DensityProfile profile{lf_hat, mass_ratio};
  const auto alpha = alpha_matrix(basis, profile);
  const auto sol = solve_modes(alpha, basis, profile);
  return sol.omega_bar[0] / 3.5160153;
}

namespace detail {

struct SimJob {
  const Lattice* lat = nullptr;
  const RigidSphere* sph = nullptr;
  BoundaryDriver driver;
  IntegratorConfig icfg;
  double t_end = 0.0;
  double sample_dt = 0.0;
  std::vector<ResolvedProbe> probes;
  std::vector<double> snapshot_times;
  std::ostream* progress = nullptr;
  std::string tag;
};

struct SimOutput {
  std::vector<double> times;
  std::vector<std::vector<double>> probe_values;
  std::vector<EnergySample> energy;
  std::vector<SnapshotRow> snapshots;
  long steps = 0;
  double avg_sweeps = 0.0;
  double wall_seconds = 0.0;
  double dt = 0.0;
};

inline SnapshotRow middle_row_snapshot(const Lattice& lat, const Dynamics& dyn) {
  SnapshotRow row;
  row.time = dyn.time();
  for (const auto& p : lat.points)
    if (std::abs(p.rest.z) < 1e-12) row.middle_row.push_back(dyn.position(p.id));
  return row;
}

inline SimOutput run_sim(const SimJob& job) {
  const auto t_start = std::chrono::steady_clock::now();
  Dynamics dyn(*job.lat, job.sph);

  IntegratorConfig icfg = job.icfg;
  const double dt_raw = icfg.dt > 0.0 ? icfg.dt : dyn.suggest_dt();
  const long per_sample = std::max(1L, long(std::ceil(job.sample_dt / dt_raw)));
  icfg.dt = job.sample_dt / double(per_sample);  // samples land exactly on steps

  const long n_samples = long(std::ceil(job.t_end / job.sample_dt));
  const long n_steps = n_samples * per_sample;

  SimOutput out;
  out.dt = icfg.dt;
  out.probe_values.resize(job.probes.size());
  const auto sample_now = [&] {
    out.times.push_back(dyn.time());
    for (size_t p = 0; p < job.probes.size(); ++p)
      out.probe_values[p].push_back(job.probes[p].value(dyn));
    const EnergyBreakdown e = dyn.energy();
    out.energy.push_back({dyn.time(), e.kinetic, e.elastic, e.rigid_kinetic, e.total(),
                          dyn.boundary_work()});
  };
  sample_now();

  size_t next_snap = 0;
  long sweep_total = 0;
  const long progress_every = std::max(1L, n_steps / 20);
  for (long s = 1; s <= n_steps; ++s) {
    sweep_total += dyn.step(icfg, job.driver);
    while (next_snap < job.snapshot_times.size() &&
           dyn.time() >= job.snapshot_times[next_snap] - 1e-12) {
      out.snapshots.push_back(middle_row_snapshot(*job.lat, dyn));
      ++next_snap;
    }
    if (s % per_sample == 0) sample_now();
    if (job.progress && s % progress_every == 0) {
      (*job.progress) << "[" << job.tag << "] " << (100 * s / n_steps) << "% ("
                      << s << "/" << n_steps << " steps, avg sweeps "
                      << format_number(double(sweep_total) / double(s)) << ")\n";
      job.progress->flush();
    }
  }
  out.steps = n_steps;
  out.avg_sweeps = n_steps > 0 ? double(sweep_total) / double(n_steps) : 0.0;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

inline std::string twin_key(const LatticeConfig& cfg) {
  std::ostringstream k;
  k << cfg.rows << '|' << cfg.points_outer_row << '|' << format_number(cfg.length_l)
    << '|' << format_number(cfg.width_a) << '|' << format_number(cfg.point_mass_m0)
    << '|' << format_number(cfg.spring_k0) << '|' << cfg.anchor_columns;
  return k.str();
}

// Strongest spectral peak of a record inside [lo, hi].
inline double strongest_tone(const std::vector<double>& t, const std::vector<double>& s,
                             double lo, double hi, WindowKind window) {
  SpectrumConfig cfg;
  cfg.omega_min = lo;
  cfg.omega_max = hi;
  cfg.bins = 2048;
  cfg.window = window;
  const Spectrum spec = fourier_magnitude(t, s, cfg);
  const auto peaks = find_peaks(spec, 0.02, 3.5 * spec.rayleigh_width());
  if (peaks.empty())
    throw NumericalError("no spectral peak found in the fundamental scan band");
  const Peak* best = &peaks[0];
  for (const auto& p : peaks)
    if (p.magnitude > best->magnitude) best = &p;
  return best->omega;
}

// Unloaded twin of a lattice geometry: z-pulse, 12 estimated periods, end
// probe, fine fundamental scan. Returns the measured unloaded fundamental.
inline double measure_twin_fundamental(const LatticeConfig& base,
                                       const IntegratorConfig& icfg,
                                       const RunOptions& opt) {
  const std::string key = twin_key(base);
  if (opt.twin_cache) {
    const auto it = opt.twin_cache->find(key);
    if (it != opt.twin_cache->end()) return it->second;
  }
  LatticeConfig cfg = base;
  cfg.load.reset();
  const Lattice lat = build_lattice(cfg);
  const double w0_est = estimate_omega0(cfg);
  const double period = 2.0 * M_PI / w0_est;

  SimJob job;
  job.lat = &lat;
  job.driver.kind = DriverKind::ZPulse;
  job.driver.amplitude = cfg.length_l / 100.0;
  job.driver.tau = 0.002 * period;
  job.icfg = icfg;
  job.icfg.dt = 0.0;
  job.t_end = 12.0 * period;
  job.sample_dt = period / 300.0;
  job.probes = {resolve_probe(lat, {ProbeKind::EndPoint, ProbeAxis::Z, -1})};
  job.progress = opt.progress;
  job.tag = "twin";
  const SimOutput sim = run_sim(job);
  const double w0 = strongest_tone(sim.times, sim.probe_values[0], 0.3 * w0_est,
                                   2.0 * w0_est, WindowKind::Hann);
  if (opt.twin_cache) (*opt.twin_cache)[key] = w0;
  return w0;
}

inline void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  const auto probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory is not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Artifact writers

namespace detail {

inline void write_lattice_artifacts(const RunResult& r, const Lattice& lat,
                                    const std::filesystem::path& dir) {
  const auto& cfg = r.config;
  if (cfg.emit_csv) {
    {
      std::vector<std::string> head{"time", "time_over_T0"};
      for (const auto& p : r.probes) head.push_back(p.probe.label);
      CsvWriter w((dir / "trace.csv").string(), head);
      const double T0 = 2.0 * M_PI / r.omega0_meas;
      for (size_t k = 0; k < r.times.size(); ++k) {
        std::vector<double> row{r.times[k], r.times[k] / T0};
        for (const auto& p : r.probes) row.push_back(p.values[k]);
        w.row(row);
      }
    }
    {
      CsvWriter w((dir / "energy.csv").string(),
                  {"time", "kinetic", "elastic", "rigid_kinetic", "total",
                   "boundary_work"});
      for (const auto& e : r.energy)
        w.row({e.time, e.kinetic, e.elastic, e.rigid_kinetic, e.total, e.boundary_work});
    }
    for (const auto& p : r.probes) {
      double max_mag = 0.0;
      for (double m : p.spectrum.magnitude) max_mag = std::max(max_mag, m);
      const double inv = max_mag > 0.0 ? 1.0 / max_mag : 0.0;
      CsvWriter w((dir / ("spectrum_" + p.probe.label + ".csv")).string(),
                  {"omega", "Omega", "magnitude", "magnitude_norm"});
      for (size_t i = 0; i < p.spectrum.omega.size(); ++i)
        w.row({p.spectrum.omega[i], p.spectrum.omega[i] / r.omega0_meas,
               p.spectrum.magnitude[i], p.spectrum.magnitude[i] * inv});
      double max_peak = 0.0;
      for (const auto& pk : p.peaks) max_peak = std::max(max_peak, pk.magnitude);
      const double pinv = max_peak > 0.0 ? 1.0 / max_peak : 0.0;
      CsvWriter pw((dir / ("peaks_" + p.probe.label + ".csv")).string(),
                   {"n", "omega", "Omega", "magnitude", "magnitude_norm"});
      for (size_t i = 0; i < p.peaks.size(); ++i)
        pw.row({double(i + 1), p.peaks[i].omega, p.peaks[i].omega / r.omega0_meas,
                p.peaks[i].magnitude, p.peaks[i].magnitude * pinv});
    }
    {
      CsvWriter w((dir / "omegas.csv").string(),
                  {"probe", "n", "omega", "Omega", "magnitude_norm"});
      for (const auto& p : r.probes) {
        double max_peak = 0.0;
        for (const auto& pk : p.peaks) max_peak = std::max(max_peak, pk.magnitude);
        const double pinv = max_peak > 0.0 ? 1.0 / max_peak : 0.0;
        for (size_t i = 0; i < p.peaks.size(); ++i)
          w.row(p.probe.label,
                {double(i + 1), p.peaks[i].omega, p.peaks[i].omega / r.omega0_meas,
                 p.peaks[i].magnitude * pinv});
      }
    }
    if (!r.snapshots.empty()) {
      CsvWriter w((dir / "snapshots.csv").string(), {"snapshot", "time", "x", "z"});
      for (size_t si = 0; si < r.snapshots.size(); ++si)
        for (const auto& pt : r.snapshots[si].middle_row)
          w.row({double(si + 1), r.snapshots[si].time, pt.x, pt.z});
    }
    {
      std::ofstream f(dir / "lattice.txt", std::ios::binary);
      int free_n = 0, anch_n = 0, att_n = 0;
      for (const auto& p : lat.points) {
        if (p.kind == PointKind::Free) ++free_n;
        else if (p.kind == PointKind::Anchored) ++anch_n;
        else ++att_n;
      }
      f << "points = " << lat.points.size() << "\n";
      f << "springs = " << lat.springs.size() << "\n";
      f << "free = " << free_n << "\n";
      f << "anchored = " << anch_n << "\n";
      f << "attached = " << att_n << "\n";
      f << "segment_points = " << lat.n_f << "\n";
      f << "spacing_h = " << format_number(lat.h()) << "\n";
      f << "total_mass = " << format_number(lat.total_mass()) << "\n";
    }
  }
  if (cfg.emit_svg) {
    {
      SvgPlot plot;
      plot.title = cfg.name + ": probe traces";
      plot.xlabel = "t / T0";
      plot.ylabel = "displacement";
      const double T0 = 2.0 * M_PI / r.omega0_meas;
      for (const auto& p : r.probes) {
        SvgSeries s;
        s.label = p.probe.label;
        s.y = p.values;
        s.x.reserve(r.times.size());
        for (double t : r.times) s.x.push_back(t / T0);
        plot.series.push_back(std::move(s));
      }
      write_svg_plot((dir / "trace.svg").string(), plot);
    }
    for (const auto& p : r.probes) {
      SvgPlot plot;
      plot.title = cfg.name + ": spectrum of " + p.probe.label;
      plot.xlabel = "Omega = omega / omega0";
      plot.ylabel = "|A| (normalized)";
      SvgSeries s;
      s.label = p.probe.label;
      double max_mag = 0.0;
      for (double m : p.spectrum.magnitude) max_mag = std::max(max_mag, m);
      const double inv = max_mag > 0.0 ? 1.0 / max_mag : 0.0;
      for (size_t i = 0; i < p.spectrum.omega.size(); ++i) {
        s.x.push_back(p.spectrum.omega[i] / r.omega0_meas);
        s.y.push_back(p.spectrum.magnitude[i] * inv);
      }
      plot.series.push_back(std::move(s));
      for (const auto& pk : p.peaks) {
        char label[48];
        std::snprintf(label, sizeof label, "Omega=%.4g", pk.omega / r.omega0_meas);
        plot.markers.push_back({pk.omega / r.omega0_meas, label});
      }
      write_svg_plot((dir / ("spectrum_" + p.probe.label + ".svg")).string(), plot);
    }
    if (!r.snapshots.empty()) {
      SvgPlot plot;
      plot.title = cfg.name + ": beam shapes";
      plot.xlabel = "x";
      plot.ylabel = "z";
      for (const auto& snap : r.snapshots) {
        SvgSeries s;
        char label[48];
        std::snprintf(label, sizeof label, "t=%.6g", snap.time);
        s.label = label;
        for (const auto& pt : snap.middle_row) {
          s.x.push_back(pt.x);
          s.y.push_back(pt.z);
        }
        plot.series.push_back(std::move(s));
      }
      write_svg_plot((dir / "snapshots.svg").string(), plot);
    }
  }
}

inline void write_continuum_artifacts(const RunResult& r,
                                      const BeamBasis& basis,
                                      const std::filesystem::path& dir) {
  const auto& sol = *r.modal;
  const auto& cp = r.config.continuum;
  const int n_modes = std::min<int>(cp.modes, int(sol.omega_bar.size()));
  if (r.config.emit_csv) {
    {
      CsvWriter w((dir / "eigs.csv").string(),
                  {"n", "omega_bar", "ratio_to_first", "Omega_vs_unloaded"});
      for (int n = 0; n < n_modes; ++n)
        w.row({double(n + 1), sol.omega_bar[n], sol.omega_bar[n] / sol.omega_bar[0],
               sol.omega_bar[n] / 3.5160153});
    }
    {
      std::vector<std::string> head{"xhat"};
      for (int n = 0; n < n_modes; ++n) head.push_back("f" + std::to_string(n + 1));
      CsvWriter w((dir / "modes.csv").string(), head);
      for (int g = 0; g < cp.grid; ++g) {
        const double x = double(g) / double(cp.grid - 1);
        std::vector<double> row{x};
        for (int n = 0; n < n_modes; ++n)
          row.push_back(eval_mode_shape(sol, basis, n, x));
        w.row(row);
      }
    }
  }
  if (r.config.emit_svg) {
    SvgPlot plot;
    plot.title = r.config.name + ": mode shapes";
    plot.xlabel = "x / l";
    plot.ylabel = "f_n";
    for (int n = 0; n < n_modes; ++n) {
      SvgSeries s;
      s.label = "f" + std::to_string(n + 1);
      for (int g = 0; g < cp.grid; ++g) {
        const double x = double(g) / double(cp.grid - 1);
        s.x.push_back(x);
        s.y.push_back(eval_mode_shape(sol, basis, n, x));
      }
      plot.series.push_back(std::move(s));
    }
    write_svg_plot((dir / "modes.svg").string(), plot);
  }
}

inline void write_manifest(const RunResult& r, const std::filesystem::path& dir) {
  std::ofstream f(dir / "manifest.txt", std::ios::binary);
  const std::string effective = r.config.effective_text();
  f << "artifact = " << r.config.name << "\n";
  f << "config_hash = " << hex64(fnv1a64(effective)) << "\n";
  f << "library = cantisim " << kLibraryVersion << "\n";
  f << "compiler = " << __VERSION__ << "\n";
  f << "determinism = seedless pipeline; reruns of this configuration produce "
       "byte-identical csv and svg artifacts\n";
  if (!r.modal) {
    f << "omega0_estimate = " << format_number(r.omega0_est) << "\n";
    f << "omega0_measured = " << format_number(r.omega0_meas) << "\n";
    f << "fundamental_measured = " << format_number(r.fundamental) << "\n";
    f << "fundamental_Omega = " << format_number(r.fundamental / r.omega0_meas) << "\n";
    f << "dt = " << format_number(r.dt) << "\n";
    f << "steps = " << r.steps << "\n";
    f << "avg_sweeps = " << format_number(r.avg_sweeps) << "\n";
    f << "t_calc = " << format_number(r.t_calc) << "\n";
  }
  f << "wall_seconds_informative = " << format_number(r.wall_seconds) << "\n";
  for (const auto& w : r.warnings) f << "warning = " << w << "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline RunResult run_scenario(const ScenarioConfig& config, const RunOptions& opt = {}) {
  const auto t_start = std::chrono::steady_clock::now();
  RunResult r;
  r.config = config;

  std::filesystem::path dir;
  if (opt.write_artifacts) {
    dir = std::filesystem::path(opt.out_dir) / config.name;
    detail::ensure_writable_dir(dir);
    r.dir = dir.string();
  }

  if (config.model == ModelKind::ContinuumOnly) {
    const auto& cp = config.continuum;
    const BeamBasis basis = BeamBasis::build(cp.basis);
    DensityProfile profile{cp.lf_hat, cp.mass_ratio};
    profile.validate();
    const auto alpha = alpha_matrix(basis, profile);
    r.modal = solve_modes(alpha, basis, profile);
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (opt.write_artifacts) {
      detail::write_continuum_artifacts(r, basis, dir);
      std::ofstream cf(dir / "config.txt", std::ios::binary);
      cf << config.effective_text();
      detail::write_manifest(r, dir);
    }
    return r;
  }

  // ---- lattice models ----
  const Lattice lat = build_lattice(config.lattice);
  r.warnings = lat.warnings;
  std::optional<RigidSphere> sphere;
  if (config.model == ModelKind::LoadedSphere)
    sphere.emplace(init_sphere(lat, *config.lattice.load, &r.warnings));

  r.omega0_est = estimate_omega0(config.lattice);
  const double ratio_est =
      config.load ? loaded_ratio_estimate(config.load->lf_hat, config.load->mass_ratio)
                  : 1.0;
  r.omega1_est = ratio_est * r.omega0_est;
  const double T0_est = 2.0 * M_PI / r.omega0_est;
  const double T1_est = 2.0 * M_PI / r.omega1_est;

  // normalization reference: unloaded twin for loaded runs, self for uniform
  if (config.load)
    r.omega0_meas = detail::measure_twin_fundamental(config.lattice, config.integrator, opt);

  // resolve driver's auto fields
  BoundaryDriver driver = config.driver;
  if ((driver.kind == DriverKind::ZPulse || driver.kind == DriverKind::XPulse)) {
    if (driver.tau == 0.0) driver.tau = 0.002 * T1_est;
    else if (driver.tau > 0.05 * T1_est)
      r.warnings.push_back("driver: rise time exceeds 5% of the fundamental period; "
                           "high modes will be under-excited");
  }
  if (driver.kind == DriverKind::Harmonic) {
    if (driver.omega_ex == 0.0)
      driver.omega_ex = config.load ? ratio_est * r.omega0_meas : r.omega0_est;
    if (driver.tau == 0.0) driver.tau = 2.0 * M_PI / driver.omega_ex;
  }
  driver.validate();

  detail::SimJob job;
  job.lat = &lat;
  job.sph = sphere ? &*sphere : nullptr;
  job.driver = driver;
  job.icfg = config.integrator;
  job.t_end = config.duration_periods * T1_est;
  job.sample_dt = T1_est / double(config.samples_per_period);
  for (const auto& spec : config.probes) job.probes.push_back(resolve_probe(lat, spec));
  job.snapshot_times = {5.0 * T0_est / 240.0, 8.0 * T0_est / 240.0,
                        15.0 * T0_est / 240.0, 22.0 * T0_est / 240.0};
  job.progress = opt.progress;
  job.tag = config.name;

  detail::SimOutput sim = detail::run_sim(job);
  r.times = std::move(sim.times);
  r.energy = std::move(sim.energy);
  r.snapshots = std::move(sim.snapshots);
  r.dt = sim.dt;
  r.steps = sim.steps;
  r.avg_sweeps = sim.avg_sweeps;
  r.t_calc = r.times.back() - r.times.front();

  // fundamental scan record: first z displacement probe, else first probe
  size_t scan_idx = 0;
  for (size_t i = 0; i < job.probes.size(); ++i)
    if (!job.probes[i].sphere_angle && job.probes[i].axis == ProbeAxis::Z) {
      scan_idx = i;
      break;
    }
  const double w1_band = config.load ? ratio_est * r.omega0_meas : r.omega0_est;
  r.fundamental = detail::strongest_tone(r.times, sim.probe_values[scan_idx],
                                         0.25 * w1_band, 2.5 * w1_band,
                                         config.spectral.window);
  if (!config.load) r.omega0_meas = r.fundamental;  // uniform runs self-normalize

  // full band spectra per probe
  const double nyquist = M_PI / job.sample_dt;
  double omega_hi = config.spectral.max_omega_ratio > 0.0
                        ? config.spectral.max_omega_ratio * r.omega0_meas
                        : std::min(0.8 * nyquist, 120.0 * r.omega0_meas);
  omega_hi = std::min(omega_hi, 0.95 * nyquist);
  for (size_t i = 0; i < job.probes.size(); ++i) {
    ProbeResult pr;
    pr.probe = job.probes[i];
    pr.values = std::move(sim.probe_values[i]);
    SpectrumConfig scfg;
    scfg.omega_min = 0.0;
    scfg.omega_max = omega_hi;
    scfg.bins = config.spectral.bins;
    scfg.window = config.spectral.window;
    pr.spectrum = fourier_magnitude(r.times, pr.values, scfg);
    pr.peaks = find_peaks(pr.spectrum, config.spectral.threshold,
                          3.5 * pr.spectrum.rayleigh_width());
    r.probes.push_back(std::move(pr));
  }

  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  if (opt.write_artifacts) {
    detail::write_lattice_artifacts(r, lat, dir);
    std::ofstream cf(dir / "config.txt", std::ios::binary);
    cf << config.effective_text();
    if (config.emit_csv && config.load) {
      CsvWriter w((dir / "twin.csv").string(), {"omega0_measured", "omega0_estimate"});
      w.row({r.omega0_meas, r.omega0_est});
    }
    detail::write_manifest(r, dir);
  }
  return r;
}

}  // namespace cantisim
