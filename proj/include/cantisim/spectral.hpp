#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cantisim/dynamics.hpp"
#include "cantisim/errors.hpp"
#include "cantisim/lattice.hpp"

namespace cantisim {

enum class WindowKind : uint8_t { Rectangular, Hann };

struct SpectrumConfig {
  double omega_min = 0.0;
  double omega_max = 0.0;
  int bins = 2048;
  WindowKind window = WindowKind::Rectangular;

  void validate() const {
    if (!(omega_min >= 0.0)) throw ConfigError("spectrum: omega_min must be >= 0");
    if (!(omega_max > omega_min)) throw ConfigError("spectrum: need omega_max > omega_min");
    if (bins < 8) throw ConfigError("spectrum: need at least 8 bins");
  }
};

struct Spectrum {
  std::vector<double> omega;
  std::vector<double> magnitude;
  double time_span = 0.0;  // duration of the analyzed record

  // natural frequency resolution of the record
  double rayleigh_width() const { return 2.0 * M_PI / time_span; }
};

// |sum_k w_k (s_k - mean) exp(i omega t_k) dt| on a uniform omega grid.
// Samples must be uniformly spaced in time; the mean is removed so the zero
// frequency end of the grid stays clean.
inline Spectrum fourier_magnitude(const std::vector<double>& times,
                                  const std::vector<double>& samples,
                                  const SpectrumConfig& cfg) {
  cfg.validate();
  const size_t n = times.size();
  if (samples.size() != n) throw ConfigError("spectrum: time/sample size mismatch");
  if (n < 16) throw ConfigError("spectrum: record too short");
  const double dt = (times.back() - times.front()) / double(n - 1);
  if (!(dt > 0.0)) throw ConfigError("spectrum: times must increase");
  for (size_t k = 1; k < n; ++k)
    if (std::abs(times[k] - times[k - 1] - dt) > 1e-9 * dt)
      throw ConfigError("spectrum: sample times are not uniform");

  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= double(n);

  std::vector<double> weighted(n);
  for (size_t k = 0; k < n; ++k) {
    double w = 1.0;
    if (cfg.window == WindowKind::Hann)
      w = 0.5 * (1.0 - std::cos(2.0 * M_PI * double(k) / double(n - 1)));
    weighted[k] = w * (samples[k] - mean);
  }

  Spectrum out;
  out.time_span = times.back() - times.front();
  out.omega.resize(cfg.bins);
  out.magnitude.resize(cfg.bins);
  const double domega = (cfg.omega_max - cfg.omega_min) / double(cfg.bins - 1);
  for (int i = 0; i < cfg.bins; ++i) {
    const double w = cfg.omega_min + i * domega;
    // rotate exp(i w t_k) incrementally; re-anchor periodically to cap drift
    const double cs = std::cos(w * dt), sn = std::sin(w * dt);
    double cr = std::cos(w * times.front()), ci = std::sin(w * times.front());
    double acc_r = 0.0, acc_i = 0.0;
    for (size_t k = 0; k < n; ++k) {
      acc_r += weighted[k] * cr;
      acc_i += weighted[k] * ci;
      const double nr = cr * cs - ci * sn;
      ci = cr * sn + ci * cs;
      cr = nr;
      if ((k & 0xFFF) == 0xFFF) {
        const double t = times.front() + double(k + 1) * dt;
        cr = std::cos(w * t);
        ci = std::sin(w * t);
      }
    }
    out.omega[i] = w;
    out.magnitude[i] = std::hypot(acc_r, acc_i) * dt;
  }
  return out;
}

struct Peak {
  double omega = 0.0;
  double magnitude = 0.0;
};

// Local maxima above threshold_rel * max, refined by a parabolic fit through
// log magnitudes. Candidates closer than merge_domega (rad/time) keep only the
// strongest — pass ~3.5 * rayleigh_width() to reject window sidelobes while
// preserving tones separated by >= 4 Rayleigh widths.
inline std::vector<Peak> find_peaks(const Spectrum& spec, double threshold_rel = 0.02,
                                    double merge_domega = 0.0) {
  const auto& mag = spec.magnitude;
  const auto& om = spec.omega;
  const int n = static_cast<int>(mag.size());
  if (n < 3) return {};
  const double peak_mag = *std::max_element(mag.begin(), mag.end());
  if (!(peak_mag > 0.0)) return {};
  const double floor_mag = threshold_rel * peak_mag;
  const double cell = om[1] - om[0];

  std::vector<Peak> found;
  for (int i = 1; i + 1 < n; ++i) {
    if (mag[i] < floor_mag) continue;
    if (!(mag[i] >= mag[i - 1] && mag[i] > mag[i + 1])) continue;
    double w = om[i], m = mag[i];
    if (mag[i - 1] > 0.0 && mag[i + 1] > 0.0) {
      const double la = std::log(mag[i - 1]), lb = std::log(mag[i]),
                   lc = std::log(mag[i + 1]);
      const double denom = la - 2.0 * lb + lc;
      if (denom < 0.0) {
        const double shift = 0.5 * (la - lc) / denom;
        if (std::abs(shift) <= 1.0) {
          w += shift * cell;
          m = std::exp(lb - 0.25 * (la - lc) * shift);
        }
      }
    }
    found.push_back({w, m});
  }

  const double radius = std::max(merge_domega, 1.5 * cell);
  std::sort(found.begin(), found.end(),
            [](const Peak& a, const Peak& b) { return a.magnitude > b.magnitude; });
  std::vector<Peak> kept;
  for (const Peak& p : found) {
    bool masked = false;
    for (const Peak& q : kept)
      if (std::abs(q.omega - p.omega) < radius) {
        masked = true;
        break;
      }
    if (!masked) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Peak& a, const Peak& b) { return a.omega < b.omega; });
  return kept;
}

// ---------------------------------------------------------------------------
// Probes: scalar readouts of the running simulation that feed the spectra.

enum class ProbeKind : uint8_t {
  SinglePoint,
  EndPoint,  // rightmost non-anchored middle-row point
  AverageRightmostThree,
  AverageAttachmentRegion,
  MidSpanPoint,
  SphereAngle,
};

enum class ProbeAxis : uint8_t { X, Z };

struct ProbeSpec {
  ProbeKind kind = ProbeKind::AverageRightmostThree;
  ProbeAxis axis = ProbeAxis::Z;
  int point_id = -1;  // SinglePoint only
};

struct ResolvedProbe {
  std::string label;
  ProbeAxis axis = ProbeAxis::Z;
  bool sphere_angle = false;
  std::vector<int> ids;
  std::vector<Vec2> rests;

  double value(const Dynamics& dyn) const {
    if (sphere_angle) {
      const RigidState* rg = dyn.rigid_state();
      if (!rg) throw ConfigError("probe: sphere angle requested without a sphere");
      return rg->beta;
    }
    double acc = 0.0;
    for (size_t i = 0; i < ids.size(); ++i) {
      const Vec2 d = dyn.position(ids[i]) - rests[i];
      acc += axis == ProbeAxis::X ? d.x : d.z;
    }
    return acc / double(ids.size());
  }

  double value(const SimState& st) const {
    if (sphere_angle) {
      if (!st.rigid) throw ConfigError("probe: sphere angle requested without a sphere");
      return st.rigid->beta;
    }
    double acc = 0.0;
    for (size_t i = 0; i < ids.size(); ++i) {
      const Vec2 d = st.positions[ids[i]] - rests[i];
      acc += axis == ProbeAxis::X ? d.x : d.z;
    }
    return acc / double(ids.size());
  }
};

inline ResolvedProbe resolve_probe(const Lattice& lat, const ProbeSpec& spec) {
  ResolvedProbe out;
  out.axis = spec.axis;
  const char* ax = spec.axis == ProbeAxis::X ? "x" : "z";
  switch (spec.kind) {
    case ProbeKind::SinglePoint: {
      if (spec.point_id < 0 || spec.point_id >= static_cast<int>(lat.points.size()))
        throw ConfigError("probe: point id out of range");
      out.ids = {spec.point_id};
      out.label = "p" + std::to_string(spec.point_id) + "_" + ax;
      break;
    }
    case ProbeKind::EndPoint: {
      int best = -1;
      double x = -1e300;
      for (const auto& p : lat.points) {
        if (p.kind == PointKind::Anchored) continue;
        if (std::abs(p.rest.z) > 1e-12) continue;
        if (p.rest.x > x) {
          x = p.rest.x;
          best = p.id;
        }
      }
      if (best < 0) throw ConfigError("probe: no middle-row end point");
      out.ids = {best};
      out.label = std::string("end_") + ax;
      break;
    }
    case ProbeKind::AverageRightmostThree: {
      std::vector<int> order(lat.points.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return lat.points[a].rest.x > lat.points[b].rest.x;
      });
      for (int id : order) {
        if (lat.points[id].kind == PointKind::Anchored) continue;
        out.ids.push_back(id);
        if (out.ids.size() == 3) break;
      }
      if (out.ids.size() < 3) throw ConfigError("probe: lattice too small for tip average");
      out.label = std::string("tip_") + ax;
      break;
    }
    case ProbeKind::AverageAttachmentRegion: {
      if (lat.attachment_ids.empty())
        throw ConfigError("probe: attachment average needs a loaded lattice");
      out.ids = lat.attachment_ids;
      out.label = std::string("seg_") + ax;
      break;
    }
    case ProbeKind::MidSpanPoint: {
      int best = -1;
      double dist = 1e300;
      for (const auto& p : lat.points) {
        if (p.kind != PointKind::Free) continue;
        const double d = std::abs(p.rest.x - 0.5 * lat.config.length_l) +
                         std::abs(p.rest.z);
        if (d < dist) {
          dist = d;
          best = p.id;
        }
      }
      if (best < 0) throw ConfigError("probe: no free point near mid span");
      out.ids = {best};
      out.label = std::string("mid_") + ax;
      break;
    }
    case ProbeKind::SphereAngle: {
      out.sphere_angle = true;
      out.label = "beta";
      return out;
    }
  }
  out.rests.reserve(out.ids.size());
  for (int id : out.ids) out.rests.push_back(lat.points[id].rest);
  return out;
}

}  // namespace cantisim
