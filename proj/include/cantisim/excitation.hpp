#pragma once

#include <cmath>

#include "cantisim/errors.hpp"
#include "cantisim/vec2.hpp"

namespace cantisim {

enum class DriverKind : uint8_t { ZPulse, XPulse, Harmonic, Hold };
enum class RampShape : uint8_t { Linear, SmoothStep };

// Prescribed motion of the anchored points. Pulse kinds displace the clamped
// end by `amplitude` over time tau and hold it there; Harmonic oscillates the
// end along z, optionally only for burst_periods drive periods (the burst ends
// on a zero crossing, so the end comes back to rest exactly).
struct BoundaryDriver {
  DriverKind kind = DriverKind::Hold;
  double amplitude = 0.0;
  double tau = 0.0;             // pulse rise time
  double omega_ex = 0.0;        // harmonic drive frequency
  RampShape ramp = RampShape::SmoothStep;
  double burst_periods = 0.0;   // harmonic only; 0 = drive forever

  void validate() const {
    if (kind == DriverKind::ZPulse || kind == DriverKind::XPulse) {
      if (tau <= 0.0) throw ConfigError("driver: pulse needs a positive rise time");
    }
    if (kind == DriverKind::Harmonic && omega_ex <= 0.0)
      throw ConfigError("driver: harmonic drive needs a positive frequency");
    if (burst_periods < 0.0) throw ConfigError("driver: burst_periods must be >= 0");
  }

  // Parse-time check: tau = 0 and omega_ex = 0 are "auto" placeholders the
  // runner resolves against the estimated fundamental before full validate().
  void validate_static() const {
    if (!std::isfinite(amplitude)) throw ConfigError("driver: amplitude must be finite");
    if (tau < 0.0) throw ConfigError("driver: tau must be >= 0 (0 = auto)");
    if (omega_ex < 0.0) throw ConfigError("driver: omega must be >= 0 (0 = auto)");
    if (burst_periods < 0.0) throw ConfigError("driver: burst_periods must be >= 0");
  }

  double ramp_value(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return ramp == RampShape::Linear ? u : u * u * (3.0 - 2.0 * u);
  }

  Vec2 offset(double t) const {
    switch (kind) {
      case DriverKind::ZPulse:
        return {0.0, amplitude * ramp_value(t / tau)};
      case DriverKind::XPulse:
        return {amplitude * ramp_value(t / tau), 0.0};
      case DriverKind::Harmonic: {
        if (burst_periods > 0.0 && t >= burst_periods * 2.0 * M_PI / omega_ex) return {0.0, 0.0};
        return {0.0, amplitude * std::sin(omega_ex * t)};
      }
      case DriverKind::Hold:
      default:
        return {0.0, 0.0};
    }
  }

  Vec2 position(Vec2 rest, double t) const { return rest + offset(t); }

  // Time after which the boundary no longer moves (infinity for endless drive).
  double settle_time() const {
    switch (kind) {
      case DriverKind::ZPulse:
      case DriverKind::XPulse:
        return tau;
      case DriverKind::Harmonic:
        return burst_periods > 0.0 ? burst_periods * 2.0 * M_PI / omega_ex : 1e300;
      default:
        return 0.0;
    }
  }
};

// Driver templates for the bundled scenarios; length_l feeds amplitudes that
// scale with the beam. Rise times of 0 mean "auto" (resolved by the runner
// against the estimated fundamental period).
inline BoundaryDriver excitation_for_scenario(const std::string& name, double length_l = 0.0) {
  BoundaryDriver d;
  if (name == "fig4" || name == "table-eq6") {
    d.kind = DriverKind::ZPulse;
    d.amplitude = 5.0;
  } else if (name == "fig5") {
    if (length_l <= 0.0) throw ConfigError("scenario driver: needs the beam length");
    d.kind = DriverKind::ZPulse;
    d.amplitude = length_l / 100.0;
  } else if (name == "fig7" || name == "fig11") {
    d.kind = DriverKind::XPulse;
    d.amplitude = 0.37;
  } else if (name == "fig8") {
    d.kind = DriverKind::Harmonic;
    d.burst_periods = 3.0;  // omega_ex resolved by the runner to the loaded fundamental
  } else if (name == "hold") {
    d.kind = DriverKind::Hold;
  } else {
    throw ConfigError("scenario driver: unknown scenario '" + name + "'");
  }
  return d;
}

}  // namespace cantisim
