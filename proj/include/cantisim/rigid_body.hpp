#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cantisim/errors.hpp"
#include "cantisim/lattice.hpp"
#include "cantisim/vec2.hpp"

namespace cantisim {

// Rigid sphere resting on the top-row contact segment. Attached lattice points
// become kinematic followers of the sphere pose; their positions are
// center + Rot(beta) * offset.
struct RigidSphere {
  double mass = 0.0;
  double radius = 0.0;
  double inertia = 0.0;
  Vec2 center_rest;
  std::vector<int> point_ids;
  std::vector<Vec2> offsets;  // body-frame, beta = 0
};

struct RigidState {
  Vec2 center;
  Vec2 center_velocity;
  double beta = 0.0;
  double omega = 0.0;

  void check_angle() const {
    if (!(std::abs(beta) < M_PI_2))
      throw NumericalError("rigid state: rotation angle left the contact-patch regime");
  }
};

// Sphere mass is mass_ratio times the total lattice mass; the center sits
// perpendicular above the contact-segment midpoint at the height that puts the
// segment endpoints exactly on the sphere surface (chord construction).
inline RigidSphere init_sphere(const Lattice& lat, const LoadSpec& spec,
                               std::vector<std::string>* warnings = nullptr) {
  spec.validate();
  if (spec.kind != LoadKind::RigidSphere) throw ConfigError("sphere: wrong load kind");
  if (lat.attachment_ids.empty()) throw ConfigError("sphere: lattice has no attachment segment");

  RigidSphere sp;
  sp.mass = spec.mass_ratio * lat.points.size() * lat.config.point_mass_m0;
  sp.radius = spec.radius_R;
  sp.inertia = spec.inertia_override > 0.0
                   ? spec.inertia_override
                   : (spec.inertia == InertiaModel::Solid ? 0.4 : 1.0) * sp.mass * sp.radius *
                         sp.radius;

  const Vec2 first = lat.points[lat.attachment_ids.front()].rest;
  const Vec2 last = lat.points[lat.attachment_ids.back()].rest;
  const double half_chord = 0.5 * (last.x - first.x);
  double lift2 = sp.radius * sp.radius - half_chord * half_chord;
  if (lift2 < 0.0) {
    if (warnings)
      warnings->push_back("sphere: radius shorter than the contact half-chord; flattened seat");
    lift2 = 0.0;
  }
  sp.center_rest = {0.5 * (first.x + last.x), first.z + std::sqrt(lift2)};
  sp.point_ids = lat.attachment_ids;
  sp.offsets.reserve(sp.point_ids.size());
  for (int id : sp.point_ids) sp.offsets.push_back(lat.points[id].rest - sp.center_rest);
  return sp;
}

inline RigidState rest_state(const RigidSphere& sp) {
  return {sp.center_rest, {0.0, 0.0}, 0.0, 0.0};
}

// Positions (and velocities, if requested) of the attached points for a pose.
inline void rigid_point_kinematics(const RigidSphere& sp, const RigidState& st,
                                   std::span<Vec2> positions, std::span<Vec2> velocities = {}) {
  const double c = std::cos(st.beta), s = std::sin(st.beta);
  for (size_t i = 0; i < sp.offsets.size(); ++i) {
    const Vec2 o = sp.offsets[i];
    const Vec2 arm{c * o.x - s * o.z, s * o.x + c * o.z};
    positions[i] = st.center + arm;
    if (!velocities.empty())
      // omega x arm in 2D: (-omega*arm_z, omega*arm_x)
      velocities[i] = st.center_velocity + Vec2{-st.omega * arm.z, st.omega * arm.x};
  }
}

inline std::vector<Vec2> rigid_point_positions(const RigidSphere& sp, const RigidState& st) {
  std::vector<Vec2> pos(sp.offsets.size());
  rigid_point_kinematics(sp, st, pos);
  return pos;
}

// Net force and torque about the instantaneous center from per-point forces
// (aligned with point_ids).
inline std::pair<Vec2, double> aggregate_force_torque(const RigidSphere& sp,
                                                      const RigidState& st,
                                                      std::span<const Vec2> forces) {
  if (forces.size() != sp.offsets.size())
    throw ConfigError("sphere: force list does not match attachment points");
  std::vector<Vec2> pos(sp.offsets.size());
  rigid_point_kinematics(sp, st, pos);
  Vec2 f{0.0, 0.0};
  double torque = 0.0;
  for (size_t i = 0; i < forces.size(); ++i) {
    f += forces[i];
    torque += cross(pos[i] - st.center, forces[i]);
  }
  return {f, torque};
}

inline std::pair<Vec2, double> aggregate_force_torque(
    const RigidSphere& sp, const RigidState& st,
    std::span<const std::pair<int, Vec2>> indexed_forces) {
  std::vector<Vec2> aligned(sp.offsets.size(), Vec2{0.0, 0.0});
  for (const auto& [id, f] : indexed_forces) {
    auto it = std::find(sp.point_ids.begin(), sp.point_ids.end(), id);
    if (it == sp.point_ids.end())
      throw ConfigError("sphere: force given for a point outside the attachment");
    aligned[static_cast<size_t>(it - sp.point_ids.begin())] += f;
  }
  return aggregate_force_torque(sp, st, std::span<const Vec2>(aligned));
}

}  // namespace cantisim
