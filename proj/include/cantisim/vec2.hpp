#pragma once

#include <cmath>

namespace cantisim {

// Planar vector in the beam's xz-plane: x along the beam axis, z transverse.
struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; z += o.z; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; z -= o.z; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; z *= s; return *this; }
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.z + b.z}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.z - b.z}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.z}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.z}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.z}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.z * b.z; }
// Scalar out-of-plane component of a × b (right-handed, y out of the xz-plane).
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.z - a.z * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.z); }

inline Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.z, s * a.x + c * a.z};
}

}  // namespace cantisim
