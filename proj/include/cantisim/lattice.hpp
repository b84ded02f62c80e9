#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cantisim/errors.hpp"
#include "cantisim/vec2.hpp"

namespace cantisim {

enum class PointKind : uint8_t { Free, Anchored, RigidAttached };
enum class LoadKind : uint8_t { DistributedMass, RigidSphere };
enum class InertiaModel : uint8_t { Solid, Shell };

struct LoadSpec {
  LoadKind kind = LoadKind::DistributedMass;
  double mass_ratio = 0.0;  // attached mass / total lattice mass
  double lf_hat = 0.0;      // attachment fraction of the span
  double radius_R = 0.0;    // sphere radius (RigidSphere)
  InertiaModel inertia = InertiaModel::Solid;
  double inertia_override = 0.0;  // > 0 replaces the model formula

  void validate() const {
    if (lf_hat <= 0.0 || lf_hat > 1.0) throw ConfigError("load: lf_hat must be in (0, 1]");
    if (mass_ratio < 0.0) throw ConfigError("load: mass ratio must be >= 0");
    if (kind == LoadKind::RigidSphere) {
      if (radius_R <= 0.0) throw ConfigError("load: sphere radius must be positive");
      if (lf_hat >= 1.0) throw ConfigError("load: sphere attachment must not span the beam");
    }
  }
};

struct LatticeConfig {
  double length_l = 350.0;
  double width_a = 1.0;
  int rows = 3;  // 3 or 5
  int points_outer_row = 607;
  double point_mass_m0 = 1.0;
  double spring_k0 = 1.0;
  int anchor_columns = 1;  // leftmost columns held by the boundary driver
  std::optional<LoadSpec> load;

  double h() const { return length_l / (points_outer_row - 1); }

  void validate() const {
    if (rows != 3 && rows != 5) throw ConfigError("lattice: rows must be 3 or 5");
    if (points_outer_row < 3) throw ConfigError("lattice: need at least 3 points per outer row");
    if (length_l <= width_a) throw ConfigError("lattice: length must exceed width");
    if (point_mass_m0 <= 0.0 || spring_k0 <= 0.0)
      throw ConfigError("lattice: mass and stiffness must be positive");
    if (anchor_columns < 0 || anchor_columns > points_outer_row - 2)
      throw ConfigError("lattice: anchor_columns out of range");
    if (load) load->validate();
  }
};

struct MaterialPoint {
  int id = 0;
  Vec2 rest;
  double mass = 1.0;
  PointKind kind = PointKind::Free;
};

struct Spring {
  int a = 0, b = 0;
  double rest_length = 0.0;
  double stiffness = 1.0;
};

struct Lattice {
  LatticeConfig config;
  std::vector<MaterialPoint> points;
  std::vector<Spring> springs;
  std::vector<int> attachment_ids;  // segment points, ascending by rest-x
  int n_f = 0;
  std::vector<std::string> warnings;

  double h() const { return config.h(); }
  double total_mass() const {
    double s = 0.0;
    for (const auto& p : points) s += p.mass;
    return s;
  }
  std::vector<int> anchored_ids() const {
    std::vector<int> out;
    for (const auto& p : points)
      if (p.kind == PointKind::Anchored) out.push_back(p.id);
    return out;
  }
};

namespace detail {

// Rest-x threshold for membership in the attachment segment, with a half-cell
// tolerance so the discretized segment is not clipped by roundoff.
inline double segment_threshold(const LatticeConfig& cfg, double lf_hat) {
  if (lf_hat >= 1.0) return -1e300;
  return cfg.length_l * (1.0 - lf_hat) - 0.25 * cfg.h();
}

inline void connect(std::vector<Spring>& springs, const std::vector<MaterialPoint>& pts, int a,
                    int b, double k) {
  const double L = norm(pts[b].rest - pts[a].rest);
  springs.push_back({a, b, L, k});
}

}  // namespace detail

inline void apply_distributed_load(Lattice& lat, const LoadSpec& spec);
inline void mark_attachment_segment(Lattice& lat, double lf_hat);

// Triangular lattice: outer rows with N_r points at z = +-a/2 (plus +-a/4 rows
// in the 5-row variant), offset rows with N_r + 1 points overhanging h/2 at
// both ends. Horizontal springs along rows, diagonal springs between adjacent
// rows. Leftmost anchor_columns columns of every row are Anchored.
inline Lattice build_lattice(const LatticeConfig& config) {
  config.validate();
  Lattice lat;
  lat.config = config;
  if (config.points_outer_row < 10)
    lat.warnings.push_back("lattice: fewer than 10 points per row poorly resolves bending");
  if (config.length_l < 10.0 * config.width_a)
    lat.warnings.push_back("lattice: aspect ratio below 10 strains the slender-beam regime");

  const int nr = config.points_outer_row;
  const double h = config.h(), a = config.width_a;

  // row descriptors: z level and whether the row is offset by h/2
  struct Row {
    double z;
    bool offset;
  };
  std::vector<Row> rows;
  if (config.rows == 3)
    rows = {{+a / 2, false}, {0.0, true}, {-a / 2, false}};
  else
    rows = {{+a / 2, false}, {+a / 4, true}, {0.0, false}, {-a / 4, true}, {-a / 2, false}};

  std::vector<std::vector<int>> row_ids(rows.size());
  int id = 0;
  for (size_t r = 0; r < rows.size(); ++r) {
    const int count = rows[r].offset ? nr + 1 : nr;
    for (int j = 0; j < count; ++j) {
      const double x = rows[r].offset ? (j - 0.5) * h : j * h;
      const PointKind kind =
          j < config.anchor_columns ? PointKind::Anchored : PointKind::Free;
      lat.points.push_back({id, {x, rows[r].z}, config.point_mass_m0, kind});
      row_ids[r].push_back(id++);
    }
  }

  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t j = 0; j + 1 < row_ids[r].size(); ++j)
      detail::connect(lat.springs, lat.points, row_ids[r][j], row_ids[r][j + 1],
                      config.spring_k0);
  for (size_t r = 0; r + 1 < rows.size(); ++r) {
    // exactly one of two adjacent rows is offset; connect its point j to
    // columns j-1 and j of the aligned neighbor
    const size_t off = rows[r].offset ? r : r + 1;
    const size_t ali = rows[r].offset ? r + 1 : r;
    for (size_t j = 0; j < row_ids[off].size(); ++j)
      for (int col : {static_cast<int>(j) - 1, static_cast<int>(j)})
        if (col >= 0 && col < static_cast<int>(row_ids[ali].size()))
          detail::connect(lat.springs, lat.points, row_ids[off][j], row_ids[ali][col],
                          config.spring_k0);
  }

  if (config.load) {
    if (config.load->kind == LoadKind::DistributedMass)
      apply_distributed_load(lat, *config.load);
    else
      mark_attachment_segment(lat, config.load->lf_hat);
  }
  return lat;
}

// Scale the mass of every point in the end segment by 1 + ratio * N / N_f,
// so the added mass totals exactly mass_ratio * (lattice mass).
inline void apply_distributed_load(Lattice& lat, const LoadSpec& spec) {
  spec.validate();
  if (spec.kind != LoadKind::DistributedMass)
    throw ConfigError("distributed load: wrong load kind");
  if (spec.mass_ratio == 0.0) return;
  const double xmin = detail::segment_threshold(lat.config, spec.lf_hat);
  std::vector<int> segment;
  for (const auto& p : lat.points)
    if (p.rest.x >= xmin) segment.push_back(p.id);
  if (segment.empty()) throw ConfigError("distributed load: segment contains no points");
  const double factor =
      1.0 + spec.mass_ratio * static_cast<double>(lat.points.size()) / segment.size();
  for (int i : segment) lat.points[i].mass *= factor;
  lat.attachment_ids = std::move(segment);
  lat.n_f = static_cast<int>(lat.attachment_ids.size());
}

// Mark the sphere's contact points: the end segment of the TOP row. The sphere
// rests on the upper surface, so only top-row points bind to it. Springs fully
// inside the rigid segment are dropped.
inline void mark_attachment_segment(Lattice& lat, double lf_hat) {
  if (lf_hat <= 0.0 || lf_hat >= 1.0)
    throw ConfigError("attachment: lf_hat must be in (0, 1)");
  const double xmin = detail::segment_threshold(lat.config, lf_hat);
  const double ztop = lat.config.width_a / 2;
  std::vector<int> segment;
  for (auto& p : lat.points)
    if (p.rest.z == ztop && p.rest.x >= xmin) {
      if (p.kind == PointKind::Anchored)
        throw ConfigError("attachment: segment reaches the anchored end");
      p.kind = PointKind::RigidAttached;
      segment.push_back(p.id);
    }
  if (segment.empty()) throw ConfigError("attachment: segment contains no points");
  std::sort(segment.begin(), segment.end(), [&](int a, int b) {
    return lat.points[a].rest.x < lat.points[b].rest.x;
  });
  std::erase_if(lat.springs, [&](const Spring& s) {
    return lat.points[s.a].kind == PointKind::RigidAttached &&
           lat.points[s.b].kind == PointKind::RigidAttached;
  });
  lat.attachment_ids = std::move(segment);
  lat.n_f = static_cast<int>(lat.attachment_ids.size());
}

// True when every point can reach an Anchored point through springs (the
// rigid segment counts as one connected block).
inline bool connected_to_anchors(const Lattice& lat) {
  const int n = static_cast<int>(lat.points.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& s : lat.springs) {
    adj[s.a].push_back(s.b);
    adj[s.b].push_back(s.a);
  }
  // rigid points move together: link them pairwise through the first
  for (size_t i = 1; i < lat.attachment_ids.size(); ++i)
    if (lat.points[lat.attachment_ids[i]].kind == PointKind::RigidAttached) {
      adj[lat.attachment_ids[0]].push_back(lat.attachment_ids[i]);
      adj[lat.attachment_ids[i]].push_back(lat.attachment_ids[0]);
    }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  for (const auto& p : lat.points)
    if (p.kind == PointKind::Anchored) {
      seen[p.id] = 1;
      q.push(p.id);
    }
  if (q.empty()) return false;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        q.push(v);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

inline bool has_duplicate_springs(const Lattice& lat) {
  std::set<std::pair<int, int>> seen;
  for (const auto& s : lat.springs) {
    auto key = std::minmax(s.a, s.b);
    if (!seen.insert({key.first, key.second}).second) return true;
    if (s.a == s.b) return true;
  }
  return false;
}

// Plain-text listing for debugging and golden-file comparisons.
inline std::string serialize_lattice(const Lattice& lat) {
  std::ostringstream os;
  os.precision(17);
  const char* kind_names[] = {"free", "anchored", "rigid"};
  for (const auto& p : lat.points)
    os << "P " << p.id << ' ' << p.rest.x << ' ' << p.rest.z << ' ' << p.mass << ' '
       << kind_names[static_cast<int>(p.kind)] << '\n';
  for (const auto& s : lat.springs)
    os << "S " << s.a << ' ' << s.b << ' ' << s.rest_length << ' ' << s.stiffness << '\n';
  return os.str();
}

}  // namespace cantisim
