#include <catch2/catch_amalgamated.hpp>

#include "cantisim/excitation.hpp"
#include "cantisim/lattice.hpp"
#include "cantisim/rigid_body.hpp"

using namespace cantisim;
using Catch::Approx;

static LatticeConfig reference_config() {
  LatticeConfig cfg;
  cfg.length_l = 350.0;
  cfg.width_a = 1.0;
  cfg.points_outer_row = 607;
  return cfg;
}

TEST_CASE("reference lattice has the expected shape") {
  auto lat = build_lattice(reference_config());
  CHECK(lat.points.size() == 1822);
  int middle = 0;
  for (const auto& p : lat.points)
    if (p.rest.z == 0.0) ++middle;
  CHECK(middle == 608);
  CHECK(lat.springs.size() == 7 * 607 - 2);
  CHECK_FALSE(has_duplicate_springs(lat));
  CHECK(connected_to_anchors(lat));
  // middle row overhangs by half a cell on both ends
  double xmin = 1e300, xmax = -1e300;
  for (const auto& p : lat.points)
    if (p.rest.z == 0.0) {
      xmin = std::min(xmin, p.rest.x);
      xmax = std::max(xmax, p.rest.x);
    }
  CHECK(xmin == Approx(-lat.h() / 2));
  CHECK(xmax == Approx(350.0 + lat.h() / 2));
}

TEST_CASE("minimal lattice builds with ten points") {
  LatticeConfig cfg;
  cfg.length_l = 2.0;
  cfg.width_a = 1.0;
  cfg.points_outer_row = 3;
  auto lat = build_lattice(cfg);
  CHECK(lat.points.size() == 10);
  CHECK(lat.springs.size() == 19);
  CHECK(connected_to_anchors(lat));
  CHECK(!lat.warnings.empty());  // coarse-resolution warning
  for (const auto& s : lat.springs)
    CHECK(s.rest_length ==
          Approx(norm(lat.points[s.a].rest - lat.points[s.b].rest)).margin(1e-15));
}

TEST_CASE("five-row variant builds and stays connected") {
  LatticeConfig cfg;
  cfg.length_l = 60.0;
  cfg.width_a = 1.0;
  cfg.rows = 5;
  cfg.points_outer_row = 105;
  auto lat = build_lattice(cfg);
  CHECK(lat.points.size() == 5 * 105 + 2);
  CHECK(lat.springs.size() == 13 * 105 - 3);
  CHECK_FALSE(has_duplicate_springs(lat));
  CHECK(connected_to_anchors(lat));
}

TEST_CASE("anchoring marks the leftmost columns of every row") {
  auto cfg = reference_config();
  auto lat = build_lattice(cfg);
  CHECK(lat.anchored_ids().size() == 3);
  cfg.anchor_columns = 2;
  auto lat2 = build_lattice(cfg);
  CHECK(lat2.anchored_ids().size() == 6);
  cfg.anchor_columns = 0;
  auto lat3 = build_lattice(cfg);
  CHECK(lat3.anchored_ids().empty());
}

TEST_CASE("config validation rejects bad shapes") {
  LatticeConfig cfg = reference_config();
  cfg.rows = 4;
  CHECK_THROWS_AS(build_lattice(cfg), ConfigError);
  cfg = reference_config();
  cfg.points_outer_row = 2;
  CHECK_THROWS_AS(build_lattice(cfg), ConfigError);
  cfg = reference_config();
  cfg.length_l = 0.5;
  CHECK_THROWS_AS(build_lattice(cfg), ConfigError);
  cfg = reference_config();
  cfg.point_mass_m0 = 0.0;
  CHECK_THROWS_AS(build_lattice(cfg), ConfigError);
}

TEST_CASE("interior middle-row points have degree six") {
  auto lat = build_lattice(reference_config());
  std::vector<int> degree(lat.points.size(), 0);
  for (const auto& s : lat.springs) {
    ++degree[s.a];
    ++degree[s.b];
  }
  for (const auto& p : lat.points)
    if (p.rest.z == 0.0 && p.rest.x > lat.h() && p.rest.x < 350.0 - lat.h())
      CHECK(degree[p.id] == 6);
}

TEST_CASE("identical configs build identical lattices") {
  auto a = serialize_lattice(build_lattice(reference_config()));
  auto b = serialize_lattice(build_lattice(reference_config()));
  CHECK(a == b);
  CHECK(a.size() > 1000);
}

TEST_CASE("distributed load scales segment masses with exact total") {
  LatticeConfig cfg;
  cfg.length_l = 290.0;
  cfg.width_a = 1.0;
  cfg.points_outer_row = 511;
  auto lat = build_lattice(cfg);
  const double unloaded_mass = lat.total_mass();

  LoadSpec load;
  load.kind = LoadKind::DistributedMass;
  load.lf_hat = 0.05;
  load.mass_ratio = 0.72;
  apply_distributed_load(lat, load);

  CHECK(lat.n_f > 0);
  CHECK(lat.total_mass() == Approx(unloaded_mass * 1.72).epsilon(1e-12));
  const double factor = 1.0 + 0.72 * lat.points.size() / static_cast<double>(lat.n_f);
  const double xmin = 290.0 * 0.95 - lat.h() / 4;
  for (const auto& p : lat.points) {
    if (p.rest.x >= xmin)
      CHECK(p.mass == Approx(factor));
    else
      CHECK(p.mass == 1.0);
  }
}

TEST_CASE("zero mass ratio leaves the lattice untouched") {
  auto lat = build_lattice(reference_config());
  LoadSpec load;
  load.kind = LoadKind::DistributedMass;
  load.lf_hat = 0.05;
  load.mass_ratio = 0.0;
  apply_distributed_load(lat, load);
  for (const auto& p : lat.points) CHECK(p.mass == 1.0);
}

TEST_CASE("full-span distributed load scales every point uniformly") {
  LatticeConfig cfg;
  cfg.length_l = 20.0;
  cfg.width_a = 1.0;
  cfg.points_outer_row = 21;
  auto lat = build_lattice(cfg);
  LoadSpec load;
  load.kind = LoadKind::DistributedMass;
  load.lf_hat = 1.0;
  load.mass_ratio = 0.5;
  apply_distributed_load(lat, load);
  for (const auto& p : lat.points) CHECK(p.mass == Approx(1.5));
}

TEST_CASE("attachment segment counts at reference resolutions") {
  auto count = [](double l, int nr, double lf) {
    LatticeConfig cfg;
    cfg.length_l = l;
    cfg.width_a = 1.0;
    cfg.points_outer_row = nr;
    auto lat = build_lattice(cfg);
    mark_attachment_segment(lat, lf);
    return lat.n_f;
  };
  CHECK(count(290.0, 503, 0.1525) == 77);
  CHECK(count(290.0, 503, 0.10893) == 55);
  CHECK(count(290.0, 201, 0.1525) == 31);
  CHECK(count(290.0, 201, 0.10893) == 23);
}

TEST_CASE("attachment marking is top-row only and prunes internal springs") {
  LatticeConfig cfg;
  cfg.length_l = 40.0;
  cfg.width_a = 1.0;
  cfg.points_outer_row = 41;
  auto lat = build_lattice(cfg);
  const auto springs_before = lat.springs.size();
  mark_attachment_segment(lat, 0.25);

  int top = 0, other = 0;
  for (const auto& p : lat.points)
    if (p.kind == PointKind::RigidAttached) (p.rest.z == 0.5 ? top : other)++;
  CHECK(top == lat.n_f);
  CHECK(other == 0);
  // the horizontal springs between consecutive attached points are gone
  CHECK(lat.springs.size() == springs_before - (lat.n_f - 1));
  CHECK(connected_to_anchors(lat));
  // attachment ids ascend by rest-x
  for (size_t i = 1; i < lat.attachment_ids.size(); ++i)
    CHECK(lat.points[lat.attachment_ids[i]].rest.x >
          lat.points[lat.attachment_ids[i - 1]].rest.x);
  // masses stay pristine: the sphere carries the load, not the points
  CHECK(lat.total_mass() == Approx(static_cast<double>(lat.points.size())));
}

TEST_CASE("attachment spanning a single column marks one point") {
  LatticeConfig cfg;
  cfg.length_l = 20.0;
  cfg.width_a = 1.0;
  cfg.points_outer_row = 21;
  auto lat = build_lattice(cfg);
  mark_attachment_segment(lat, 0.03);  // under one cell of 1/20th span
  CHECK(lat.n_f == 1);
}

TEST_CASE("attachment errors") {
  LatticeConfig cfg;
  cfg.length_l = 20.0;
  cfg.width_a = 1.0;
  cfg.points_outer_row = 21;
  auto lat = build_lattice(cfg);
  CHECK_THROWS_AS(mark_attachment_segment(lat, 0.0), ConfigError);
  CHECK_THROWS_AS(mark_attachment_segment(lat, 1.0), ConfigError);
  auto lat2 = build_lattice(cfg);
  CHECK_THROWS_AS(mark_attachment_segment(lat2, 0.999), ConfigError);  // reaches the anchor
}

// ---- rigid sphere ----

static Lattice sphere_lattice() {
  LatticeConfig cfg;
  cfg.length_l = 290.0;
  cfg.width_a = 1.0;
  cfg.points_outer_row = 503;
  auto lat = build_lattice(cfg);
  mark_attachment_segment(lat, 0.1525);
  return lat;
}

static LoadSpec sphere_spec() {
  LoadSpec s;
  s.kind = LoadKind::RigidSphere;
  s.mass_ratio = 0.75;
  s.lf_hat = 0.1525;
  s.radius_R = 60.0;
  return s;
}

TEST_CASE("sphere construction geometry") {
  auto lat = sphere_lattice();
  auto sp = init_sphere(lat, sphere_spec());
  CHECK(sp.point_ids.size() == 77);
  CHECK(sp.mass == Approx(0.75 * lat.points.size()));
  CHECK(sp.inertia == Approx(0.4 * sp.mass * 60.0 * 60.0));
  // segment endpoints sit exactly on the sphere
  const Vec2 first = lat.points[lat.attachment_ids.front()].rest;
  const Vec2 last = lat.points[lat.attachment_ids.back()].rest;
  CHECK(norm(first - sp.center_rest) == Approx(60.0).epsilon(1e-12));
  CHECK(norm(last - sp.center_rest) == Approx(60.0).epsilon(1e-12));
  CHECK(sp.center_rest.x == Approx(0.5 * (first.x + last.x)));
  CHECK(sp.center_rest.z > 0.5);
  for (const auto& o : sp.offsets) CHECK(norm(o) <= 60.0 + 1e-9);
}

TEST_CASE("shell inertia is 2.5 times solid inertia") {
  auto lat = sphere_lattice();
  auto spec = sphere_spec();
  auto solid = init_sphere(lat, spec);
  spec.inertia = InertiaModel::Shell;
  auto shell = init_sphere(lat, spec);
  CHECK(shell.inertia == Approx(2.5 * solid.inertia));
  spec.inertia_override = 123.0;
  CHECK(init_sphere(lat, spec).inertia == 123.0);
}

TEST_CASE("undersized sphere radius warns instead of failing") {
  auto lat = sphere_lattice();
  auto spec = sphere_spec();
  spec.radius_R = 5.0;  // half-chord is ~22
  std::vector<std::string> warnings;
  auto sp = init_sphere(lat, spec, &warnings);
  CHECK(!warnings.empty());
  CHECK(sp.center_rest.z == Approx(0.5));
}

TEST_CASE("identity pose reproduces rest positions with zero velocity") {
  auto lat = sphere_lattice();
  auto sp = init_sphere(lat, sphere_spec());
  auto st = rest_state(sp);
  auto pos = rigid_point_positions(sp, st);
  std::vector<Vec2> vel(pos.size());
  rigid_point_kinematics(sp, st, pos, vel);
  for (size_t i = 0; i < pos.size(); ++i) {
    CHECK(norm(pos[i] - lat.points[sp.point_ids[i]].rest) < 1e-12);
    CHECK(norm(vel[i]) == 0.0);
  }
}

TEST_CASE("half-turn pose negates offsets about the center") {
  auto lat = sphere_lattice();
  auto sp = init_sphere(lat, sphere_spec());
  RigidState st = rest_state(sp);
  st.beta = M_PI;  // kinematics-only check, beyond the dynamic angle guard
  auto pos = rigid_point_positions(sp, st);
  for (size_t i = 0; i < pos.size(); ++i)
    CHECK(norm((pos[i] - st.center) + sp.offsets[i]) < 1e-9);
}

TEST_CASE("small rotation shifts the contact midpoint by depth times angle") {
  auto lat = sphere_lattice();
  auto sp = init_sphere(lat, sphere_spec());
  RigidState st = rest_state(sp);
  st.beta = 1e-4;
  auto pos = rigid_point_positions(sp, st);
  // pick the offset closest to straight below the center
  size_t mid = 0;
  for (size_t i = 0; i < sp.offsets.size(); ++i)
    if (std::abs(sp.offsets[i].x) < std::abs(sp.offsets[mid].x)) mid = i;
  const double depth = -sp.offsets[mid].z;
  const double dx = pos[mid].x - lat.points[sp.point_ids[mid]].rest.x;
  CHECK(dx == Approx(depth * st.beta).epsilon(1e-4));
}

TEST_CASE("rotation rate maps to tangential point velocity") {
  auto lat = sphere_lattice();
  auto sp = init_sphere(lat, sphere_spec());
  RigidState st = rest_state(sp);
  st.omega = 2.0;
  st.center_velocity = {0.5, -0.25};
  std::vector<Vec2> pos(sp.offsets.size()), vel(sp.offsets.size());
  rigid_point_kinematics(sp, st, pos, vel);
  for (size_t i = 0; i < vel.size(); ++i) {
    const Vec2 arm = pos[i] - st.center;
    const Vec2 expect = st.center_velocity + Vec2{-st.omega * arm.z, st.omega * arm.x};
    CHECK(norm(vel[i] - expect) < 1e-12);
  }
}

TEST_CASE("force aggregation sums forces and torques") {
  auto lat = sphere_lattice();
  auto sp = init_sphere(lat, sphere_spec());
  auto st = rest_state(sp);

  std::vector<Vec2> zero(sp.offsets.size(), Vec2{0, 0});
  auto [f0, t0] = aggregate_force_torque(sp, st, std::span<const Vec2>(zero));
  CHECK(norm(f0) == 0.0);
  CHECK(t0 == 0.0);

  // pure couple: +-F at the two segment ends
  std::vector<Vec2> couple(sp.offsets.size(), Vec2{0, 0});
  couple.front() = {0.0, -1.0};
  couple.back() = {0.0, 1.0};
  auto [fc, tc] = aggregate_force_torque(sp, st, std::span<const Vec2>(couple));
  CHECK(norm(fc) < 1e-15);
  const double arm = sp.offsets.back().x - sp.offsets.front().x;
  CHECK(tc == Approx(arm));

  // torque-frame identity: about a shifted center
  RigidState st2 = st;
  st2.center += Vec2{3.0, -2.0};
  std::vector<Vec2> forces(sp.offsets.size(), Vec2{0.1, 0.05});
  auto [f1, t1] = aggregate_force_torque(sp, st, std::span<const Vec2>(forces));
  auto [f2, t2] = aggregate_force_torque(sp, st2, std::span<const Vec2>(forces));
  CHECK(norm(f1 - f2) < 1e-12);
  CHECK(t2 == Approx(t1).margin(1e-9));  // pose shift moves all points equally
}

TEST_CASE("indexed force aggregation validates membership") {
  auto lat = sphere_lattice();
  auto sp = init_sphere(lat, sphere_spec());
  auto st = rest_state(sp);
  std::vector<std::pair<int, Vec2>> forces = {{sp.point_ids[0], {1.0, 0.0}}};
  auto [f, t] = aggregate_force_torque(sp, st, std::span<const std::pair<int, Vec2>>(forces));
  CHECK(f.x == 1.0);
  forces[0].first = -5;
  CHECK_THROWS_AS(
      aggregate_force_torque(sp, st, std::span<const std::pair<int, Vec2>>(forces)),
      ConfigError);
}

TEST_CASE("angle guard trips beyond a quarter turn") {
  RigidState st;
  st.beta = 1.7;
  CHECK_THROWS_AS(st.check_angle(), NumericalError);
  st.beta = 0.3;
  CHECK_NOTHROW(st.check_angle());
}

// ---- boundary drivers ----

TEST_CASE("drivers start at rest and hold after the pulse") {
  BoundaryDriver d;
  d.kind = DriverKind::ZPulse;
  d.amplitude = 5.0;
  d.tau = 2.0;
  const Vec2 rest{1.0, -0.5};
  CHECK(norm(d.position(rest, 0.0) - rest) == 0.0);
  CHECK(d.position(rest, 2.0).z == Approx(-0.5 + 5.0));
  CHECK(d.position(rest, 7.0).z == Approx(-0.5 + 5.0));
  CHECK(d.position(rest, 2.0).x == 1.0);
  CHECK(d.settle_time() == 2.0);

  d.kind = DriverKind::XPulse;
  d.amplitude = 0.37;
  CHECK(d.position(rest, 9.0).x == Approx(1.37));
  CHECK(d.position(rest, 9.0).z == -0.5);
}

TEST_CASE("smoothstep ramp is continuous with flat ends") {
  BoundaryDriver d;
  d.kind = DriverKind::ZPulse;
  d.amplitude = 1.0;
  d.tau = 1.0;
  // C1 at both ends: finite-difference slope vanishes
  const double eps = 1e-6;
  CHECK(std::abs(d.offset(eps).z - d.offset(0.0).z) / eps < 1e-5);
  CHECK(std::abs(d.offset(1.0).z - d.offset(1.0 - eps).z) / eps < 1e-5);
  CHECK(d.offset(0.5).z == Approx(0.5));
  d.ramp = RampShape::Linear;
  CHECK(d.offset(0.25).z == Approx(0.25));
}

TEST_CASE("harmonic driver crosses zero and can stop after a burst") {
  BoundaryDriver d;
  d.kind = DriverKind::Harmonic;
  d.amplitude = 2.0;
  d.omega_ex = 3.0;
  const Vec2 rest{0, 0};
  CHECK(d.position(rest, M_PI / 3.0).z == Approx(0.0).margin(1e-12));
  CHECK(d.settle_time() > 1e200);
  d.burst_periods = 3.0;
  const double t_end = 3.0 * 2.0 * M_PI / 3.0;
  CHECK(d.settle_time() == Approx(t_end));
  CHECK(d.offset(t_end + 0.1).z == 0.0);
  CHECK(d.offset(t_end - 1e-9).z == Approx(0.0).margin(1e-6));
}

TEST_CASE("driver validation and scenario mapping") {
  BoundaryDriver d;
  d.kind = DriverKind::ZPulse;
  CHECK_THROWS_AS(d.validate(), ConfigError);  // no rise time
  d.tau = 0.1;
  CHECK_NOTHROW(d.validate());

  CHECK(excitation_for_scenario("fig4").kind == DriverKind::ZPulse);
  CHECK(excitation_for_scenario("fig4").amplitude == 5.0);
  CHECK(excitation_for_scenario("fig5", 350.0).amplitude == Approx(3.5));
  CHECK_THROWS_AS(excitation_for_scenario("fig5"), ConfigError);
  CHECK(excitation_for_scenario("fig7").kind == DriverKind::XPulse);
  CHECK(excitation_for_scenario("fig7").amplitude == Approx(0.37));
  CHECK(excitation_for_scenario("fig8").kind == DriverKind::Harmonic);
  CHECK(excitation_for_scenario("hold").kind == DriverKind::Hold);
  CHECK_THROWS_AS(excitation_for_scenario("nope"), ConfigError);
}
