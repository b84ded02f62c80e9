#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cantisim/spectral.hpp"

using namespace cantisim;

namespace {

std::vector<double> time_grid(double t_end, size_t n) {
  std::vector<double> t(n);
  const double dt = t_end / double(n - 1);
  for (size_t k = 0; k < n; ++k) t[k] = k * dt;
  return t;
}

std::vector<double> tone_sum(const std::vector<double>& t,
                             std::vector<std::pair<double, double>> tones) {
  std::vector<double> s(t.size(), 0.0);
  for (size_t k = 0; k < t.size(); ++k)
    for (auto [a, w] : tones) s[k] += a * std::sin(w * t[k]);
  return s;
}

SpectrumConfig band(double lo, double hi, WindowKind w, int bins = 4096) {
  SpectrumConfig cfg;
  cfg.omega_min = lo;
  cfg.omega_max = hi;
  cfg.bins = bins;
  cfg.window = w;
  return cfg;
}

}  // namespace

TEST_CASE("single tone is located and weighed correctly") {
  const double w0 = 1.37, amp = 0.6, T = 400.0;
  const auto t = time_grid(T, 8000);
  const auto s = tone_sum(t, {{amp, w0}});

  SECTION("rectangular window") {
    const auto spec = fourier_magnitude(t, s, band(0.5, 2.5, WindowKind::Rectangular));
    const auto peaks = find_peaks(spec, 0.25, 3.5 * spec.rayleigh_width());
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].omega == Catch::Approx(w0).epsilon(1e-3));
    CHECK(peaks[0].magnitude == Catch::Approx(amp * T / 2.0).epsilon(0.02));
  }
  SECTION("hann window halves the weight") {
    const auto spec = fourier_magnitude(t, s, band(0.5, 2.5, WindowKind::Hann));
    const auto peaks = find_peaks(spec, 0.02, 3.5 * spec.rayleigh_width());
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].omega == Catch::Approx(w0).epsilon(1e-3));
    CHECK(peaks[0].magnitude == Catch::Approx(amp * T / 4.0).epsilon(0.02));
  }
}

TEST_CASE("tones four rayleigh widths apart resolve") {
  const double T = 500.0;
  const double dw = 4.0 * 2.0 * M_PI / T;
  const double w0 = 1.0, w1 = w0 + dw;
  const auto t = time_grid(T, 10000);
  const auto s = tone_sum(t, {{1.0, w0}, {0.7, w1}});

  for (WindowKind win : {WindowKind::Hann, WindowKind::Rectangular}) {
    const auto spec = fourier_magnitude(t, s, band(0.7, 1.4, win, 8192));
    const double thr = win == WindowKind::Hann ? 0.02 : 0.10;
    const auto peaks = find_peaks(spec, thr, 3.5 * spec.rayleigh_width());
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].omega == Catch::Approx(w0).epsilon(0.01));
    CHECK(peaks[1].omega == Catch::Approx(w1).epsilon(0.01));
  }
}

TEST_CASE("tones below one rayleigh width cannot be separated") {
  // Coherent close tones beat; their windowed transform is one broad lobe
  // plus weak interference ripple. The contract is that they do NOT resolve
  // into two tones, not that the ripple vanishes.
  const double T = 500.0;
  const double dw = 0.8 * 2.0 * M_PI / T;
  const double w0 = 1.0, w1 = w0 + dw;
  const auto t = time_grid(T, 10000);
  const auto s = tone_sum(t, {{1.0, w0}, {0.9, w1}});
  const auto spec = fourier_magnitude(t, s, band(0.7, 1.4, WindowKind::Hann, 8192));
  const auto peaks = find_peaks(spec, 0.10, 3.5 * spec.rayleigh_width());
  REQUIRE(peaks.size() == 1);
  // reads as a single tone near the pair, biased by up to ~one rayleigh width
  const double centroid = (1.0 * w0 + 0.9 * w1) / 1.9;
  CHECK(std::abs(peaks[0].omega - centroid) < spec.rayleigh_width());
}

TEST_CASE("threshold controls which tones are reported") {
  const double T = 600.0;
  const auto t = time_grid(T, 12000);
  const auto s = tone_sum(t, {{1.0, 1.0}, {0.01, 1.8}});
  const auto spec = fourier_magnitude(t, s, band(0.5, 2.5, WindowKind::Hann, 8192));
  const double merge = 3.5 * spec.rayleigh_width();
  CHECK(find_peaks(spec, 0.02, merge).size() == 1);
  const auto loose = find_peaks(spec, 0.005, merge);
  REQUIRE(loose.size() == 2);
  CHECK(loose[1].omega == Catch::Approx(1.8).epsilon(0.01));
}

TEST_CASE("hann sidelobes of a strong tone are not reported as peaks") {
  const double T = 400.0;
  const auto t = time_grid(T, 8000);
  const auto s = tone_sum(t, {{1.0, 1.3}});
  const auto spec = fourier_magnitude(t, s, band(0.8, 1.8, WindowKind::Hann, 8192));
  const auto peaks = find_peaks(spec, 0.02, 3.5 * spec.rayleigh_width());
  CHECK(peaks.size() == 1);
}

TEST_CASE("magnitude is linear in amplitude and mean free") {
  const auto t = time_grid(300.0, 6000);
  const auto s1 = tone_sum(t, {{0.5, 1.1}});
  auto s2 = tone_sum(t, {{1.0, 1.1}});
  for (auto& v : s2) v += 17.0;  // large offset must not matter
  const auto cfg = band(0.8, 1.4, WindowKind::Hann);
  const double merge = 3.5 * 2.0 * M_PI / 300.0;
  const auto p1 = find_peaks(fourier_magnitude(t, s1, cfg), 0.02, merge);
  const auto p2 = find_peaks(fourier_magnitude(t, s2, cfg), 0.02, merge);
  REQUIRE(p1.size() == 1);
  REQUIRE(p2.size() == 1);
  CHECK(p2[0].magnitude / p1[0].magnitude == Catch::Approx(2.0).epsilon(1e-3));

  std::vector<double> flat(t.size(), 3.3);
  const auto spec = fourier_magnitude(t, flat, cfg);
  CHECK(*std::max_element(spec.magnitude.begin(), spec.magnitude.end()) <
        1e-12 * t.size());
}

TEST_CASE("parabolic refinement beats the grid resolution") {
  const double T = 350.0;
  const auto t = time_grid(T, 7000);
  SpectrumConfig cfg = band(0.5, 2.0, WindowKind::Hann, 1024);
  const double cell = (cfg.omega_max - cfg.omega_min) / double(cfg.bins - 1);
  const double w0 = 1.2 + 0.37 * cell;  // deliberately off grid
  const auto s = tone_sum(t, {{1.0, w0}});
  const auto peaks = find_peaks(fourier_magnitude(t, s, cfg), 0.02,
                                3.5 * 2.0 * M_PI / T);
  REQUIRE(peaks.size() == 1);
  CHECK(std::abs(peaks[0].omega - w0) < 0.2 * cell);
}

TEST_CASE("spectrum input validation") {
  const auto t = time_grid(100.0, 512);
  std::vector<double> s(512, 0.0);
  SpectrumConfig cfg = band(0.1, 1.0, WindowKind::Rectangular);

  auto bad_t = t;
  bad_t[100] += 1e-3;
  CHECK_THROWS_AS(fourier_magnitude(bad_t, s, cfg), ConfigError);
  CHECK_THROWS_AS(fourier_magnitude(t, std::vector<double>(10, 0.0), cfg), ConfigError);
  cfg.omega_max = cfg.omega_min;
  CHECK_THROWS_AS(fourier_magnitude(t, s, cfg), ConfigError);
  cfg = band(0.1, 1.0, WindowKind::Rectangular);
  cfg.bins = 4;
  CHECK_THROWS_AS(fourier_magnitude(t, s, cfg), ConfigError);
}

TEST_CASE("simulated oscillator peak matches the discrete time frequency") {
  // one spring, one mass: the midpoint scheme advances phase by exactly
  // 2 atan(w dt / 2) per step, so the spectrum of the simulated motion must
  // peak at (2/dt) atan(w dt / 2) rather than at w itself.
  Lattice lat;
  lat.config.points_outer_row = 2;
  lat.points.push_back({0, {0.0, 0.0}, 1.0, PointKind::Anchored});
  lat.points.push_back({1, {1.0, 0.0}, 2.5, PointKind::Free});
  lat.springs.push_back({0, 1, 1.0, 4.0});
  const double w = std::sqrt(4.0 / 2.5);
  const double dt = 0.05;
  const double w_discrete = (2.0 / dt) * std::atan(0.5 * w * dt);

  Dynamics dyn(lat);
  SimState st = dyn.state();
  st.positions[1].x = 1.05;
  dyn.set_state(st);
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.iteration_tol = 1e-13;
  const BoundaryDriver drv;

  std::vector<double> times, disp;
  times.push_back(dyn.time());
  disp.push_back(dyn.position(1).x - 1.0);
  for (int i = 0; i < 8000; ++i) {
    dyn.step(cfg, drv);
    times.push_back(dyn.time());
    disp.push_back(dyn.position(1).x - 1.0);
  }
  const auto spec = fourier_magnitude(times, disp, band(0.8, 1.8, WindowKind::Hann, 4096));
  const auto peaks = find_peaks(spec, 0.02, 3.5 * spec.rayleigh_width());
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0].omega == Catch::Approx(w_discrete).margin(1e-4));
}

TEST_CASE("probes read the configured lattice locations") {
  LatticeConfig cfg;
  cfg.points_outer_row = 21;
  cfg.length_l = 20.0 / std::sqrt(3.0);
  LoadSpec load;
  load.kind = LoadKind::RigidSphere;
  load.mass_ratio = 0.75;
  load.lf_hat = 0.2;
  load.radius_R = 2.0;
  cfg.load = load;
  const Lattice lat = build_lattice(cfg);
  const RigidSphere sphere = init_sphere(lat, load);
  Dynamics dyn(lat, &sphere);

  SECTION("tip average uses the three rightmost non anchored points") {
    const auto probe = resolve_probe(lat, {ProbeKind::AverageRightmostThree, ProbeAxis::Z, -1});
    REQUIRE(probe.ids.size() == 3);
    double min_x = 1e300;
    for (int id : probe.ids) min_x = std::min(min_x, lat.points[id].rest.x);
    for (const auto& p : lat.points)
      if (p.kind != PointKind::Anchored &&
        std::find(probe.ids.begin(), probe.ids.end(), p.id) == probe.ids.end())
        CHECK(p.rest.x <= min_x + 1e-12);
    CHECK(probe.value(dyn) == 0.0);
    CHECK(probe.label == "tip_z");
  }
  SECTION("attachment average covers the marked segment") {
    const auto probe = resolve_probe(lat, {ProbeKind::AverageAttachmentRegion, ProbeAxis::Z, -1});
    CHECK(probe.ids == lat.attachment_ids);
    CHECK(probe.label == "seg_z");
  }
  SECTION("mid span picks a free point near l/2 on the axis") {
    const auto probe = resolve_probe(lat, {ProbeKind::MidSpanPoint, ProbeAxis::X, -1});
    REQUIRE(probe.ids.size() == 1);
    const auto& p = lat.points[probe.ids[0]];
    CHECK(std::abs(p.rest.x - 0.5 * cfg.length_l) < lat.h());
    CHECK(p.rest.z == Catch::Approx(0.0).margin(1e-12));
    CHECK(probe.label == "mid_x");
  }
  SECTION("sphere angle reads beta directly") {
    const auto probe = resolve_probe(lat, {ProbeKind::SphereAngle, ProbeAxis::Z, -1});
    SimState st = dyn.state();
    st.rigid->beta = 0.123;
    CHECK(probe.value(st) == 0.123);
    CHECK(probe.label == "beta");
  }
  SECTION("single point displacement on both axes") {
    const int id = lat.attachment_ids.front();
    SimState st = dyn.state();
    st.positions[id] += Vec2{0.5, -0.25};
    const auto px = resolve_probe(lat, {ProbeKind::SinglePoint, ProbeAxis::X, id});
    const auto pz = resolve_probe(lat, {ProbeKind::SinglePoint, ProbeAxis::Z, id});
    CHECK(px.value(st) == Catch::Approx(0.5));
    CHECK(pz.value(st) == Catch::Approx(-0.25));
  }
  SECTION("invalid probe requests throw") {
    CHECK_THROWS_AS(resolve_probe(lat, {ProbeKind::SinglePoint, ProbeAxis::Z, 99999}),
                    ConfigError);
    const Lattice bare = [] {
      LatticeConfig c;
      c.points_outer_row = 11;
      c.length_l = 10.0 / std::sqrt(3.0);
      return build_lattice(c);
    }();
    CHECK_THROWS_AS(
        resolve_probe(bare, {ProbeKind::AverageAttachmentRegion, ProbeAxis::Z, -1}),
        ConfigError);
    const auto beta_probe = resolve_probe(bare, {ProbeKind::SphereAngle, ProbeAxis::Z, -1});
    Dynamics bare_dyn(bare);
    CHECK_THROWS_AS(beta_probe.value(bare_dyn), ConfigError);
  }
}
