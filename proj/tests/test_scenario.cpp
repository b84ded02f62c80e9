#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "cantisim/scenario.hpp"
#include "cantisim/svg.hpp"

using namespace cantisim;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kMinimalUniform = R"(# comment line
[scenario]
model = uniform   # trailing comment
[lattice]
points = 41
length = 23.1
)";

}  // namespace

TEST_CASE("fnv1a64 matches reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
}

TEST_CASE("format_number is compact and round-trips common values") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1525) == "0.1525");
  CHECK(format_number(-2.5e-7) == "-2.5e-07");
  for (double v : {3.5160153, 1e-300, 123456.789, 0.72}) {
    CHECK(std::stod(format_number(v)) == Catch::Approx(v).epsilon(1e-11));
  }
}

TEST_CASE("csv writer emits the exact expected bytes") {
  const auto path = std::filesystem::temp_directory_path() / "cantisim_csv_test.csv";
  {
    CsvWriter w(path.string(), {"a", "b"});
    w.row({1.0, 0.5});
    w.row("label", {2.0});
  }
  CHECK(slurp(path) == "a,b\n1,0.5\nlabel,2\n");
  std::filesystem::remove(path);
}

TEST_CASE("svg plot writes a parsable self-contained file") {
  const auto path = std::filesystem::temp_directory_path() / "cantisim_svg_test.svg";
  SvgPlot plot;
  plot.title = "two series";
  plot.xlabel = "t";
  plot.ylabel = "y";
  SvgSeries s1{"first", {0, 1, 2, 3}, {0, 1, 0, -1}};
  SvgSeries s2{"second", {0, 1, 2, 3}, {1, 0, -1, 0}};
  plot.series = {s1, s2};
  plot.markers.push_back({1.5, "mark"});
  write_svg_plot(path.string(), plot);

  const std::string text = slurp(path);
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("</svg>") != std::string::npos);
  CHECK(text.find("polyline") != std::string::npos);
  CHECK(text.find("two series") != std::string::npos);
  CHECK(text.find("first") != std::string::npos);
  CHECK(text.find("second") != std::string::npos);
  CHECK(text.find("mark") != std::string::npos);
  CHECK(text.find("href") == std::string::npos);  // no external references
  std::filesystem::remove(path);
}

TEST_CASE("minimal config parses with model defaults filled in") {
  const ScenarioConfig cfg = parse_scenario(kMinimalUniform);
  CHECK(cfg.model == ModelKind::Uniform);
  CHECK(cfg.lattice.points_outer_row == 41);
  CHECK(cfg.lattice.length_l == Catch::Approx(23.1));
  CHECK(cfg.duration_periods == 60.0);           // uniform default
  CHECK(cfg.samples_per_period == 300);
  CHECK(cfg.driver.kind == DriverKind::ZPulse);  // default excitation
  CHECK(cfg.driver.amplitude == Catch::Approx(0.231));
  REQUIRE(cfg.probes.size() == 1);
  CHECK(cfg.probes[0].kind == ProbeKind::EndPoint);
  CHECK(cfg.probes[0].axis == ProbeAxis::Z);
  CHECK_FALSE(cfg.load.has_value());
}

TEST_CASE("effective text is canonical: parse(effective) reproduces it") {
  SECTION("minimal uniform") {
    const ScenarioConfig cfg = parse_scenario(kMinimalUniform);
    const std::string echo = cfg.effective_text();
    CHECK(parse_scenario(echo).effective_text() == echo);
  }
  SECTION("every preset, desk and full scale") {
    for (const auto& name : preset_names()) {
      for (bool full : {false, true}) {
        const ScenarioConfig cfg = preset_scenario(name, full);
        const std::string echo = cfg.effective_text();
        INFO("preset " << name << (full ? " full" : " desk"));
        CHECK(parse_scenario(echo).effective_text() == echo);
      }
    }
  }
}

TEST_CASE("config parse errors carry line numbers and context") {
  using Catch::Matchers::ContainsSubstring;
  CHECK_THROWS_WITH(parse_scenario(""), ContainsSubstring("config is empty"));
  CHECK_THROWS_WITH(parse_scenario("[nope]\n"), ContainsSubstring("unknown section"));
  CHECK_THROWS_WITH(parse_scenario("[scenario]\nmodel = uniform\nwhat = 3\n"),
                    ContainsSubstring("line 3"));
  CHECK_THROWS_WITH(parse_scenario("[scenario]\nmodel = banana\n"),
                    ContainsSubstring("unknown model"));
  CHECK_THROWS_WITH(parse_scenario("points = 41\n"),
                    ContainsSubstring("outside any [section]"));
  CHECK_THROWS_WITH(parse_scenario("[lattice]\npoints = many\n"),
                    ContainsSubstring("expected a number"));
  CHECK_THROWS_WITH(parse_scenario("[lattice]\npoints = 41.5\n"),
                    ContainsSubstring("expected an integer"));
  CHECK_THROWS_WITH(parse_scenario("[lattice]\npoints\n"),
                    ContainsSubstring("expected key = value"));
  CHECK_THROWS_WITH(parse_scenario("[output]\ncsv = maybe\n"),
                    ContainsSubstring("expected on/off"));
}

TEST_CASE("model and section cross-validation") {
  using Catch::Matchers::ContainsSubstring;
  // uniform model must not carry a load
  CHECK_THROWS_WITH(
      parse_scenario("[scenario]\nmodel = uniform\n[load]\nmass_ratio = 0.5\nlf = 0.1\n"),
      ContainsSubstring("takes no [load]"));
  // loaded models require one
  CHECK_THROWS_WITH(parse_scenario("[scenario]\nmodel = loaded-simplified\n"),
                    ContainsSubstring("needs a [load]"));
  // sphere model wants a sphere load kind
  CHECK_THROWS_WITH(parse_scenario("[scenario]\nmodel = loaded-sphere\n[load]\nkind = "
                                   "distributed\nmass_ratio = 0.5\nlf = 0.1\n"),
                    ContainsSubstring("kind = sphere"));
  // continuum table section is exclusive to the continuum model
  CHECK_THROWS_WITH(parse_scenario("[scenario]\nmodel = uniform\n[continuum]\nbasis = 20\n"),
                    ContainsSubstring("requires model = continuum-only"));
  // continuum model takes no lattice-side sections
  CHECK_THROWS_WITH(
      parse_scenario("[scenario]\nmodel = continuum-only\n[driver]\nkind = zpulse\n"),
      ContainsSubstring("takes no [driver]"));
  // beta probe only makes sense with a sphere
  CHECK_THROWS_WITH(
      parse_scenario("[scenario]\nmodel = uniform\n[probes]\nprobe = beta\n"),
      ContainsSubstring("beta probe"));
  // seg probe needs an attachment segment
  CHECK_THROWS_WITH(
      parse_scenario("[scenario]\nmodel = uniform\n[probes]\nprobe = seg z\n"),
      ContainsSubstring("seg probe"));
}

TEST_CASE("load kind defaults from the chosen model") {
  const ScenarioConfig cfg = parse_scenario(
      "[scenario]\nmodel = loaded-sphere\n[load]\nmass_ratio = 0.75\nlf = 0.2\n"
      "radius = 2\n[lattice]\npoints = 41\nlength = 23.1\n");
  REQUIRE(cfg.load.has_value());
  CHECK(cfg.load->kind == LoadKind::RigidSphere);
  CHECK(cfg.lattice.load->radius_R == Catch::Approx(2.0));
}

TEST_CASE("probe grammar accepts every form") {
  const ScenarioConfig cfg = parse_scenario(
      "[scenario]\nmodel = loaded-sphere\n[load]\nkind = sphere\nmass_ratio = 0.75\n"
      "lf = 0.2\nradius = 2\n[lattice]\npoints = 41\nlength = 23.1\n"
      "[probes]\nprobe = end z\nprobe = tip x\nprobe = mid z\nprobe = seg z\n"
      "probe = beta\nprobe = point 17 x\n");
  REQUIRE(cfg.probes.size() == 6);
  CHECK(cfg.probes[0].kind == ProbeKind::EndPoint);
  CHECK(cfg.probes[1].kind == ProbeKind::AverageRightmostThree);
  CHECK(cfg.probes[1].axis == ProbeAxis::X);
  CHECK(cfg.probes[2].kind == ProbeKind::MidSpanPoint);
  CHECK(cfg.probes[3].kind == ProbeKind::AverageAttachmentRegion);
  CHECK(cfg.probes[4].kind == ProbeKind::SphereAngle);
  CHECK(cfg.probes[5].kind == ProbeKind::SinglePoint);
  CHECK(cfg.probes[5].point_id == 17);
  CHECK(cfg.probes[5].axis == ProbeAxis::X);

  using Catch::Matchers::ContainsSubstring;
  CHECK_THROWS_WITH(
      parse_scenario("[scenario]\nmodel = uniform\n[probes]\nprobe = corner z\n"),
      ContainsSubstring("unknown probe"));
  CHECK_THROWS_WITH(
      parse_scenario("[scenario]\nmodel = uniform\n[probes]\nprobe = end q\n"),
      ContainsSubstring("axis must be x or z"));
  CHECK_THROWS_WITH(
      parse_scenario("[scenario]\nmodel = uniform\n[probes]\nprobe = end z extra\n"),
      ContainsSubstring("trailing junk"));
}

TEST_CASE("driver and integrator keys parse") {
  const ScenarioConfig cfg = parse_scenario(
      "[scenario]\nmodel = uniform\n[lattice]\npoints = 41\nlength = 23.1\n"
      "[driver]\nkind = harmonic\namplitude = 0.3\nomega = 0.02\nburst_periods = 3\n"
      "ramp = linear\n[integrator]\ndt = auto\ntol = 1e-9\nmax_iterations = 40\n"
      "[spectral]\nbins = 512\nwindow = rect\nthreshold = 0.05\n[output]\nsvg = off\n");
  CHECK(cfg.driver.kind == DriverKind::Harmonic);
  CHECK(cfg.driver.omega_ex == Catch::Approx(0.02));
  CHECK(cfg.driver.burst_periods == Catch::Approx(3.0));
  CHECK(cfg.driver.ramp == RampShape::Linear);
  CHECK(cfg.integrator.dt == 0.0);
  CHECK(cfg.integrator.iteration_tol == Catch::Approx(1e-9));
  CHECK(cfg.integrator.max_iterations == 40);
  CHECK(cfg.spectral.bins == 512);
  CHECK(cfg.spectral.window == WindowKind::Rectangular);
  CHECK(cfg.spectral.threshold == Catch::Approx(0.05));
  CHECK_FALSE(cfg.emit_svg);
  CHECK(cfg.emit_csv);
}

TEST_CASE("presets carry their documented parameters") {
  using Catch::Matchers::ContainsSubstring;

  const auto eq = preset_scenario("table-eq6");
  CHECK(eq.model == ModelKind::Uniform);
  CHECK(eq.lattice.points_outer_row == 201);
  CHECK(eq.lattice.length_l == Catch::Approx(200.0 / std::sqrt(3.0)));
  CHECK(eq.duration_periods == 60.0);
  CHECK(eq.driver.kind == DriverKind::ZPulse);

  const auto f4full = preset_scenario("fig4", true);
  CHECK(f4full.lattice.points_outer_row == 607);
  CHECK(f4full.lattice.length_l == Catch::Approx(350.0));

  const auto f5 = preset_scenario("fig5");
  CHECK(f5.model == ModelKind::LoadedSimplified);
  REQUIRE(f5.load.has_value());
  CHECK(f5.load->mass_ratio == Catch::Approx(0.72));
  CHECK(f5.load->lf_hat == Catch::Approx(0.05));

  const auto f7 = preset_scenario("fig7");
  CHECK(f7.model == ModelKind::LoadedSphere);
  CHECK(f7.lattice.length_l == Catch::Approx(290.0));
  CHECK(f7.lattice.points_outer_row == 201);
  REQUIRE(f7.load.has_value());
  CHECK(f7.load->radius_R == Catch::Approx(60.0));
  CHECK(f7.load->mass_ratio == Catch::Approx(0.75));
  CHECK(f7.load->lf_hat == Catch::Approx(0.1525));
  CHECK(f7.load->inertia == InertiaModel::Solid);
  CHECK(f7.driver.kind == DriverKind::XPulse);
  CHECK(f7.driver.amplitude == Catch::Approx(0.37));
  CHECK(preset_scenario("fig7", true).lattice.points_outer_row == 503);
  CHECK(preset_scenario("fig7", true).lattice.length_l == Catch::Approx(290.0));

  const auto f8 = preset_scenario("fig8");
  CHECK(f8.model == ModelKind::LoadedSimplified);
  CHECK(f8.driver.kind == DriverKind::Harmonic);
  CHECK(f8.driver.omega_ex == 0.0);  // auto: resolved at run time
  CHECK(f8.driver.burst_periods == Catch::Approx(3.0));
  CHECK(f8.load->lf_hat == Catch::Approx(0.1525));

  const auto f9 = preset_scenario("fig9");
  CHECK(f9.model == ModelKind::ContinuumOnly);
  CHECK(f9.continuum.lf_hat == Catch::Approx(0.05));
  CHECK(f9.continuum.mass_ratio == Catch::Approx(0.72));
  CHECK(f9.continuum.basis == 50);

  const auto f11 = preset_scenario("fig11");
  CHECK(f11.model == ModelKind::LoadedSphere);
  CHECK(f11.load->inertia == InertiaModel::Shell);
  CHECK(f11.load->lf_hat == Catch::Approx(0.10893));
  const bool has_beta = [&] {
    for (const auto& p : f11.probes)
      if (p.kind == ProbeKind::SphereAngle) return true;
    return false;
  }();
  CHECK(has_beta);

  CHECK_THROWS_WITH(preset_scenario("nope"), ContainsSubstring("table-eq6"));
}
