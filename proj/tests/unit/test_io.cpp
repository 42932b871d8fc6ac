#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tmscat/run.hpp"
#include "tmscat/scene_io.hpp"

using namespace tmscat;
namespace fs = std::filesystem;

namespace {

int parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_scene(in);
  } catch (const ParseError& e) {
    return e.line;
  }
  return 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(TMSCAT_CLI) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WEXITSTATUS(st);
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / ("tmscat_test_" + name); }

}  // namespace

TEST_CASE("parse the shipped scenes") {
  const Scene c = load_scene(TMSCAT_SCENE_DIR "/coated_pec.scene");
  REQUIRE(c.groups.size() == 1);
  REQUIRE(c.groups[0].layers.size() == 2);
  CHECK(c.groups[0].layers[0].pec);
  CHECK(std::get<Circle>(c.groups[0].layers[1].boundary).radius == doctest::Approx(0.014));
  CHECK(c.groups[0].layers[1].medium == Medium{2.3, 1, 0});

  const Scene t = load_scene(TMSCAT_SCENE_DIR "/three_sectors.scene");
  CHECK(t.groups.size() == 3);
  CHECK(t.shells.size() == 3);
  const auto& sec = std::get<Sector>(t.groups[1].layers[0].boundary);
  CHECK(sec.start == doctest::Approx(kPi / 3));
  CHECK(sec.end == doctest::Approx(kPi));
  CHECK(t.groups[0].layers[0].medium.sigma == doctest::Approx(5.6e7));
}

TEST_CASE("scene syntax") {
  std::istringstream ok(
      "# comment\n"
      "background: 1 1 0\n"
      "\n"
      "layer 1: polygon(0, 0, 1, 0, 0, 1) 2 1 0   # trailing\n"
      "extension: 0.5\n");
  const Scene s = parse_scene(ok);
  CHECK(std::get<Polygon>(s.groups[0].layers[0].boundary).vertices.size() == 3);
  CHECK(s.extension == doctest::Approx(0.5));

  CHECK(parse_error_line("background: 1 1 0\nlayer 1: circle(0, 0) 2 1 0\n") == 2);
  CHECK(parse_error_line("background: 1 1 0\nlayer 2: circle(0, 0, 1) 2 1 0\n") == 2);
  CHECK(parse_error_line("background: 1 1 0\n\nlayer 1: square(1) 2 1 0\n") == 3);
  CHECK(parse_error_line("background: 1 1\n") == 1);
  CHECK(parse_error_line("background: 1 1 0\nlayer 1: circle(0, 0, 1) 2 1 x\n") == 2);
  CHECK(parse_error_line("layer 1: circle(0, 0, 1) 2 1 0\n") > 0);
  CHECK(parse_error_line("background: 1 1 0\ngroup\nlayer 1: circle(0, 0, 1) 2 1 0\n") > 0);

  std::istringstream bad_geom("background: 1 1 0\nlayer 1: circle(0, 0, 1) 2 1 0\nlayer 2: circle(0, 0, 0.5) 2 1 0\n");
  CHECK_THROWS_AS(parse_scene(bad_geom), ValidationError);
  CHECK_THROWS_AS(load_scene("/nonexistent/x.scene"), std::ios_base::failure);
}

TEST_CASE("CSV format") {
  RcsCurve c;
  c.phi = uniform_angles(360);
  c.sigma.assign(360, 0.0);
  for (int i = 0; i < 360; ++i) c.sigma[i] = 1e-3 * (1.0 + std::cos(c.phi[i])) + 1e-9 * i;
  c.sigma[7] = 0.0;
  std::ostringstream os;
  write_rcs_csv(os, c);
  const std::string text = os.str();
  CHECK(text.rfind("phi_deg,sigma_m,sigma_db\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 361);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("7.000000,0.00000000e+00,-inf\n") != std::string::npos);
  CHECK(text.find("\n1.000000,") != std::string::npos);

  std::istringstream in(text);
  const RcsCurve back = read_rcs_csv(in);
  REQUIRE(back.size() == 360);
  for (int i = 0; i < 360; ++i) {
    CHECK(back.phi[i] == doctest::Approx(c.phi[i]).epsilon(1e-8));
    CHECK(std::abs(back.sigma[i] - c.sigma[i]) <= 1e-8 * std::abs(c.sigma[i]));
  }
  std::istringstream junk("phi,sigma\n");
  CHECK_THROWS_AS(read_rcs_csv(junk), ParseError);
}

TEST_CASE("diagnostics report") {
  RunConfig cfg;
  cfg.scene = load_scene(TMSCAT_SCENE_DIR "/coated_pec.scene");
  cfg.freq = 30e9;
  cfg.ppw = 10;
  cfg.n_angles = 36;
  const RunResult r = run(cfg);
  std::ostringstream os;
  write_report(os, r.report);
  const std::string rep = os.str();
  CHECK(rep.find("depth,label,dim,cond") != std::string::npos);
  CHECK(rep.find("L_2+Phat_2^(2)Y_s2") != std::string::npos);
  CHECK(rep.find("unknown_ratio,") != std::string::npos);
  CHECK(r.report.unknowns_dsao == r.mesh.groups[0][1].size());
  CHECK(r.report.unknowns_pmchwt == r.mesh.groups[0][0].size() + 2 * r.mesh.groups[0][1].size());
  for (std::size_t i = 1; i < r.report.layers.size(); ++i)
    CHECK(r.report.layers[i].depth > r.report.layers[i - 1].depth);
}

TEST_CASE("multi-group records merge per depth") {
  RunConfig cfg;
  cfg.scene = load_scene(TMSCAT_SCENE_DIR "/three_sectors.scene");
  cfg.freq = 3e8;
  cfg.ppw = 8;
  cfg.n_angles = 8;
  cfg.conditions = false;
  const RunResult r = run(cfg);
  REQUIRE(r.report.layers.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(r.report.layers[i].depth == i + 1);
}

TEST_CASE("exit codes") {
  std::string msg;
  auto code = [&](auto thrower) {
    try {
      thrower();
    } catch (...) {
      return exit_code_for(std::current_exception(), msg);
    }
    return -1;
  };
  CHECK(code([] { throw ParseError(3, "x"); }) == kExitParse);
  CHECK(msg == "line 3: x");
  CHECK(code([] { throw ValidationError("x"); }) == kExitValidation);
  CHECK(code([] { throw GeometryError("x"); }) == kExitValidation);
  CHECK(code([] { throw SingularMatrixError("V_1^(2)"); }) == kExitSingular);
  CHECK(msg.find("V_1^(2)") != std::string::npos);
  CHECK(code([] { throw std::ios_base::failure("x"); }) == kExitIo);
  CHECK(code([] { throw ConvergenceError("x"); }) == kExitNumerical);

  RunConfig cfg;
  cfg.scene = load_scene(TMSCAT_SCENE_DIR "/three_sectors.scene");
  cfg.freq = 3e8;
  cfg.formulation = Formulation::Mie;
  CHECK(code([&] { run(cfg); }) == kExitValidation);
  CHECK_THROWS_AS(parse_formulation("mom"), ValidationError);
}

TEST_CASE("command line") {
  const std::string scene = TMSCAT_SCENE_DIR "/dielectric_cylinder.scene";
  const fs::path a = tmp("a.csv"), b = tmp("b.csv"), d = tmp("d.txt");
  const std::string base = "--scene " + scene + " --freq 3e7 --ppw 10 --angles 90";
  CHECK(cli(base + " --out " + a.string() + " --diagnostics " + d.string()) == kExitOk);
  CHECK(cli(base + " --out " + b.string()) == kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(d).find("unknowns_dsao") != std::string::npos);
  CHECK(cli(base + " --formulation mie --out " + b.string()) == kExitOk);

  CHECK(cli("--freq 3e8 --out " + a.string()) == kExitUsage);
  CHECK(cli(base + " --formulation bogus --out " + a.string()) == kExitUsage);
  CHECK(cli("--scene /nonexistent.scene --freq 3e8 --out " + a.string()) == kExitIo);
  CHECK(cli(base + " --out /nonexistent/dir/x.csv") == kExitIo);
  CHECK(cli("--scene " + scene + " --freq 3e7 --ppw 3 --out " + a.string()) == kExitValidation);
  CHECK(cli("--scene " TMSCAT_SCENE_DIR "/three_sectors.scene --freq 3e8 --formulation mie --out " + a.string()) ==
        kExitValidation);

  const fs::path bad = tmp("bad.scene");
  std::ofstream(bad) << "background: 1 1 0\nlayer 1: blob(1) 1 1 0\n";
  CHECK(cli("--scene " + bad.string() + " --freq 3e8 --out " + a.string()) == kExitParse);
  for (const auto& p : {a, b, d, bad}) fs::remove(p);
}
