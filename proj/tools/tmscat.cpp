#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tmscat/run.hpp"
#include "tmscat/scene_io.hpp"

int main(int argc, char** argv) {
  using namespace tmscat;
  CLI::App app{"TM echo width of layered 2D objects"};
  std::string scene_path, out_path, diag_path, form = "dsao";
  double freq = 0.0;
  int ppw = 20, angles = 360;
  double mesh_h = 0.0, phi_inc = 0.0;
  std::optional<double> ext;
  app.add_option("--scene", scene_path, "scene description file")->required();
  app.add_option("--freq", freq, "frequency, Hz")->required();
  app.add_option("--ppw", ppw, "segments per wavelength (>= 6)");
  app.add_option("--mesh-h", mesh_h, "uniform segment length, m (overrides --ppw)");
  app.add_option("--formulation", form, "dsao, pmchwt or mie")
      ->check(CLI::IsMember({"dsao", "pmchwt", "mie"}));
  app.add_option("--angles", angles, "number of observation angles over 360 degrees");
  app.add_option("--phi-inc", phi_inc, "incidence direction, degrees");
  app.add_option("--out", out_path, "echo width CSV")->required();
  app.add_option("--diagnostics", diag_path, "condition number and cost report");
  app.add_option("--extension-d", ext, "fictitious boundary offset, m (overrides the scene)");
  bool no_cond = false;
  app.add_flag("--no-conditions", no_cond, "skip condition numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg;
    cfg.scene = load_scene(scene_path);
    if (ext) {
      if (*ext < 0.0) throw ValidationError("--extension-d must be non-negative");
      cfg.scene.extension = *ext;
    }
    cfg.freq = freq;
    cfg.ppw = ppw;
    if (mesh_h > 0.0) cfg.mesh_h = mesh_h;
    cfg.formulation = parse_formulation(form);
    cfg.n_angles = angles;
    cfg.phi_inc = phi_inc * kPi / 180.0;
    cfg.conditions = !no_cond;
    RunResult r = run(cfg);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + out_path);
    write_rcs_csv(out, r.curve);
    if (!out) throw std::ios_base::failure("write failed: " + out_path);
    if (!diag_path.empty()) {
      std::ofstream d(diag_path, std::ios::binary);
      if (!d) throw std::ios_base::failure("cannot write " + diag_path);
      write_report(d, r.report);
    }
  } catch (...) {
    std::string msg;
    const int rc = exit_code_for(std::current_exception(), msg);
    std::cerr << "tmscat: " << msg << "\n";
    return rc;
  }
  return kExitOk;
}
