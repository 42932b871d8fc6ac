#include "tmscat/run.hpp"

#include <algorithm>
#include <ios>

#include "tmscat/dsao.hpp"
#include "tmscat/mie.hpp"
#include "tmscat/pmchwt.hpp"

namespace tmscat {

Formulation parse_formulation(const std::string& name) {
  if (name == "dsao") return Formulation::Dsao;
  if (name == "pmchwt") return Formulation::Pmchwt;
  if (name == "mie") return Formulation::Mie;
  throw ValidationError("unknown formulation '" + name + "'");
}

namespace {

std::string final_label(int depth) {
  const std::string n = std::to_string(depth);
  return "L_" + n + "+Phat_" + n + "^(" + n + ")Y_s" + n;
}

// Several groups solve their own depth-1 problems; the report wants one
// record per depth.
std::vector<LayerSolveRecord> merge_by_depth(std::vector<LayerSolveRecord> recs) {
  std::stable_sort(recs.begin(), recs.end(),
                   [](const auto& a, const auto& b) { return a.depth < b.depth; });
  std::vector<LayerSolveRecord> out;
  for (auto& r : recs) {
    if (!out.empty() && out.back().depth == r.depth) {
      auto& o = out.back();
      o.conditions.insert(o.conditions.end(), r.conditions.begin(), r.conditions.end());
      o.flops += r.flops;
    } else {
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  if (!(cfg.freq > 0.0)) throw ValidationError("frequency must be positive");
  if (cfg.n_angles < 1) throw ValidationError("need at least one observation angle");
  validate(cfg.scene);
  RunResult r;
  const auto angles = uniform_angles(cfg.n_angles);
  const Excitation exc{cfg.phi_inc, 1.0, cfg.freq};

  if (cfg.formulation == Formulation::Mie) {
    r.curve = mie_layered_tm(radial_stack(cfg.scene), cfg.freq, angles, cfg.phi_inc);
    return r;
  }

  r.mesh = cfg.mesh_h ? build_scene_mesh_uniform(cfg.scene, *cfg.mesh_h)
                      : build_scene_mesh(cfg.scene, cfg.freq, cfg.ppw);
  if (cfg.formulation == Formulation::Pmchwt) {
    PmchwtOptions po{cfg.conditions, cfg.quadrature};
    PmchwtResult p = pmchwt_solve(cfg.scene, cfg.freq, r.mesh, exc, angles, po);
    r.curve = std::move(p.curve);
    r.report.unknowns_pmchwt = p.unknowns;
    r.report.flops_pmchwt = pmchwt_flops(p.unknowns);
    r.report.assembly_entries_pmchwt = pmchwt_assembly_entries(cfg.scene, r.mesh);
    r.report.pmchwt_condition = p.condition;
    r.report.pmchwt_condition_si = p.condition_si;
    return r;
  }

  DsaoResult d = build_dsao(cfg.scene, cfg.freq, r.mesh, {cfg.conditions, cfg.quadrature});
  const Kernel k0 = make_kernel(cfg.scene.background, cfg.freq);
  const CMatrix G_ext = assemble_self(d.outer, k0, cfg.quadrature).G();
  const CVector E_inc = incident_vector(d.outer, k0.k, exc);
  LayerSolveRecord final_rec;
  final_rec.depth = d.Ys.depth + 1;
  r.fields = d.bare_pec ? solve_pec_efie(G_ext, E_inc, {&final_rec, cfg.conditions})
                        : solve_exterior(d.Ys, G_ext, d.outer.lengths, E_inc, final_label(d.Ys.depth),
                                         {&final_rec, cfg.conditions});
  r.curve = rcs(r.fields.J, d.outer, k0.k, k0.omega_mu(), angles, exc.E0);

  r.report.layers = merge_by_depth(d.records);
  r.report.final_system = r.fields.final_system;
  r.report.unknowns_dsao = d.outer.size();
  r.report.flops_dsao = d.linalg_flops + final_rec.flops;
  r.report.assembly_entries_dsao = d.assembly_entries + double(d.outer.size()) * d.outer.size();
  if (cfg.pmchwt_estimate) {
    r.report.unknowns_pmchwt = pmchwt_unknowns(cfg.scene, r.mesh);
    r.report.flops_pmchwt = pmchwt_flops(r.report.unknowns_pmchwt);
    r.report.assembly_entries_pmchwt = pmchwt_assembly_entries(cfg.scene, r.mesh);
  }
  return r;
}

int exit_code_for(std::exception_ptr e, std::string& message) {
  try {
    std::rethrow_exception(e);
  } catch (const ParseError& x) {
    message = x.what();
    return kExitParse;
  } catch (const SingularMatrixError& x) {
    message = x.what();
    return kExitSingular;
  } catch (const ValidationError& x) {
    message = x.what();
    return kExitValidation;
  } catch (const GeometryError& x) {
    message = x.what();
    return kExitValidation;
  } catch (const std::ios_base::failure& x) {
    message = x.what();
    return kExitIo;
  } catch (const ConvergenceError& x) {
    message = x.what();
    return kExitNumerical;
  } catch (const OverflowError& x) {
    message = x.what();
    return kExitNumerical;
  } catch (const DomainError& x) {
    message = x.what();
    return kExitNumerical;
  } catch (const std::exception& x) {
    message = x.what();
    return kExitNumerical;
  }
}

}  // namespace tmscat
