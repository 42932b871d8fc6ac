#include "tmscat/pmchwt.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "tmscat/diagnostics.hpp"
#include "tmscat/linalg.hpp"
#include "tmscat/quadrature.hpp"
#include "tmscat/special_functions.hpp"

namespace tmscat {

namespace {

struct Interface {
  const DiscretizedBoundary* db;
  bool pec;
  int off = 0;  // first unknown (H block, then E block)
};

struct Region {
  Medium medium;
  std::vector<int> boundaries;  // interface ids
  std::vector<int> sign;        // +1 outer boundary of the region, -1 inner
  bool exterior = false;
};

struct Topology {
  std::vector<Interface> ifs;
  std::vector<Region> regions;
  int unknowns = 0;
};

Topology topology(const Scene& s, const SceneMesh& mesh) {
  Topology t;
  std::vector<int> outers;  // interface ids bounding the shared region from inside
  for (std::size_t g = 0; g < s.groups.size(); ++g) {
    const auto& layers = s.groups[g].layers;
    int prev = -1;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const int id = int(t.ifs.size());
      t.ifs.push_back({&mesh.groups[g][l], layers[l].pec});
      if (!layers[l].pec) {
        Region r{layers[l].medium, {id}, {+1}};
        if (prev >= 0) {
          r.boundaries.push_back(prev);
          r.sign.push_back(-1);
        }
        t.regions.push_back(r);
      }
      prev = id;
    }
    outers.push_back(prev);
  }
  for (std::size_t i = 0; i < s.shells.size(); ++i) {
    const int id = int(t.ifs.size());
    t.ifs.push_back({&mesh.shells[i], false});
    Region r{s.shells[i].medium, {id}, {+1}};
    for (int o : outers) {
      r.boundaries.push_back(o);
      r.sign.push_back(-1);
    }
    t.regions.push_back(r);
    outers = {id};
  }
  Region ext{s.background, {}, {}, true};
  for (int o : outers) {
    ext.boundaries.push_back(o);
    ext.sign.push_back(-1);
  }
  t.regions.push_back(ext);
  int off = 0;
  for (auto& f : t.ifs) {
    f.off = off;
    off += f.db->size() * (f.pec ? 1 : 2);
  }
  t.unknowns = off;
  return t;
}


constexpr double kDecay = 45.0;

struct PointKernel {
  cplx k;
  double abs_k, im_k;

  // G and dG/drho
  std::pair<cplx, cplx> eval(double rho) const {
    if (im_k * rho > kDecay) return {0.0, 0.0};
    const Hankel01 h = hankel2_01(k * rho);
    return {-0.25 * kJ * h.h0, 0.25 * kJ * k * h.h1};
  }
};

double point_segment_distance(const Point& r, const Point& a, const Point& b) {
  const Point d = b - a;
  const double t = std::clamp((r - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (r - (a + t * d)).norm();
}

struct PointIntegrals {
  cplx S = 0.0;   // int G ds'
  cplx Kn = 0.0;  // int dG/dn_r ds'
};

// r off the source piece a -> b.
void regular_piece(PointIntegrals& acc, const PointKernel& pk, const Point& r, const Point& n,
                   const Point& a, const Point& b, int depth) {
  const double len = (b - a).norm();
  const double dist = point_segment_distance(r, a, b);
  if (pk.im_k * dist > kDecay) return;
  if (depth < 40 && (len > dist || pk.abs_k * len > 2.0)) {
    const Point m = 0.5 * (a + b);
    regular_piece(acc, pk, r, n, a, m, depth + 1);
    regular_piece(acc, pk, r, n, m, b, depth + 1);
    return;
  }
  const GaussRule& g = gauss_legendre(8);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const Point p = a + 0.5 * (1.0 + g.x[i]) * (b - a);
    const double w = 0.5 * len * g.w[i];
    const Point d = r - p;
    const double rho = d.norm();
    auto [G, dG] = pk.eval(rho);
    acc.S += w * G;
    acc.Kn += w * dG * d.dot(n) / rho;
  }
}

// int_0^h G(s) ds, log-singular at s = 0.
cplx singular_line(const PointKernel& pk, double h) {
  const double top = std::min(h, kDecay / std::max(pk.im_k, 1e-300));
  const GaussRule& g = gauss_legendre(12);
  cplx acc = 0.0;
  double hi = top;
  for (int level = 0; level < 60 && hi > 1e-9 * top / std::max(1.0, pk.abs_k * top); ++level) {
    const double lo = level < 59 ? 0.15 * hi : 0.0;
    const int pieces = std::max(1, int(std::ceil(pk.abs_k * (hi - lo) / 2.0)));
    for (int p = 0; p < pieces; ++p) {
      const double a = lo + (hi - lo) * p / pieces, b = lo + (hi - lo) * (p + 1) / pieces;
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double s = 0.5 * (a + b) + 0.5 * (b - a) * g.x[i];
        acc += 0.5 * (b - a) * g.w[i] * pk.eval(s).first;
      }
    }
    hi = lo;
  }
  // remaining [0, hi]: G ~ alpha + beta ln s
  if (hi > 0.0) {
    const cplx alpha = -0.25 * kJ * (1.0 - kJ * (2.0 / kPi) * (std::log(pk.k / 2.0) + kEulerGamma));
    const cplx beta = -0.25 * kJ * (-kJ * 2.0 / kPi);
    acc += alpha * hi + beta * (hi * std::log(hi) - hi);
  }
  return acc;
}

// Collocation at the midpoint of test segment m of the H-continuity
// operators: K' (normal derivative of the single layer) and the finite-part
// hypersingular W through the tangential-derivative identity.
struct Collocation {
  CMatrix K, W;
};

Collocation collocate(const DiscretizedBoundary& test, const DiscretizedBoundary& src, bool same,
                      const Kernel& kern) {
  const PointKernel pk{kern.k, std::abs(kern.k), std::abs(kern.k.imag())};
  const int mt = test.size(), ms = src.size();
  Collocation c{CMatrix::Zero(mt, ms), CMatrix::Zero(mt, ms)};
  const cplx k2 = kern.k * kern.k;
  for (int i = 0; i < mt; ++i) {
    const Point r = test.midpoints.col(i), n = test.normals.col(i);
    for (int j = 0; j < ms; ++j) {
      const Point a = src.start(j), b = src.end(j);
      const Point tj = src.tangent(j), nj = src.normals.col(j);
      PointIntegrals I;
      if (same && i == j) {
        I.S = 2.0 * singular_line(pk, 0.5 * src.lengths[j]);
      } else {
        if (pk.im_k * point_segment_distance(r, a, b) > kDecay) continue;
        regular_piece(I, pk, r, n, a, b, 0);
      }
      c.K(i, j) = I.Kn;
      // W = k^2 (n.n') int G - [((n.n') t' - (n.t') n') . grad G]_a^b
      const Point v = n.dot(nj) * tj - n.dot(tj) * nj;
      auto grad_term = [&](const Point& p) -> cplx {
        const Point d = r - p;
        const double rho = d.norm();
        return pk.eval(rho).second * v.dot(d) / rho;
      };
      c.W(i, j) = k2 * n.dot(nj) * I.S - (grad_term(b) - grad_term(a));
    }
  }
  return c;
}

}  // namespace

int pmchwt_unknowns(const Scene& s, const SceneMesh& mesh) { return topology(s, mesh).unknowns; }

double pmchwt_flops(int n) { return flops::lu(n) + flops::solve(n, 1); }

double pmchwt_assembly_entries(const Scene& s, const SceneMesh& mesh) {
  const Topology t = topology(s, mesh);
  double e = 0.0;
  for (const Region& R : t.regions) {
    double m = 0.0;
    for (int id : R.boundaries) m += t.ifs[id].db->size();
    e += m * m;
  }
  return e;
}

PmchwtResult pmchwt_solve(const Scene& s, double freq, const SceneMesh& mesh, const Excitation& exc,
                          const std::vector<double>& angles, const PmchwtOptions& opt) {
  Topology t = topology(s, mesh);
  const int N = t.unknowns;
  const Kernel k0 = make_kernel(s.background, freq);
  const double eta0 = k0.omega_mu() / k0.k.real();
  CMatrix A = CMatrix::Zero(N, N);
  CVector rhs = CVector::Zero(N);

  // Row blocks of interface t: E continuity (Galerkin) at t.off, H continuity
  // (midpoint collocation, scaled by eta0 * length) at t.off + m. Each side
  // contributes its representation; the outer side enters with +, the inner
  // with -, so the identity terms cancel.
  for (const Region& R : t.regions) {
    const Kernel kern = make_kernel(R.medium, freq);
    const cplx jwmu = kJ * kern.omega_mu();
    for (std::size_t a = 0; a < R.boundaries.size(); ++a) {
      const Interface& ft = t.ifs[R.boundaries[a]];
      const DiscretizedBoundary& test = *ft.db;
      const int mt = test.size();
      const double side = R.sign[a] < 0 ? 1.0 : -1.0;  // R outside t: +
      const int erow = ft.off, hrow = ft.off + mt;
      for (std::size_t b = 0; b < R.boundaries.size(); ++b) {
        const Interface& fs = t.ifs[R.boundaries[b]];
        const DiscretizedBoundary& src = *fs.db;
        const double sg = side * R.sign[b];
        const int ms = src.size();
        OperatorSet ops = a == b ? assemble_self(test, kern, opt.quadrature)
                                 : assemble(test, src, kern, opt.quadrature);
        A.block(erow, fs.off, mt, ms) += (sg / eta0) * ops.P;
        if (!fs.pec) A.block(erow, fs.off + ms, mt, ms) += sg * ops.U;
        if (ft.pec) continue;
        Collocation c = collocate(test, src, a == b, kern);
        const Eigen::VectorXd rs = test.lengths;  // row scale, eta0 folded into H
        A.block(hrow, fs.off, mt, ms) += sg * (rs.asDiagonal() * c.K);
        if (!fs.pec) A.block(hrow, fs.off + ms, mt, ms) -= (sg * eta0 / jwmu) * (rs.asDiagonal() * c.W);
      }
      if (R.exterior) {
        rhs.segment(erow, mt) = -incident_vector(test, k0.k, exc);
        if (!ft.pec) {
          const Point dir(std::cos(exc.phi_inc), std::sin(exc.phi_inc));
          for (int i = 0; i < mt; ++i) {
            const Point p = test.midpoints.col(i);
            const cplx Ei = exc.E0 * std::exp(-kJ * k0.k * dir.dot(p));
            const cplx dEi = -kJ * k0.k * dir.dot(test.normals.col(i)) * Ei;
            rhs[hrow + i] = -test.lengths[i] * eta0 * dEi / jwmu;
          }
        }
      }
    }
  }

  PmchwtResult res;
  res.unknowns = N;
  if (opt.conditions) {
    res.condition = condition_number(A);
    // SI unknowns (J in A/m, M in V/m), H rows in A: undo the impedance balance
    Eigen::VectorXd cs = Eigen::VectorXd::Ones(N), rs = Eigen::VectorXd::Ones(N);
    for (const Interface& f : t.ifs) {
      const int m = f.db->size();
      cs.segment(f.off, m).setConstant(eta0);
      if (!f.pec) rs.segment(f.off + m, m).setConstant(1.0 / eta0);
    }
    res.condition_si = condition_number(rs.asDiagonal() * A * cs.asDiagonal());
  }
  CVector x = lu_solve(A, rhs, "PMCHWT");

  // far field from the exterior region's boundary data
  const Region& ext = t.regions.back();
  res.curve.phi = angles;
  res.curve.sigma.assign(angles.size(), 0.0);
  std::vector<cplx> F(angles.size(), 0.0);
  const double k = k0.k.real();
  for (int id : ext.boundaries) {
    const Interface& f = t.ifs[id];
    const DiscretizedBoundary& db = *f.db;
    const int m = db.size();
    CVector H = x.segment(f.off, m) / eta0;
    CVector E = f.pec ? CVector(CVector::Zero(m)) : CVector(x.segment(f.off + m, m));
    if (t.regions.back().boundaries.size() == 1) {
      res.E_outer = E;
      res.H_outer = H;
    }
    for (std::size_t i = 0; i < angles.size(); ++i) {
      const Point dir(std::cos(angles[i]), std::sin(angles[i]));
      cplx acc = 0.0;
      for (int j = 0; j < m; ++j) {
        const Point tt = db.tangent(j);
        const double l = db.lengths[j];
        const double arg = 0.5 * k * dir.dot(tt) * l;
        const double sinc = std::abs(arg) < 1e-4 ? 1.0 - arg * arg / 6.0 : std::sin(arg) / arg;
        const cplx seg = std::exp(kJ * k * dir.dot(db.midpoints.col(j))) * l * sinc;
        acc += seg * (k0.omega_mu() * H[j] - k * dir.dot(db.normals.col(j)) * E[j]);
      }
      F[i] += -0.25 * acc;
    }
  }
  for (std::size_t i = 0; i < angles.size(); ++i) res.curve.sigma[i] = 4.0 * std::norm(F[i]) / (k * std::norm(exc.E0));
  return res;
}

}  // namespace tmscat
