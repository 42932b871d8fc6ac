#include "tmscat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tmscat {

cplx wavenumber(const Medium& m, double freq) {
  const double w = angular_frequency(freq);
  const cplx eps = cplx(kEps0 * m.eps_r, -m.sigma / w);
  cplx k = w * std::sqrt(kMu0 * m.mu_r * eps);
  return {std::abs(k.real()), -std::abs(k.imag())};
}

bool is_conductor_like(const Medium& m, double freq) {
  return m.sigma / (angular_frequency(freq) * kEps0 * m.eps_r) > 1.0;
}

double perimeter(const BoundarySpec& b) {
  struct V {
    double operator()(const Circle& c) const { return 2.0 * kPi * c.radius; }
    double operator()(const Polygon& p) const {
      double s = 0.0;
      const auto n = p.vertices.size();
      for (std::size_t i = 0; i < n; ++i) s += (p.vertices[(i + 1) % n] - p.vertices[i]).norm();
      return s;
    }
    double operator()(const Sector& s) const { return 2.0 * s.radius + s.radius * (s.end - s.start); }
  };
  return std::visit(V{}, b);
}

DiscretizedBoundary from_nodes(const Eigen::Matrix2Xd& nodes) {
  DiscretizedBoundary db;
  const int m = int(nodes.cols());
  db.starts.resize(2, m);
  db.ends.resize(2, m);
  db.midpoints.resize(2, m);
  db.normals.resize(2, m);
  db.lengths.resize(m);
  for (int i = 0; i < m; ++i) {
    Point a = nodes.col(i), b = nodes.col((i + 1) % m);
    Point t = b - a;
    double len = t.norm();
    if (!(len > 0.0)) throw GeometryError("degenerate segment " + std::to_string(i));
    db.starts.col(i) = a;
    db.ends.col(i) = b;
    db.lengths[i] = len;
    db.midpoints.col(i) = 0.5 * (a + b);
    db.normals.col(i) = Point(t.y(), -t.x()) / len;
  }
  return db;
}

namespace {

// Append points a + (b-a)*k/n for k = 0..n-1.
void split_edge(std::vector<Point>& out, const Point& a, const Point& b, double h) {
  const int n = std::max(1, int(std::ceil((b - a).norm() / h - 1e-12)));
  for (int k = 0; k < n; ++k) out.push_back(a + (b - a) * (double(k) / n));
}

Eigen::Matrix2Xd to_matrix(const std::vector<Point>& pts) {
  Eigen::Matrix2Xd m(2, pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) m.col(i) = pts[i];
  return m;
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_cross(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
  double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

double polygon_area(const std::vector<Point>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

void check_simple(const std::vector<Point>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        throw GeometryError("polygon is self-intersecting");
    }
}

struct Discretizer {
  double h;
  DiscretizedBoundary operator()(const Circle& c) const {
    if (!(c.radius > 0)) throw GeometryError("circle radius must be positive");
    const int m = int(std::ceil(2.0 * kPi * c.radius / h - 1e-12));
    Eigen::Matrix2Xd nodes(2, m);
    for (int k = 0; k < m; ++k) {
      double t = 2.0 * kPi * k / m;
      nodes.col(k) = c.center + c.radius * Point(std::cos(t), std::sin(t));
    }
    return from_nodes(nodes);
  }
  DiscretizedBoundary operator()(const Polygon& p) const {
    const auto& v = p.vertices;
    if (v.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
    if (polygon_area(v) <= 0.0) throw GeometryError("polygon vertices must be counter-clockwise");
    check_simple(v);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < v.size(); ++i) split_edge(pts, v[i], v[(i + 1) % v.size()], h);
    return from_nodes(to_matrix(pts));
  }
  DiscretizedBoundary operator()(const Sector& s) const {
    const double span = s.end - s.start;
    if (!(s.radius > 0) || !(span > 0) || span >= 2.0 * kPi)
      throw GeometryError("sector needs radius > 0 and 0 < end - start < 2*pi");
    std::vector<Point> pts;
    auto on_arc = [&](double t) { return Point(s.center + s.radius * Point(std::cos(t), std::sin(t))); };
    split_edge(pts, s.center, on_arc(s.start), h);
    const int m = int(std::ceil(s.radius * span / h - 1e-12));
    for (int k = 0; k < m; ++k) pts.push_back(on_arc(s.start + span * k / m));
    split_edge(pts, on_arc(s.end), s.center, h);
    return from_nodes(to_matrix(pts));
  }
};

}  // namespace

DiscretizedBoundary discretize(const BoundarySpec& b, double target_h) {
  if (!(target_h > 0)) throw GeometryError("target segment length must be positive");
  if (target_h >= perimeter(b) / 8.0)
    throw GeometryError("target segment length must be below perimeter/8");
  return std::visit(Discretizer{target_h}, b);
}

DiscretizedBoundary concat(const std::vector<DiscretizedBoundary>& parts) {
  DiscretizedBoundary out;
  int n = 0;
  for (const auto& p : parts) n += p.size();
  out.starts.resize(2, n);
  out.ends.resize(2, n);
  out.midpoints.resize(2, n);
  out.normals.resize(2, n);
  out.lengths.resize(n);
  int off = 0;
  for (const auto& p : parts) {
    out.starts.middleCols(off, p.size()) = p.starts;
    out.ends.middleCols(off, p.size()) = p.ends;
    out.midpoints.middleCols(off, p.size()) = p.midpoints;
    out.normals.middleCols(off, p.size()) = p.normals;
    out.lengths.segment(off, p.size()) = p.lengths;
    off += p.size();
  }
  return out;
}

DiscretizedBoundary transformed(const DiscretizedBoundary& db, double angle, const Point& shift) {
  Eigen::Matrix2d R;
  R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  DiscretizedBoundary out = db;
  out.starts = (R * db.starts).colwise() + shift;
  out.ends = (R * db.ends).colwise() + shift;
  out.midpoints = (R * db.midpoints).colwise() + shift;
  out.normals = R * db.normals;
  return out;
}

double signed_area(const DiscretizedBoundary& db) {
  double a = 0.0;
  for (int i = 0; i < db.size(); ++i) a += cross(db.start(i), db.end(i));
  return 0.5 * a;
}

bool contains(const DiscretizedBoundary& db, const Point& p) {
  // winding number
  int wn = 0;
  for (int i = 0; i < db.size(); ++i) {
    Point a = db.start(i), b = db.end(i);
    if (a.y() <= p.y()) {
      if (b.y() > p.y() && cross(b - a, p - a) > 0) ++wn;
    } else if (b.y() <= p.y() && cross(b - a, p - a) < 0) {
      --wn;
    }
  }
  return wn != 0;
}

const Medium& outer_medium(const Scene& s, int gi, int li) {
  const auto& layers = s.groups[gi].layers;
  if (li + 1 < int(layers.size())) return layers[li + 1].medium;
  if (!s.shells.empty()) return s.shells.front().medium;
  return s.background;
}

const Medium& shell_outer_medium(const Scene& s, int si) {
  if (si + 1 < int(s.shells.size())) return s.shells[si + 1].medium;
  return s.background;
}

namespace {

void check_medium(const Medium& m, const std::string& where) {
  if (!(m.eps_r > 0) || !(m.mu_r > 0) || !(m.sigma >= 0) || !std::isfinite(m.eps_r) ||
      !std::isfinite(m.mu_r) || !std::isfinite(m.sigma))
    throw ValidationError(where + ": need eps_r > 0, mu_r > 0, sigma >= 0");
}

DiscretizedBoundary probe(const BoundarySpec& b) { return discretize(b, perimeter(b) / 256.0); }

bool inside_strict(const DiscretizedBoundary& outer, const DiscretizedBoundary& inner) {
  for (int i = 0; i < inner.size(); ++i)
    if (!contains(outer, inner.start(i))) return false;
  for (int i = 0; i < inner.size(); ++i)
    for (int j = 0; j < outer.size(); ++j)
      if (segments_cross(inner.start(i), inner.end(i), outer.start(j), outer.end(j))) return false;
  return true;
}

bool disjoint(const DiscretizedBoundary& a, const DiscretizedBoundary& b) {
  for (int i = 0; i < a.size(); ++i)
    if (contains(b, a.start(i))) return false;
  for (int i = 0; i < b.size(); ++i)
    if (contains(a, b.start(i))) return false;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j)
      if (segments_cross(a.start(i), a.end(i), b.start(j), b.end(j))) return false;
  return true;
}

}  // namespace

void validate(const Scene& s) {
  check_medium(s.background, "background");
  if (s.groups.empty()) throw ValidationError("scene has no objects");
  if (!(s.extension >= 0)) throw ValidationError("extension distance must be >= 0");
  std::vector<DiscretizedBoundary> outers;
  for (std::size_t g = 0; g < s.groups.size(); ++g) {
    const auto& layers = s.groups[g].layers;
    const std::string gname = "group " + std::to_string(g + 1);
    if (layers.empty()) throw ValidationError(gname + " has no layers");
    std::optional<DiscretizedBoundary> prev;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::string where = gname + " layer " + std::to_string(l + 1);
      check_medium(layers[l].medium, where);
      if (layers[l].pec && l != 0) throw ValidationError(where + ": pec only allowed on the innermost layer");
      DiscretizedBoundary cur;
      try {
        cur = probe(layers[l].boundary);
      } catch (const GeometryError& e) {
        throw ValidationError(where + ": " + e.what());
      }
      if (prev && !inside_strict(cur, *prev))
        throw ValidationError(where + ": does not strictly enclose the previous boundary");
      prev = cur;
    }
    if (layers.size() == 1 && layers[0].pec && s.groups.size() > 1)
      throw ValidationError(gname + ": a bare pec object is only supported as the sole object");
    outers.push_back(*prev);
  }
  for (std::size_t a = 0; a < outers.size(); ++a)
    for (std::size_t b = a + 1; b < outers.size(); ++b)
      if (!disjoint(outers[a], outers[b]))
        throw ValidationError("groups " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                              " overlap");
  for (std::size_t i = 0; i < s.shells.size(); ++i) {
    const std::string where = "shell " + std::to_string(i + 1);
    check_medium(s.shells[i].medium, where);
    if (s.shells[i].pec) throw ValidationError(where + ": shells cannot be pec");
    DiscretizedBoundary cur = probe(s.shells[i].boundary);
    for (const auto& o : outers)
      if (!inside_strict(cur, o)) throw ValidationError(where + ": does not enclose every inner boundary");
    outers = {cur};
  }
}

int SceneMesh::outer_unknowns() const {
  if (fictitious) return fictitious->size();
  if (!shells.empty()) return shells.back().size();
  int n = 0;
  for (const auto& g : groups) n += g.back().size();
  return n;
}

int SceneMesh::total_segments() const {
  int n = 0;
  for (const auto& g : groups)
    for (const auto& b : g) n += b.size();
  for (const auto& b : shells) n += b.size();
  if (fictitious) n += fictitious->size();
  return n;
}

BoundarySpec fictitious_boundary(const Scene& s) {
  const double d = s.extension;
  const BoundarySpec* outer = nullptr;
  if (!s.shells.empty()) outer = &s.shells.back().boundary;
  else if (s.groups.size() == 1) outer = &s.groups[0].layers.back().boundary;
  if (outer)
    if (const auto* c = std::get_if<Circle>(outer)) return Circle{c->center, c->radius + d};
  // circumscribing circle about the centroid of the outermost contours
  std::vector<DiscretizedBoundary> parts;
  if (outer) parts.push_back(probe(*outer));
  else
    for (const auto& g : s.groups) parts.push_back(probe(g.layers.back().boundary));
  Point c(0, 0);
  double area = 0.0;
  for (const auto& p : parts) {
    for (int i = 0; i < p.size(); ++i) {
      double w = cross(p.start(i), p.end(i));
      c += w * (p.start(i) + p.end(i)) / 3.0;
      area += w;
    }
  }
  c /= area;
  double r = 0.0;
  for (const auto& p : parts)
    for (int i = 0; i < p.size(); ++i) r = std::max(r, (p.start(i) - c).norm());
  return Circle{c, r + d};
}

namespace {

double medium_h(const Medium& m, double freq, int ppw) {
  const double kr = std::abs(wavenumber(m, freq).real());
  return 2.0 * kPi / kr / ppw;
}

double boundary_h(const Medium& a, const Medium& b, const Medium& bg, double freq, int ppw, bool pec_a) {
  double h = std::numeric_limits<double>::infinity();
  if (!pec_a && !is_conductor_like(a, freq)) h = std::min(h, medium_h(a, freq, ppw));
  if (!is_conductor_like(b, freq)) h = std::min(h, medium_h(b, freq, ppw));
  if (!std::isfinite(h)) h = medium_h(bg, freq, ppw);
  return h;
}

template <typename HFn>
SceneMesh mesh_with(const Scene& s, HFn&& h_for) {
  SceneMesh m;
  for (std::size_t g = 0; g < s.groups.size(); ++g) {
    std::vector<DiscretizedBoundary> layers;
    for (std::size_t l = 0; l < s.groups[g].layers.size(); ++l)
      layers.push_back(discretize(s.groups[g].layers[l].boundary, h_for(int(g), int(l))));
    m.groups.push_back(std::move(layers));
  }
  for (std::size_t i = 0; i < s.shells.size(); ++i)
    m.shells.push_back(discretize(s.shells[i].boundary, h_for(-1, int(i))));
  if (s.extension > 0) {
    m.fictitious_spec = fictitious_boundary(s);
    m.fictitious = discretize(*m.fictitious_spec, h_for(-2, 0));
  }
  return m;
}

}  // namespace

SceneMesh build_scene_mesh(const Scene& s, double freq, int ppw) {
  if (ppw < 6) throw ValidationError("points per wavelength must be >= 6");
  if (!(freq > 0)) throw ValidationError("frequency must be positive");
  return mesh_with(s, [&](int g, int l) {
    if (g == -2) return medium_h(s.background, freq, ppw);
    if (g == -1) return boundary_h(s.shells[l].medium, shell_outer_medium(s, l), s.background, freq, ppw, false);
    const Layer& L = s.groups[g].layers[l];
    return boundary_h(L.medium, outer_medium(s, g, l), s.background, freq, ppw, L.pec);
  });
}

SceneMesh build_scene_mesh_uniform(const Scene& s, double h) {
  return mesh_with(s, [h](int, int) { return h; });
}

}  // namespace tmscat
