#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "tmscat/types.hpp"

namespace tmscat {

struct Medium {
  double eps_r = 1.0;
  double mu_r = 1.0;
  double sigma = 0.0;  // S/m

  bool operator==(const Medium&) const = default;
};

inline double angular_frequency(double freq) { return 2.0 * kPi * freq; }

// k = omega sqrt(mu eps_c), eps_c = eps - j sigma/omega; Re k >= 0, Im k <= 0.
cplx wavenumber(const Medium& m, double freq);

// sigma/(omega eps) > 1: treated as a conductor when picking mesh density.
bool is_conductor_like(const Medium& m, double freq);

struct Circle {
  Point center{0.0, 0.0};
  double radius = 1.0;
};

// Vertices counter-clockwise.
struct Polygon {
  std::vector<Point> vertices;
};

// Pie slice: apex at center, arc from start to end (radians, end > start).
struct Sector {
  Point center{0.0, 0.0};
  double radius = 1.0;
  double start = 0.0;
  double end = 0.0;
};

using BoundarySpec = std::variant<Circle, Polygon, Sector>;

double perimeter(const BoundarySpec& b);

// Flat segments of one or more closed contours. Segment i runs from
// starts.col(i) to ends.col(i); the interior lies to its left.
struct DiscretizedBoundary {
  Eigen::Matrix2Xd starts;
  Eigen::Matrix2Xd ends;
  Eigen::Matrix2Xd midpoints;
  Eigen::Matrix2Xd normals;  // unit, outward
  Eigen::VectorXd lengths;

  int size() const { return int(lengths.size()); }
  Point start(int i) const { return starts.col(i); }
  Point end(int i) const { return ends.col(i); }
  Point tangent(int i) const { return (end(i) - start(i)) / lengths[i]; }
};

// Build segment data from a closed CCW node chain.
DiscretizedBoundary from_nodes(const Eigen::Matrix2Xd& nodes);

DiscretizedBoundary discretize(const BoundarySpec& b, double target_h);

// Concatenate boundaries (object-major ordering).
DiscretizedBoundary concat(const std::vector<DiscretizedBoundary>& parts);

DiscretizedBoundary transformed(const DiscretizedBoundary& db, double angle, const Point& shift);

bool contains(const DiscretizedBoundary& db, const Point& p);
double signed_area(const DiscretizedBoundary& db);

struct Layer {
  BoundarySpec boundary;
  Medium medium;     // interior of this boundary (outside the previous one)
  bool pec = false;  // only meaningful for the innermost layer of a group
};

// One nested object, innermost layer first.
struct Group {
  std::vector<Layer> layers;
};

// groups share the region just outside their outermost layers; shells (if
// any) enclose every group, innermost first.
struct Scene {
  Medium background;
  std::vector<Group> groups;
  std::vector<Layer> shells;
  double extension = 0.0;  // fictitious boundary offset, meters
};

// Medium just outside layer `li` of group `gi`.
const Medium& outer_medium(const Scene& s, int gi, int li);
const Medium& shell_outer_medium(const Scene& s, int si);

// Check nesting, disjointness, media, and PEC placement. Throws ValidationError.
void validate(const Scene& s);

struct SceneMesh {
  std::vector<std::vector<DiscretizedBoundary>> groups;  // [group][layer]
  std::vector<DiscretizedBoundary> shells;
  std::optional<DiscretizedBoundary> fictitious;
  std::optional<BoundarySpec> fictitious_spec;

  // Unknowns carried on the outermost boundary (the exterior solve size).
  int outer_unknowns() const;
  int total_segments() const;
};

BoundarySpec fictitious_boundary(const Scene& s);

// Target length per boundary: min over adjacent non-conducting media of
// wavelength/ppw.
SceneMesh build_scene_mesh(const Scene& s, double freq, int points_per_wavelength);

// Same target length on every boundary.
SceneMesh build_scene_mesh_uniform(const Scene& s, double h);

}  // namespace tmscat
