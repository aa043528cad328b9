#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "convexlab/common.hpp"
#include "convexlab/heintze_karcher.hpp"
#include "convexlab/mesh.hpp"
#include "convexlab/support_function.hpp"

namespace convexlab {

struct Ball {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

/// Axis-aligned, centered at the origin. Only the first ambient_dim
/// semi-axes are used.
struct Ellipsoid {
  Vec3 semi_axes = Vec3::Ones();
};

struct SupportSmooth {
  SupportEvaluator evaluator;
  std::string label;
};

struct Polytope {
  std::vector<Vec3> vertices;
};

/// Lens B(-eps e, 1) ∩ B(eps e, 1) with e the last ambient axis (e_z, or
/// e_y in the plane): two unit caps above height eps, translated to meet
/// along the seam in the hyperplane orthogonal to e.
struct CapBody {
  double epsilon = 0.5;
};

/// Occupancy grid: node (i, j, k) sits at origin + step * (i, j, k).
struct VoxelGrid {
  Vec3 origin = Vec3::Zero();
  double step = 1.0;
  std::array<int, 3> dims{1, 1, 1};
  std::vector<std::uint8_t> occupied;  // row-major, i fastest

  bool at(int i, int j, int k) const {
    return occupied[static_cast<std::size_t>((k * dims[1] + j) * dims[0] + i)] != 0;
  }
};

/// A closed set given by samples: the solid bounded by a closed surface
/// (TriMesh, ambient 3) or curve (Polyline, ambient 2), a finite point set,
/// or voxels. Not necessarily convex.
struct SampledSet {
  std::variant<TriMesh, Polyline, std::vector<Vec3>, VoxelGrid> data;
  double resolution = 0.0;
};

using BodyKind = std::variant<Ball, Ellipsoid, SupportSmooth, Polytope, CapBody, SampledSet>;

struct Body {
  BodyKind kind;
  int ambient_dim = 3;
  std::string name;  // label for reports

  int n() const { return ambient_dim - 1; }
  std::string kind_name() const;
  bool is_convex() const;
};

// Factories validate the type invariants and throw DomainError.
Body make_ball(int ambient_dim, double radius, const Vec3& center = Vec3::Zero());
Body make_ellipsoid(int ambient_dim, const Vec3& semi_axes);
Body make_support_smooth(SupportEvaluator evaluator, std::string label);
/// Rejects vertex lists whose affine span is not the ambient space.
Body make_polytope(int ambient_dim, std::vector<Vec3> vertices);
Body make_cap_body(int ambient_dim, double epsilon);
Body make_sampled_surface(TriMesh mesh);
Body make_sampled_curve(Polyline curve);
Body make_point_set(int ambient_dim, std::vector<Vec3> points);
Body make_voxel_set(int ambient_dim, VoxelGrid grid);

// Named fixtures.
Body unit_cube();                       // [0,1]^3
Body unit_square();                     // [0,1]^2
Body regular_tetrahedron();             // edge length 2 sqrt 2, centered
Body l_tromino();                       // [0,2]^2 minus (1,2]^2, planar
Body random_smooth_body(std::uint64_t seed, int index = 0);

/// Support evaluator for Ball, Ellipsoid and SupportSmooth bodies.
std::optional<SupportEvaluator> support_evaluator(const Body& body);

struct Box {
  Vec3 lo;
  Vec3 hi;
};

/// Axis-aligned bounding box (z collapsed to 0 for planar bodies).
Box bounding_box(const Body& body);

/// Boundary mesh of a body in R^3 with per-vertex normals: reverse Gauss
/// map of the level-`level` icosphere for smooth bodies, cap_body_mesh for
/// cap bodies, the stored mesh for sampled surfaces. Polytopes and other
/// sampled sets raise DomainError.
TriMesh boundary_mesh(const Body& body, int level);

// ---------------------------------------------------------------------------
// Cap body closed forms.

/// Quantities of the upper half K+ of the cap body: the unit spherical cap
/// above height eps (cap_area), the flat disc it closes off (disc_area) and
/// the enclosed volume (half_volume). ratio is area(∂K)/((n+1) vol(K)).
struct CapBodyMetrics {
  double cap_area = 0.0;
  double disc_area = 0.0;
  double half_volume = 0.0;
  double ratio = 0.0;
};

CapBodyMetrics cap_body_metrics(int n, double epsilon);

double cap_body_seam_radius(double epsilon);
/// Angle between the outer normals of the two caps along the seam.
double cap_body_dihedral_angle(double epsilon);
/// Exact Hausdorff distance from the cap body to the unit ball at the origin.
double cap_body_hausdorff_to_ball(double epsilon);

}  // namespace convexlab
