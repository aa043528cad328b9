#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "convexlab/common.hpp"

namespace convexlab {

/// Triangle surface in R^3. `normals` is either empty or holds one unit
/// normal per vertex; when present it is treated as the surface's normal
/// field and never recomputed from faces.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<std::array<int, 3>> triangles;

  bool has_normals() const { return !normals.empty(); }
  Vec3 facet_normal(std::size_t t) const;  // unit, from winding
  double facet_area(std::size_t t) const;
};

/// Closed curves in the plane z = 0, stored as oriented segments.
struct Polyline {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<std::array<int, 2>> segments;

  bool has_normals() const { return !normals.empty(); }
};

double surface_area(const TriMesh& mesh);
double curve_length(const Polyline& curve);

/// Throws OpenMeshError on boundary or non-manifold edges and
/// OrientationError when adjacent facets disagree on winding.
void validate_closed(const TriMesh& mesh);
void validate_closed(const Polyline& curve);

/// (1/(n+1)) * sum over facets of (centroid . outward normal) * measure.
/// A consistently inward-wound mesh is read as its global flip.
double divergence_volume(const TriMesh& mesh);
double divergence_volume(const Polyline& curve);

/// Flips the winding in place when the signed volume is negative.
/// Returns true if a flip happened.
bool orient_outward(TriMesh& mesh);

/// Vertex index lists of the edge-connected components, in order of their
/// smallest vertex index.
std::vector<std::vector<int>> connected_components(const TriMesh& mesh);

/// Extracts a component as a standalone mesh (normals carried over).
TriMesh submesh(const TriMesh& mesh, const std::vector<int>& vertex_ids);

int euler_characteristic(const TriMesh& mesh);
double mean_edge_length(const TriMesh& mesh);

/// Vertex adjacency lists built from the triangle edges.
std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh);

TriMesh merge(const TriMesh& a, const TriMesh& b);

/// Generalized winding number of a closed surface (curve) around p: 1
/// inside, 0 outside, fractional only on or near the boundary.
double winding_number(const TriMesh& mesh, const Vec3& p);
double winding_number(const Polyline& curve, const Vec3& p);

// ---------------------------------------------------------------------------
// Generators

/// Subdivided icosahedron projected onto the sphere, with radial normals.
/// Level L has 10 * 4^L + 2 vertices.
TriMesh icosphere(int level, const Vec3& center = Vec3::Zero(),
                  double radius = 1.0);

/// Axis-aligned ellipsoid with the given semi-axes (icosphere scaled by the
/// axes); normals are the exact ellipsoid normals.
TriMesh ellipsoid_mesh(const Vec3& semi_axes, int level);

/// Axis-aligned box [lo, hi] with every face split into
/// `per_edge` x `per_edge` quads, two triangles each.
TriMesh box_mesh(const Vec3& lo, const Vec3& hi, int per_edge = 1);

struct CapMeshOptions {
  int azimuth = 192;
  int rings = 48;
  /// Width of the refined band next to the seam, as a fraction of the
  /// cap's polar angle.
  double seam_band = 0.1;
  int band_rings = 16;
};

/// Lens made of two unit spherical caps glued along the seam circle in the
/// plane z = 0 (the cap body with parameter eps, symmetry axis e_z).
/// Seam vertices carry the averaged normal; all others the cap normal.
TriMesh cap_body_mesh(double eps, const CapMeshOptions& options = {});

/// Open cylinder of the given radius around the z axis, |z| <= half_height.
TriMesh cylinder_mesh(double radius, double half_height, int azimuth,
                      int rows);

/// Flat n x n grid in the plane z = 0 spanning [-half, half]^2.
TriMesh grid_patch(int n, double half);

/// Closed polygon (counter-clockwise) from its vertices, with edge-averaged
/// vertex normals.
Polyline polygon(const std::vector<Vec3>& vertices);

// ---------------------------------------------------------------------------
// I/O. OFF/NOFF and OBJ with triangles only; quads and larger faces are
// rejected with ParseError.

TriMesh read_off(std::istream& in);
TriMesh read_obj(std::istream& in);
/// Dispatches on the extension (.off or .obj).
TriMesh read_mesh(const std::filesystem::path& path);

/// Writes NOFF when the mesh has normals, plain OFF otherwise.
void write_off(std::ostream& out, const TriMesh& mesh);
void write_off(const std::filesystem::path& path, const TriMesh& mesh);

}  // namespace convexlab
