#pragma once

#include <array>
#include <string>
#include <vector>

#include "convexlab/mesh.hpp"

namespace convexlab {

/// Shape operator dη = S dx of a surface with normal field η at a vertex,
/// written in the tangent frame (t1, t2). Outer normals of a sphere of
/// radius R give S = I / R.
struct ShapeOperatorSample {
  int vertex = -1;
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::Zero();
  std::array<Vec3, 2> frame{Vec3::Zero(), Vec3::Zero()};
  Eigen::Matrix2d op = Eigen::Matrix2d::Zero();
  Eigen::Vector2d principal = Eigen::Vector2d::Zero();  // ascending
  double mean_kappa = 0.0;                              // trace / 2
  double umbilic_deviation = 0.0;                       // |op - mean_kappa I|_F
  int neighbors = 0;
};

struct ShapeOperatorOptions {
  /// Neighborhood: the 2-ring plus every vertex reachable through edges
  /// within radius_factor * mean edge length.
  double radius_factor = 3.0;
  int min_neighbors = 6;
};

/// Least-squares fit of the tangential normal change Δη against the
/// tangential offsets (a, b) of the neighbors, with linear and quadratic
/// terms, then symmetrized. Uses the mesh normals when present, otherwise
/// vertex_normals_from_facets. Throws NumericError on a rank-deficient
/// neighborhood.
ShapeOperatorSample estimate_shape_operator(const TriMesh& mesh, int vertex,
                                            const ShapeOperatorOptions& options = {});
std::vector<ShapeOperatorSample> estimate_shape_operators(const TriMesh& mesh,
                                                          const ShapeOperatorOptions& options = {});
/// As above, but vertices whose fit fails get NaN principal curvatures and
/// are listed in `failed` instead of throwing.
std::vector<ShapeOperatorSample> estimate_shape_operators(const TriMesh& mesh, const ShapeOperatorOptions& options,
                                                          std::vector<int>& failed);

/// Signed curvature dη/ds of a closed planar curve at each vertex (positive
/// for a counter-clockwise circle with outward normals).
std::vector<double> estimate_curve_curvatures(const Polyline& curve);

/// Facet normals averaged at vertices with Max's weights
/// (cross product over squared edge lengths), exact for inscribed spheres.
std::vector<Vec3> vertex_normals_from_facets(const TriMesh& mesh);

enum class SurfaceClass { Plane, Sphere, Neither };
std::string to_string(SurfaceClass c);

struct ComponentVerdict {
  SurfaceClass classification = SurfaceClass::Neither;
  Vec3 center = Vec3::Zero();  // Sphere only
  double radius = 0.0;         // Sphere only
  double max_deviation = 0.0;  // max umbilic deviation / curvature scale
  double kappa_spread = 0.0;   // (max - min mean_kappa) / curvature scale
  double fit_residual = 0.0;   // max ||x - center| - radius|
  double mean_kappa = 0.0;
  int vertex_count = 0;
};

struct UmbilicVerdict {
  std::vector<ComponentVerdict> components;
};

/// tol1 and tol2 are relative to the curvature scale
/// max(|mean kappa|, 1 / diameter); tol3 is relative to the sphere radius.
struct UmbilicTolerances {
  double deviation = 1e-3;
  double spread = 1e-3;
  double fit = 1e-3;
};

/// Classifies every edge-connected component as Plane, Sphere or Neither.
/// Throws OrientationError when adjacent facets disagree on winding.
UmbilicVerdict classify_surface(const TriMesh& mesh, const UmbilicTolerances& tol = {},
                                const ShapeOperatorOptions& options = {});

}  // namespace convexlab
