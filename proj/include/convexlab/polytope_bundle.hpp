#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "convexlab/body.hpp"

namespace convexlab {

struct Face {
  int dim = 0;
  std::vector<int> vertices;  // sorted indices into FaceLattice::vertices
  Vec3 centroid = Vec3::Zero();
  std::vector<Vec3> basis;    // orthonormal directions of the affine hull
  Vec3 normal = Vec3::Zero(); // outer unit normal, facets only
  std::vector<int> parents;   // faces of dim + 1 containing this one
  std::vector<int> children;  // faces of dim - 1 contained in this one
};

/// Face lattice of a convex polytope in R^2 or R^3. Face ids index `faces`;
/// ids are grouped by dimension (vertices first, the body last).
struct FaceLattice {
  int ambient_dim = 3;
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  int n() const { return ambient_dim - 1; }
  std::vector<int> faces_of_dim(int dim) const;
  int count(int dim) const { return static_cast<int>(faces_of_dim(dim).size()); }
  /// Face id of vertex i.
  int vertex_face(int i) const;
  /// Ids of the facets containing face `id`.
  std::vector<int> incident_facets(int id) const;
};

/// Brute force over vertex tuples: every supporting hyperplane through n+1
/// affinely independent vertices gives a facet; coplanar candidates merge.
/// Throws DomainError for a degenerate span or vertices that are not
/// extreme points (non-convex position).
FaceLattice build_face_lattice(const Body& polytope);
FaceLattice build_face_lattice(int ambient_dim, const std::vector<Vec3>& vertices);

/// H^m measure of the relative interior of a face (1 for vertices).
double face_measure(const FaceLattice& lattice, int id);
double polytope_volume(const FaceLattice& lattice);

/// Unit normals at a point in the relative interior of face `id`: the cone
/// spanned by the normals of the incident facets.
struct NormalConeRecord {
  int face = -1;
  int face_dim = 0;
  std::vector<Vec3> generators;  // cyclic order for vertex cones in R^3
  /// H^{n-m} measure of the cone's unit directions (1 for facet atoms).
  double spherical_measure = 0.0;
};

/// Exact measure: spherical excess over a fan for vertex cones in R^3,
/// dihedral exterior angle for edges, planar angle for polygon vertices.
/// Throws NumericError when two generators are closer than 1e-10 rad.
NormalConeRecord normal_cone_measure(const FaceLattice& lattice, int id);

/// Solid angles of vertex normal cones from `samples` uniform directions: a
/// direction belongs to the vertex maximizing u . x. Indexed like
/// lattice.vertices.
std::vector<double> monte_carlo_vertex_measures(const FaceLattice& lattice, std::size_t samples,
                                                std::uint64_t seed);

struct FaceContribution {
  int face = -1;
  double face_measure = 0.0;
  double cone_measure = 0.0;
  double contribution = 0.0;
};

/// Total mass C_k(K, R^{n+1}), split into absolutely continuous and
/// singular parts with respect to H^n on the boundary.
struct CurvatureMeasureReport {
  int k = 0;
  double total = 0.0;
  double ac_part = 0.0;
  double sing_part = 0.0;
  std::vector<FaceContribution> faces;
};

/// Sum over k-faces of H^k(face) times the normal-cone measure. No
/// binomial or ball-volume normalization: C_n is the boundary area and C_0
/// the measure of the unit sphere. For k < n the mass is purely singular.
CurvatureMeasureReport curvature_measure_total(const FaceLattice& lattice, int k);
std::vector<CurvatureMeasureReport> curvature_measures(const FaceLattice& lattice);

/// Smooth bodies: C_k = int H_{n-k}, entirely absolutely continuous.
std::vector<CurvatureMeasureReport> smooth_curvature_measures(const SupportEvaluator& body,
                                                              int level = 5);

/// Cap bodies in closed form. The caps carry H_{n-k} of the unit sphere;
/// the seam carries the singular mass.
std::vector<CurvatureMeasureReport> cap_body_curvature_measures(int n, double epsilon);

/// Coefficients c_0..c_{n+1} of V(K_rho) = sum c_j rho^j, with
/// c_0 = volume and c_{n+1-k} = C_k / (n+1-k). Needs reports for k = 0..n.
std::vector<double> steiner_coefficients_from_measures(
    const std::vector<CurvatureMeasureReport>& reports, double volume);
double evaluate_polynomial(const std::vector<double>& coefficients, double x);

/// C_1 mass of the seam circle of the cap body in R^3: seam length times
/// the angle between the cap normals across the seam.
double singular_seam_mass(const Body& cap_body);

/// Discrete C_1 mass of mesh edges selected by `select(a, b)`: edge length
/// times the angle between the two adjacent facet normals.
double mesh_edge_curvature_mass(const TriMesh& mesh,
                                const std::function<bool(const Vec3&, const Vec3&)>& select);

}  // namespace convexlab
