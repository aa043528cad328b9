#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "convexlab/body.hpp"
#include "convexlab/support_function.hpp"

namespace convexlab {

/// Metric projection onto a closed set: distance and a nearest point.
struct Projection {
  double distance = 0.0;
  Vec3 nearest = Vec3::Zero();
};

/// Exact point-to-set distance for a union of bodies. Voxel sets have no
/// nearest-point oracle (has_nearest() is false when one is present) and
/// are measured to their occupied nodes.
class DistanceSource {
 public:
  explicit DistanceSource(std::vector<Body> bodies);

  Projection project(const Vec3& p) const;
  double distance(const Vec3& p) const { return project(p).distance; }
  bool has_nearest() const { return has_nearest_; }
  int ambient_dim() const { return dim_; }
  const std::vector<Body>& bodies() const { return bodies_; }
  Box bounding_box() const;

 private:
  struct Query;
  std::vector<Body> bodies_;
  std::vector<std::shared_ptr<const Query>> queries_;
  int dim_ = 3;
  bool has_nearest_ = true;
};

/// Distance values on an axis-aligned lattice. Node (i, j, k) sits at
/// origin + step * (i, j, k); values are stored with i fastest. Planar
/// fields have dims[2] == 1.
struct DistanceField {
  int ambient_dim = 3;
  Vec3 origin = Vec3::Zero();
  double step = 1.0;
  std::array<int, 3> dims{1, 1, 1};
  std::vector<double> values;
  /// Smallest gap between the bodies' bounding box and the grid box.
  double margin = 0.0;
  std::shared_ptr<const DistanceSource> source;

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>((k * dims[1] + j) * dims[0] + i);
  }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }
  Vec3 node(int i, int j, int k) const { return origin + step * Vec3(i, j, k); }
  /// Multilinear interpolation, clamped to the grid.
  double interpolate(const Vec3& p) const;
  Vec3 interpolated_gradient(const Vec3& p) const;
};

/// Bounding box of the bodies grown by `pad` in the ambient directions.
Box padded_box(const std::vector<Body>& bodies, double pad);

/// Exact primitive distances at every node (an exact transform for voxel
/// sets, whose grid must share the step). Throws DomainError when the box
/// does not contain the bodies or h is not positive.
DistanceField build_distance_field(const std::vector<Body>& bodies, const Box& bbox, double h);
DistanceField build_distance_field(const Body& body, const Box& bbox, double h);

/// Largest |Δδ| between adjacent nodes divided by the step (at most 1 for a
/// distance function).
double lipschitz_ratio(const DistanceField& field);

/// Squared-distance transform of Felzenszwalb and Huttenlocher: distance
/// from every node to the nearest occupied node. Throws when nothing is
/// occupied.
std::vector<double> euclidean_distance_transform(const std::vector<std::uint8_t>& occupied,
                                                 const std::array<int, 3>& dims, double step);

/// Volume (area for planar fields) of {δ <= rho}: whole cells below rho
/// count fully, cells straddling rho count the fraction of a sub-lattice
/// of the multilinear model below rho. Throws DomainError when
/// rho + step exceeds the margin.
double offset_volume(const DistanceField& field, double rho, int subsamples = 0);

enum class SteinerVerdict { ConsistentWithReach, PolynomialityViolated };
std::string to_string(SteinerVerdict v);

struct SteinerFit {
  std::vector<double> radii;
  std::vector<double> volumes;
  std::vector<double> coefficients;  // c_0..c_{n+1}, V(rho) = sum c_j rho^j
  double residual = 0.0;             // max |fit - data| / V(rho_min)
  double threshold = 0.005;
  SteinerVerdict verdict = SteinerVerdict::ConsistentWithReach;
};

/// Least-squares polynomial of degree n+1 (free constant term) through the
/// offset volumes. Needs at least n+3 distinct radii; throws NumericError
/// when the radii are too clustered for a stable fit.
SteinerFit steiner_fit(const DistanceField& field, const std::vector<double>& radii,
                       double threshold = 0.005);
/// Same fit on given volumes.
SteinerFit steiner_fit_volumes(int n, const std::vector<double>& radii, const std::vector<double>& volumes,
                               double threshold = 0.005);

/// Level set S(A, r) = {δ = r}: triangles for ambient 3 (marching
/// tetrahedra on the six-tetrahedron split of each cell), segments for
/// ambient 2. Normals are ν = (x - ξ(x)) / δ(x) from the nearest-point
/// oracle, or the normalized field gradient. `principal` holds per-vertex
/// curvature estimates (ascending; NaN where the fit fails).
struct OffsetSurface {
  int ambient_dim = 3;
  double r = 0.0;
  TriMesh mesh;
  Polyline curve;
  std::vector<std::vector<double>> principal;
};

/// Throws DomainError for r < 2 * step and OpenMeshError when the level
/// set reaches the grid boundary.
OffsetSurface extract_level_set(const DistanceField& field, double r, bool estimate_curvature = true);

/// Total measure of the level set (area or length).
double level_set_measure(const OffsetSurface& surface);

/// Curvature of the outer parallel surface at distance r of a surface with
/// principal curvature kappa.
double offset_curvature(double kappa, double r);
/// Principal curvatures of the closure of the complement at the same
/// point; its unit normals are the negated ones.
std::vector<double> complement_curvatures(const std::vector<double>& kappa);

struct OffsetCurvatureReport {
  double r = 0.0;
  int level = 0;
  int vertices = 0;
  double max_relative_deviation = 0.0;
  double max_predicted = 0.0;
  double min_predicted = 0.0;
};

/// Builds the parallel surface at distance r from the reverse Gauss map of
/// the level-`level` icosphere (vertices ∇h(u) + r u, normals u), estimates
/// its shape operator, and compares with κ_j / (1 + r κ_j) at each normal.
/// The deviation is max_j |est_j - pred_j| / max_j pred_j.
OffsetCurvatureReport offset_curvature_check(const SupportEvaluator& body, double r, int level = 5);

/// Binary dump: "CLXFIELD" magic, uint32 version 1, int32 ambient_dim,
/// int32 dims[3], float64 origin[3], float64 step, then dims product
/// float64 values with i fastest. All little-endian.
void write_field_binary(std::ostream& out, const DistanceField& field);
void write_field_binary(const std::filesystem::path& path, const DistanceField& field);
DistanceField read_field_binary(std::istream& in);

}  // namespace convexlab
