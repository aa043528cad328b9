#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "convexlab/common.hpp"

namespace convexlab {

/// Quadrature on the unit sphere S^n of R^{n+1}.
///
/// n = 1: `8 * 2^level` equally spaced angles with equal weights (trapezoid
/// rule, spectrally accurate for smooth periodic integrands).
/// n = 2: vertices of the level-`level` icosphere, each weighted by the area
/// of its spherical Voronoi cell. Cells tile the sphere, so the weights sum
/// to 4*pi up to round-off.
struct SphereQuadrature {
  int ambient_dim = 3;
  int level = 0;
  std::vector<Vec3> nodes;
  std::vector<double> weights;

  static SphereQuadrature make(int ambient_dim, int level);
  std::size_t size() const { return nodes.size(); }
};

/// Support function of a convex body, given as its positively 1-homogeneous
/// extension h(x) = |x| h(x/|x|) to R^{n+1}. For such h the Hessian at a
/// unit u restricted to u-perp equals the spherical (D^2 h + h I)|u-perp, whose
/// eigenvalues are the principal radii of curvature at the normal u.
///
/// Construction translates the body so that its interior contains the
/// origin (h > 0 on the sphere); reported boundary points are translated
/// back. Instances are immutable and cheap to copy.
class SupportEvaluator {
 public:
  using Value = std::function<double(const Vec3&)>;
  using Gradient = std::function<Vec3(const Vec3&)>;
  using Hessian = std::function<Mat3(const Vec3&)>;

  /// `gradient` and `hessian` may be empty; central differences with step
  /// `fd_step * scale` are used instead.
  SupportEvaluator(int ambient_dim, Value value, Gradient gradient = {},
                   Hessian hessian = {}, double scale = 1.0);

  static SupportEvaluator ball(int ambient_dim, double radius,
                               const Vec3& center = Vec3::Zero());
  static SupportEvaluator ellipsoid(int ambient_dim, const Vec3& semi_axes);

  int ambient_dim() const { return dim_; }
  int n() const { return dim_ - 1; }
  double scale() const { return scale_; }
  /// Translation applied at construction (boundary points are reported in
  /// the caller's frame, i.e. shifted back).
  const Vec3& shift() const { return shift_; }
  bool analytic_hessian() const { return static_cast<bool>(state_->hessian); }
  double fd_step() const { return fd_step_; }

  /// Support value in the translated frame (positive on the sphere).
  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  Mat3 hessian(const Vec3& x) const;

  /// Homothety lambda * K about the origin of the translated frame.
  SupportEvaluator scaled(double lambda) const;
  /// Copy with a different finite-difference step (relative to scale).
  SupportEvaluator with_fd_step(double step) const;

 private:
  struct State {
    Value value;
    Gradient gradient;
    Hessian hessian;
  };
  std::shared_ptr<const State> state_;
  int dim_;
  double scale_;
  double fd_step_ = 1e-5;
  double multiplier_ = 1.0;
  Vec3 shift_ = Vec3::Zero();

  double raw_value(const Vec3& x) const;
};

/// Geometry at the boundary point whose outer normal is u.
struct BoundaryPointData {
  Vec3 u;
  Vec3 x;                         // reverse Gauss map image grad h(u)
  std::vector<double> radii;      // ascending
  std::vector<double> curvatures; // 1/radii, so descending
  double area_weight = 0.0;       // prod(radii) * quadrature weight
};

/// Principal radii and curvatures at the unit normal u. Throws
/// ConvexityViolation when a restricted-Hessian eigenvalue is not positive.
BoundaryPointData principal_data(const SupportEvaluator& body, const Vec3& u,
                                 double quadrature_weight = 0.0);

/// Throws ConvexityViolation if any restricted-Hessian eigenvalue at a node
/// falls below 1e-8 * scale.
void screen_convexity(const SupportEvaluator& body, const SphereQuadrature& quad);

/// Unit tangent frame orthogonal to u (one vector for n = 1, two for n = 2).
std::vector<Vec3> tangent_frame(const Vec3& u, int ambient_dim);

}  // namespace convexlab
