#include "convexlab/support_function.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <string>

#include "convexlab/mesh.hpp"

namespace convexlab {

namespace {

// Area of the spherical triangle (a, b, c) on the unit sphere.
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double numer = std::abs(a.dot(b.cross(c)));
  const double denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(numer, denom);
}

}  // namespace

SphereQuadrature SphereQuadrature::make(int ambient_dim, int level) {
  check_ambient_dim(ambient_dim);
  if (level < 0) throw DomainError("quadrature level must be nonnegative");
  SphereQuadrature q;
  q.ambient_dim = ambient_dim;
  q.level = level;
  if (ambient_dim == 2) {
    const int count = 8 << level;
    for (int i = 0; i < count; ++i) {
      const double theta = 2.0 * kPi * i / count;
      q.nodes.emplace_back(std::cos(theta), std::sin(theta), 0.0);
      q.weights.push_back(2.0 * kPi / count);
    }
    return q;
  }
  const TriMesh sphere = icosphere(level);
  q.nodes = sphere.vertices;
  q.weights.assign(q.nodes.size(), 0.0);
  // Voronoi cell of vertex v within triangle t: the two spherical triangles
  // (v, edge midpoint, circumcenter) on either side.
  for (const auto& f : sphere.triangles) {
    const Vec3& a = q.nodes[f[0]];
    const Vec3& b = q.nodes[f[1]];
    const Vec3& c = q.nodes[f[2]];
    Vec3 cc = (b - a).cross(c - a).normalized();
    if (cc.dot(a + b + c) < 0) cc = -cc;
    for (int e = 0; e < 3; ++e) {
      const Vec3& v = q.nodes[f[e]];
      const Vec3 m1 = (v + q.nodes[f[(e + 1) % 3]]).normalized();
      const Vec3 m2 = (v + q.nodes[f[(e + 2) % 3]]).normalized();
      q.weights[f[e]] += spherical_triangle_area(v, m1, cc) + spherical_triangle_area(v, cc, m2);
    }
  }
  return q;
}

// ---------------------------------------------------------------------------

SupportEvaluator::SupportEvaluator(int ambient_dim, Value value, Gradient gradient,
                                   Hessian hessian, double scale)
    : state_(std::make_shared<const State>(
          State{std::move(value), std::move(gradient), std::move(hessian)})),
      dim_(ambient_dim),
      scale_(scale) {
  check_ambient_dim(ambient_dim);
  if (!state_->value) throw DomainError("support evaluator needs a value function");
  if (!(scale > 0)) throw DomainError("support evaluator scale must be positive");
  // Centroid of reverse-Gauss-map samples is an interior point.
  const auto probe = SphereQuadrature::make(ambient_dim, 2);
  Vec3 centroid = Vec3::Zero();
  for (const auto& u : probe.nodes) centroid += this->gradient(u);
  centroid /= static_cast<double>(probe.size());
  shift_ = centroid;
  for (const auto& u : probe.nodes) {
    if (!(this->value(u) > 0.0)) {
      throw DomainError("support function does not describe a body with interior");
    }
  }
}

double SupportEvaluator::raw_value(const Vec3& x) const {
  return multiplier_ * state_->value(x);
}

double SupportEvaluator::value(const Vec3& x) const { return raw_value(x) - shift_.dot(x); }

Vec3 SupportEvaluator::gradient(const Vec3& x) const {
  if (state_->gradient) return multiplier_ * state_->gradient(x) - shift_;
  const double s = fd_step_ * x.norm();
  Vec3 g = Vec3::Zero();
  for (int i = 0; i < dim_; ++i) {
    const Vec3 e = Vec3::Unit(i) * s;
    g[i] = (raw_value(x + e) - raw_value(x - e)) / (2.0 * s);
  }
  return g - shift_;
}

Mat3 SupportEvaluator::hessian(const Vec3& x) const {
  if (state_->hessian) return multiplier_ * state_->hessian(x);
  // The linear shift term has zero Hessian.
  const double s = fd_step_ * x.norm();
  const double h0 = raw_value(x);
  Mat3 hess = Mat3::Zero();
  for (int i = 0; i < dim_; ++i) {
    const Vec3 ei = Vec3::Unit(i) * s;
    hess(i, i) = (raw_value(x + ei) - 2.0 * h0 + raw_value(x - ei)) / (s * s);
    for (int j = i + 1; j < dim_; ++j) {
      const Vec3 ej = Vec3::Unit(j) * s;
      const double v = (raw_value(x + ei + ej) - raw_value(x + ei - ej) -
                        raw_value(x - ei + ej) + raw_value(x - ei - ej)) /
                       (4.0 * s * s);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

SupportEvaluator SupportEvaluator::scaled(double lambda) const {
  if (!(lambda > 0)) throw DomainError("homothety factor must be positive");
  SupportEvaluator out = *this;
  out.multiplier_ *= lambda;
  out.shift_ *= lambda;
  out.scale_ *= lambda;
  return out;
}

SupportEvaluator SupportEvaluator::with_fd_step(double step) const {
  if (!(step > 0)) throw DomainError("finite-difference step must be positive");
  SupportEvaluator out = *this;
  out.fd_step_ = step;
  return out;
}

SupportEvaluator SupportEvaluator::ball(int ambient_dim, double radius, const Vec3& center) {
  if (!(radius > 0)) throw DomainError("ball radius must be positive");
  auto value = [radius, center](const Vec3& x) { return center.dot(x) + radius * x.norm(); };
  auto gradient = [radius, center](const Vec3& x) { return Vec3(center + radius * x / x.norm()); };
  auto hessian = [radius, ambient_dim](const Vec3& x) {
    const double r = x.norm();
    const Vec3 u = x / r;
    Mat3 id = Mat3::Identity();
    if (ambient_dim == 2) id(2, 2) = 0.0;
    return Mat3(radius * (id - u * u.transpose()) / r);
  };
  return SupportEvaluator(ambient_dim, value, gradient, hessian, radius);
}

SupportEvaluator SupportEvaluator::ellipsoid(int ambient_dim, const Vec3& semi_axes) {
  check_ambient_dim(ambient_dim);
  for (int i = 0; i < ambient_dim; ++i) {
    if (!(semi_axes[i] > 0)) throw DomainError("ellipsoid semi-axes must be positive");
  }
  Vec3 a2 = semi_axes.cwiseProduct(semi_axes);
  if (ambient_dim == 2) a2[2] = 0.0;
  auto value = [a2](const Vec3& x) { return std::sqrt(x.dot(a2.cwiseProduct(x))); };
  auto gradient = [a2](const Vec3& x) {
    const Vec3 ax = a2.cwiseProduct(x);
    return Vec3(ax / std::sqrt(x.dot(ax)));
  };
  auto hessian = [a2](const Vec3& x) {
    const Vec3 ax = a2.cwiseProduct(x);
    const double h = std::sqrt(x.dot(ax));
    return Mat3(Mat3(a2.asDiagonal()) / h - ax * ax.transpose() / (h * h * h));
  };
  const double scale = semi_axes.head(ambient_dim).maxCoeff();
  return SupportEvaluator(ambient_dim, value, gradient, hessian, scale);
}

// ---------------------------------------------------------------------------

std::vector<Vec3> tangent_frame(const Vec3& u, int ambient_dim) {
  if (ambient_dim == 2) return {Vec3(-u.y(), u.x(), 0.0)};
  const Vec3 helper = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 t1 = (helper - helper.dot(u) * u).normalized();
  return {t1, u.cross(t1)};
}

namespace {

std::vector<double> restricted_eigenvalues(const SupportEvaluator& body, const Vec3& u) {
  const Mat3 hess = body.hessian(u);
  const auto frame = tangent_frame(u, body.ambient_dim());
  if (frame.size() == 1) return {frame[0].dot(hess * frame[0])};
  Eigen::Matrix2d m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m(i, j) = frame[i].dot(hess * frame[j]);
  }
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev[0], ev[1]};
}

}  // namespace

BoundaryPointData principal_data(const SupportEvaluator& body, const Vec3& u,
                                 double quadrature_weight) {
  BoundaryPointData d;
  d.u = u;
  d.x = body.gradient(u) + body.shift();
  d.radii = restricted_eigenvalues(body, u);
  double prod = 1.0;
  for (double r : d.radii) {
    if (!(r > 0.0)) {
      throw ConvexityViolation("restricted support Hessian has eigenvalue " + std::to_string(r) +
                               " (body not smooth-convex at this normal)");
    }
    d.curvatures.push_back(1.0 / r);
    prod *= r;
  }
  d.area_weight = prod * quadrature_weight;
  return d;
}

void screen_convexity(const SupportEvaluator& body, const SphereQuadrature& quad) {
  const double floor = 1e-8 * body.scale();
  for (const auto& u : quad.nodes) {
    for (double r : restricted_eigenvalues(body, u)) {
      if (!(r >= floor)) {
        throw ConvexityViolation("convexity screening failed: principal radius " +
                                 std::to_string(r) + " below " + std::to_string(floor));
      }
    }
  }
}

}  // namespace convexlab
