#include "convexlab/umbilic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

namespace convexlab {

std::string to_string(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::Plane:
      return "Plane";
    case SurfaceClass::Sphere:
      return "Sphere";
    case SurfaceClass::Neither:
      return "Neither";
  }
  return "Neither";
}

std::vector<Vec3> vertex_normals_from_facets(const TriMesh& mesh) {
  std::vector<Vec3> normals(mesh.vertices.size(), Vec3::Zero());
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Vec3& b = mesh.vertices[static_cast<std::size_t>(t[1])];
    const Vec3& c = mesh.vertices[static_cast<std::size_t>(t[2])];
    const Vec3 corner[3] = {a, b, c};
    for (int e = 0; e < 3; ++e) {
      const Vec3 e1 = corner[(e + 1) % 3] - corner[e];
      const Vec3 e2 = corner[(e + 2) % 3] - corner[e];
      normals[static_cast<std::size_t>(t[static_cast<std::size_t>(e)])] +=
          e1.cross(e2) / (e1.squaredNorm() * e2.squaredNorm());
    }
  }
  for (auto& nrm : normals) {
    const double len = nrm.norm();
    if (len > 0) nrm /= len;
  }
  return normals;
}

namespace {

struct Context {
  const TriMesh& mesh;
  std::vector<Vec3> normals;
  std::vector<std::vector<int>> adjacency;
  double radius = 0.0;
};

Context make_context(const TriMesh& mesh, const ShapeOperatorOptions& options) {
  Context ctx{mesh, mesh.has_normals() ? mesh.normals : vertex_normals_from_facets(mesh),
              vertex_neighbors(mesh), 0.0};
  ctx.radius = options.radius_factor * mean_edge_length(mesh);
  return ctx;
}

std::vector<int> neighborhood(const Context& ctx, int v) {
  const Vec3& x = ctx.mesh.vertices[static_cast<std::size_t>(v)];
  std::set<int> picked;
  for (int a : ctx.adjacency[static_cast<std::size_t>(v)]) {
    picked.insert(a);
    for (int b : ctx.adjacency[static_cast<std::size_t>(a)]) picked.insert(b);
  }
  std::queue<int> frontier;
  std::set<int> seen{v};
  frontier.push(v);
  while (!frontier.empty()) {
    const int c = frontier.front();
    frontier.pop();
    for (int a : ctx.adjacency[static_cast<std::size_t>(c)]) {
      if (!seen.insert(a).second) continue;
      if ((ctx.mesh.vertices[static_cast<std::size_t>(a)] - x).norm() <= ctx.radius) {
        picked.insert(a);
        frontier.push(a);
      }
    }
  }
  picked.erase(v);
  return {picked.begin(), picked.end()};
}

ShapeOperatorSample estimate(const Context& ctx, int v, const ShapeOperatorOptions& options) {
  if (v < 0 || static_cast<std::size_t>(v) >= ctx.mesh.vertices.size()) {
    throw DomainError("vertex index out of range");
  }
  ShapeOperatorSample s;
  s.vertex = v;
  s.point = ctx.mesh.vertices[static_cast<std::size_t>(v)];
  s.normal = ctx.normals[static_cast<std::size_t>(v)];
  const Vec3 helper = std::abs(s.normal.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  s.frame[0] = (helper - helper.dot(s.normal) * s.normal).normalized();
  s.frame[1] = s.normal.cross(s.frame[0]);

  const auto nb = neighborhood(ctx, v);
  s.neighbors = static_cast<int>(nb.size());
  if (s.neighbors < options.min_neighbors) {
    throw NumericError("vertex " + std::to_string(v) + " has only " + std::to_string(s.neighbors) +
                       " neighbors for the shape operator fit");
  }
  Eigen::MatrixXd design(s.neighbors, 5);
  Eigen::MatrixXd rhs(s.neighbors, 2);
  double scale = 0.0;
  for (int r = 0; r < s.neighbors; ++r) {
    const Vec3 dx = ctx.mesh.vertices[static_cast<std::size_t>(nb[static_cast<std::size_t>(r)])] - s.point;
    scale = std::max(scale, dx.norm());
  }
  for (int r = 0; r < s.neighbors; ++r) {
    const auto j = static_cast<std::size_t>(nb[static_cast<std::size_t>(r)]);
    const Vec3 dx = ctx.mesh.vertices[j] - s.point;
    const Vec3 dn = ctx.normals[j] - s.normal;
    const double a = dx.dot(s.frame[0]) / scale;
    const double b = dx.dot(s.frame[1]) / scale;
    design.row(r) << a, b, a * a, a * b, b * b;
    rhs(r, 0) = dn.dot(s.frame[0]);
    rhs(r, 1) = dn.dot(s.frame[1]);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 5) {
    throw NumericError("rank-deficient neighborhood at vertex " + std::to_string(v));
  }
  const Eigen::MatrixXd coef = qr.solve(rhs);
  Eigen::Matrix2d op;
  op << coef(0, 0), coef(1, 0), coef(0, 1), coef(1, 1);
  op /= scale;
  s.op = 0.5 * (op + op.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(s.op, Eigen::EigenvaluesOnly);
  s.principal = eig.eigenvalues();
  s.mean_kappa = 0.5 * s.op.trace();
  s.umbilic_deviation = (s.op - s.mean_kappa * Eigen::Matrix2d::Identity()).norm();
  return s;
}

void check_orientation(const TriMesh& mesh) {
  std::set<std::pair<int, int>> directed;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const std::pair<int, int> d{t[static_cast<std::size_t>(e)], t[static_cast<std::size_t>((e + 1) % 3)]};
      if (!directed.insert(d).second) {
        throw OrientationError("adjacent facets disagree on orientation");
      }
    }
  }
}

}  // namespace

ShapeOperatorSample estimate_shape_operator(const TriMesh& mesh, int vertex,
                                            const ShapeOperatorOptions& options) {
  return estimate(make_context(mesh, options), vertex, options);
}

std::vector<ShapeOperatorSample> estimate_shape_operators(const TriMesh& mesh,
                                                          const ShapeOperatorOptions& options) {
  const Context ctx = make_context(mesh, options);
  std::vector<ShapeOperatorSample> out;
  out.reserve(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) out.push_back(estimate(ctx, static_cast<int>(v), options));
  return out;
}

std::vector<ShapeOperatorSample> estimate_shape_operators(const TriMesh& mesh, const ShapeOperatorOptions& options,
                                                          std::vector<int>& failed) {
  const Context ctx = make_context(mesh, options);
  std::vector<ShapeOperatorSample> out;
  out.reserve(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    try {
      out.push_back(estimate(ctx, static_cast<int>(v), options));
    } catch (const NumericError&) {
      ShapeOperatorSample s;
      s.vertex = static_cast<int>(v);
      s.point = mesh.vertices[v];
      s.normal = ctx.normals[v];
      s.principal.setConstant(std::nan(""));
      s.mean_kappa = s.umbilic_deviation = std::nan("");
      out.push_back(s);
      failed.push_back(static_cast<int>(v));
    }
  }
  return out;
}

std::vector<double> estimate_curve_curvatures(const Polyline& curve) {
  const std::size_t count = curve.vertices.size();
  std::vector<int> next(count, -1), prev(count, -1);
  for (const auto& s : curve.segments) {
    next[static_cast<std::size_t>(s[0])] = s[1];
    prev[static_cast<std::size_t>(s[1])] = s[0];
  }
  std::vector<Vec3> normals = curve.normals;
  if (normals.empty()) {
    normals.assign(count, Vec3::Zero());
    for (const auto& s : curve.segments) {
      const Vec3 d = curve.vertices[static_cast<std::size_t>(s[1])] - curve.vertices[static_cast<std::size_t>(s[0])];
      const Vec3 nrm(d.y(), -d.x(), 0.0);
      normals[static_cast<std::size_t>(s[0])] += nrm;
      normals[static_cast<std::size_t>(s[1])] += nrm;
    }
    for (auto& nrm : normals) nrm.normalize();
  }
  std::vector<double> kappa(count, 0.0);
  for (std::size_t v = 0; v < count; ++v) {
    if (next[v] < 0 || prev[v] < 0) throw OpenMeshError("curve is not closed");
    const Vec3 tangent(-normals[v].y(), normals[v].x(), 0.0);
    std::vector<int> nb;
    int a = static_cast<int>(v), b = static_cast<int>(v);
    for (int step = 0; step < 3; ++step) {
      a = next[static_cast<std::size_t>(a)];
      b = prev[static_cast<std::size_t>(b)];
      nb.push_back(a);
      nb.push_back(b);
    }
    Eigen::MatrixXd design(static_cast<Eigen::Index>(nb.size()), 2);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(nb.size()));
    for (std::size_t r = 0; r < nb.size(); ++r) {
      const auto j = static_cast<std::size_t>(nb[r]);
      const double s = (curve.vertices[j] - curve.vertices[v]).dot(tangent);
      design.row(static_cast<Eigen::Index>(r)) << s, s * s;
      rhs[static_cast<Eigen::Index>(r)] = (normals[j] - normals[v]).dot(tangent);
    }
    kappa[v] = design.colPivHouseholderQr().solve(rhs)[0];
  }
  return kappa;
}

UmbilicVerdict classify_surface(const TriMesh& mesh, const UmbilicTolerances& tol,
                                const ShapeOperatorOptions& options) {
  if (mesh.triangles.empty()) throw DomainError("cannot classify an empty mesh");
  check_orientation(mesh);
  UmbilicVerdict verdict;
  for (const auto& ids : connected_components(mesh)) {
    const TriMesh part = submesh(mesh, ids);
    const auto samples = estimate_shape_operators(part, options);
    ComponentVerdict c;
    c.vertex_count = static_cast<int>(part.vertices.size());
    double diameter = 0.0;
    {
      Vec3 lo = part.vertices.front(), hi = part.vertices.front();
      for (const auto& x : part.vertices) {
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
      }
      diameter = (hi - lo).norm();
    }
    double kmin = 1e300, kmax = -1e300, ksum = 0.0, dev = 0.0;
    for (const auto& s : samples) {
      kmin = std::min(kmin, s.mean_kappa);
      kmax = std::max(kmax, s.mean_kappa);
      ksum += s.mean_kappa;
      dev = std::max(dev, s.umbilic_deviation);
    }
    c.mean_kappa = ksum / static_cast<double>(samples.size());
    const double scale = std::max(std::abs(c.mean_kappa), 1.0 / diameter);
    c.max_deviation = dev / scale;
    c.kappa_spread = (kmax - kmin) / scale;
    const double max_abs_kappa = std::max(std::abs(kmin), std::abs(kmax));
    if (c.max_deviation <= tol.deviation && max_abs_kappa <= tol.spread / diameter) {
      c.classification = SurfaceClass::Plane;
    } else if (c.max_deviation <= tol.deviation && c.kappa_spread <= tol.spread &&
               std::abs(c.mean_kappa) > tol.spread / diameter) {
      Vec3 center = Vec3::Zero();
      for (const auto& s : samples) center += s.point - s.normal / s.mean_kappa;
      center /= static_cast<double>(samples.size());
      double radius = 0.0;
      for (const auto& s : samples) radius += (s.point - center).norm();
      radius /= static_cast<double>(samples.size());
      double residual = 0.0;
      for (const auto& s : samples) residual = std::max(residual, std::abs((s.point - center).norm() - radius));
      c.center = center;
      c.radius = radius;
      c.fit_residual = residual;
      if (residual <= tol.fit * radius) c.classification = SurfaceClass::Sphere;
    }
    verdict.components.push_back(c);
  }
  return verdict;
}

}  // namespace convexlab
