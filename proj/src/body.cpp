#include "convexlab/body.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace convexlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("cap body epsilon must lie strictly inside (0, 1), got " +
                      std::to_string(epsilon));
  }
}

Box box_of(const std::vector<Vec3>& points) {
  if (points.empty()) throw DomainError("empty point list has no bounding box");
  Box b{points.front(), points.front()};
  for (const auto& p : points) {
    b.lo = b.lo.cwiseMin(p);
    b.hi = b.hi.cwiseMax(p);
  }
  return b;
}

}  // namespace

std::string Body::kind_name() const {
  return std::visit(Overloaded{
                        [](const Ball&) { return std::string("ball"); },
                        [](const Ellipsoid&) { return std::string("ellipsoid"); },
                        [](const SupportSmooth&) { return std::string("support"); },
                        [](const Polytope&) { return std::string("polytope"); },
                        [](const CapBody&) { return std::string("capbody"); },
                        [](const SampledSet&) { return std::string("sampled"); },
                    },
                    kind);
}

bool Body::is_convex() const { return !std::holds_alternative<SampledSet>(kind); }

Body make_ball(int ambient_dim, double radius, const Vec3& center) {
  check_ambient_dim(ambient_dim);
  if (!(radius > 0)) throw DomainError("ball radius must be positive");
  Vec3 c = center;
  if (ambient_dim == 2) c.z() = 0.0;
  return Body{Ball{c, radius}, ambient_dim, "ball"};
}

Body make_ellipsoid(int ambient_dim, const Vec3& semi_axes) {
  check_ambient_dim(ambient_dim);
  for (int i = 0; i < ambient_dim; ++i) {
    if (!(semi_axes[i] > 0)) throw DomainError("ellipsoid semi-axes must be positive");
  }
  Vec3 a = semi_axes;
  if (ambient_dim == 2) a.z() = 0.0;
  return Body{Ellipsoid{a}, ambient_dim, "ellipsoid"};
}

Body make_support_smooth(SupportEvaluator evaluator, std::string label) {
  const int dim = evaluator.ambient_dim();
  return Body{SupportSmooth{std::move(evaluator), label}, dim, label};
}

Body make_polytope(int ambient_dim, std::vector<Vec3> vertices) {
  check_ambient_dim(ambient_dim);
  if (static_cast<int>(vertices.size()) < ambient_dim + 1) {
    throw DomainError("polytope needs at least " + std::to_string(ambient_dim + 1) + " vertices");
  }
  Vec3 mean = Vec3::Zero();
  for (auto& v : vertices) {
    if (ambient_dim == 2) v.z() = 0.0;
    if (!v.allFinite()) throw DomainError("polytope vertex is not finite");
    mean += v;
  }
  mean /= static_cast<double>(vertices.size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vertices.size()), ambient_dim);
  double scale = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec3 d = vertices[i] - mean;
    scale = std::max(scale, d.norm());
    for (int j = 0; j < ambient_dim; ++j) m(static_cast<Eigen::Index>(i), j) = d[j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (!(scale > 0) || sv[ambient_dim - 1] <= 1e-10 * scale) {
    throw DomainError("polytope vertices do not span the ambient space (empty interior)");
  }
  return Body{Polytope{std::move(vertices)}, ambient_dim, "polytope"};
}

Body make_cap_body(int ambient_dim, double epsilon) {
  check_ambient_dim(ambient_dim);
  check_epsilon(epsilon);
  return Body{CapBody{epsilon}, ambient_dim, "capbody"};
}

Body make_sampled_surface(TriMesh mesh) {
  if (mesh.triangles.empty()) throw DomainError("sampled surface is empty");
  validate_closed(mesh);
  orient_outward(mesh);
  const double h = mean_edge_length(mesh);
  return Body{SampledSet{std::move(mesh), h}, 3, "mesh"};
}

Body make_sampled_curve(Polyline curve) {
  if (curve.segments.empty()) throw DomainError("sampled curve is empty");
  validate_closed(curve);
  double h = 0.0;
  for (const auto& s : curve.segments) h += (curve.vertices[s[1]] - curve.vertices[s[0]]).norm();
  h /= static_cast<double>(curve.segments.size());
  return Body{SampledSet{std::move(curve), h}, 2, "curve"};
}

Body make_point_set(int ambient_dim, std::vector<Vec3> points) {
  check_ambient_dim(ambient_dim);
  if (points.empty()) throw DomainError("point set is empty");
  for (auto& p : points) {
    if (ambient_dim == 2) p.z() = 0.0;
  }
  return Body{SampledSet{std::move(points), 0.0}, ambient_dim, "points"};
}

Body make_voxel_set(int ambient_dim, VoxelGrid grid) {
  check_ambient_dim(ambient_dim);
  if (!(grid.step > 0)) throw DomainError("voxel step must be positive");
  if (ambient_dim == 2) grid.dims[2] = 1;
  const std::size_t count = static_cast<std::size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2];
  if (grid.dims[0] <= 0 || grid.dims[1] <= 0 || grid.dims[2] <= 0 || grid.occupied.size() != count) {
    throw DomainError("voxel occupancy size does not match the grid dimensions");
  }
  if (std::none_of(grid.occupied.begin(), grid.occupied.end(), [](std::uint8_t v) { return v != 0; })) {
    throw DomainError("voxel set is empty");
  }
  const double h = grid.step;
  return Body{SampledSet{std::move(grid), h}, ambient_dim, "voxels"};
}

Body unit_cube() {
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i) v.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  Body b = make_polytope(3, std::move(v));
  b.name = "cube";
  return b;
}

Body unit_square() {
  Body b = make_polytope(2, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)});
  b.name = "square";
  return b;
}

Body regular_tetrahedron() {
  Body b = make_polytope(3, {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)});
  b.name = "tetrahedron";
  return b;
}

Body l_tromino() {
  Body b = make_sampled_curve(polygon({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(2, 1, 0), Vec3(1, 1, 0),
                                       Vec3(1, 2, 0), Vec3(0, 2, 0)}));
  b.name = "lshape";
  return b;
}

Body random_smooth_body(std::uint64_t seed, int index) {
  if (index < 0) throw DomainError("random body index must be nonnegative");
  auto bodies = random_smooth_bodies(seed, index + 1);
  return make_support_smooth(std::move(bodies[static_cast<std::size_t>(index)]),
                             "bumpy-" + std::to_string(seed) + "-" + std::to_string(index));
}

std::optional<SupportEvaluator> support_evaluator(const Body& body) {
  if (const auto* b = std::get_if<Ball>(&body.kind)) {
    return SupportEvaluator::ball(body.ambient_dim, b->radius, b->center);
  }
  if (const auto* e = std::get_if<Ellipsoid>(&body.kind)) {
    return SupportEvaluator::ellipsoid(body.ambient_dim, e->semi_axes);
  }
  if (const auto* s = std::get_if<SupportSmooth>(&body.kind)) return s->evaluator;
  return std::nullopt;
}

Box bounding_box(const Body& body) {
  const int dim = body.ambient_dim;
  Box box = std::visit(
      Overloaded{
          [](const Ball& b) { return Box{b.center.array() - b.radius, b.center.array() + b.radius}; },
          [](const Ellipsoid& e) { return Box{-e.semi_axes, e.semi_axes}; },
          [dim](const SupportSmooth& s) {
            Box b{Vec3::Zero(), Vec3::Zero()};
            const Vec3& shift = s.evaluator.shift();
            for (int i = 0; i < dim; ++i) {
              const Vec3 e = Vec3::Unit(i);
              b.hi[i] = s.evaluator.value(e) + shift[i];
              b.lo[i] = -(s.evaluator.value(-e) - shift[i]);
            }
            return b;
          },
          [](const Polytope& p) { return box_of(p.vertices); },
          [dim](const CapBody& c) {
            const double s = cap_body_seam_radius(c.epsilon);
            const double t = 1.0 - c.epsilon;
            return dim == 3 ? Box{Vec3(-s, -s, -t), Vec3(s, s, t)} : Box{Vec3(-s, -t, 0), Vec3(s, t, 0)};
          },
          [](const SampledSet& s) {
            return std::visit(
                Overloaded{
                    [](const TriMesh& m) { return box_of(m.vertices); },
                    [](const Polyline& c) { return box_of(c.vertices); },
                    [](const std::vector<Vec3>& p) { return box_of(p); },
                    [](const VoxelGrid& g) {
                      std::vector<Vec3> occupied;
                      for (int k = 0; k < g.dims[2]; ++k) {
                        for (int j = 0; j < g.dims[1]; ++j) {
                          for (int i = 0; i < g.dims[0]; ++i) {
                            if (g.at(i, j, k)) occupied.push_back(g.origin + g.step * Vec3(i, j, k));
                          }
                        }
                      }
                      return box_of(occupied);
                    },
                },
                s.data);
          },
      },
      body.kind);
  if (dim == 2) {
    box.lo.z() = 0.0;
    box.hi.z() = 0.0;
  }
  return box;
}

TriMesh boundary_mesh(const Body& body, int level) {
  if (body.ambient_dim != 3) throw DomainError("boundary meshes are built in R^3 only");
  if (auto eval = support_evaluator(body)) {
    TriMesh mesh = icosphere(level);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      const Vec3 u = mesh.vertices[i];
      mesh.vertices[i] = eval->gradient(u) + eval->shift();
      mesh.normals[i] = u;
    }
    return mesh;
  }
  if (const auto* c = std::get_if<CapBody>(&body.kind)) {
    CapMeshOptions options;
    options.azimuth = 24 << std::max(0, level - 2);
    options.rings = 6 << std::max(0, level - 2);
    return cap_body_mesh(c->epsilon, options);
  }
  if (const auto* s = std::get_if<SampledSet>(&body.kind)) {
    if (const auto* m = std::get_if<TriMesh>(&s->data)) return *m;
  }
  throw DomainError("no boundary mesh for a " + body.kind_name() + " body");
}

CapBodyMetrics cap_body_metrics(int n, double epsilon) {
  if (n != 1 && n != 2) throw DomainError("cap body metrics need n in {1, 2}");
  check_epsilon(epsilon);
  CapBodyMetrics m;
  const double e = epsilon;
  if (n == 2) {
    m.cap_area = 2.0 * kPi * (1.0 - e);
    m.disc_area = kPi * (1.0 - e * e);
    m.half_volume = kPi * (1.0 - e) * (1.0 - e) * (2.0 + e) / 3.0;
  } else {
    const double s = std::sqrt(1.0 - e * e);
    m.cap_area = 2.0 * std::acos(e);
    m.disc_area = 2.0 * s;
    m.half_volume = std::acos(e) - e * s;
  }
  m.ratio = m.cap_area / ((n + 1) * m.half_volume);
  return m;
}

double cap_body_seam_radius(double epsilon) {
  check_epsilon(epsilon);
  return std::sqrt(1.0 - epsilon * epsilon);
}

double cap_body_dihedral_angle(double epsilon) {
  check_epsilon(epsilon);
  return 2.0 * std::asin(epsilon);
}

double cap_body_hausdorff_to_ball(double epsilon) {
  check_epsilon(epsilon);
  // K lies inside the unit ball; the farthest ball points are the poles,
  // at distance eps above the cap tops.
  return epsilon;
}

}  // namespace convexlab
