#include "convexlab/tube_lab.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <unordered_map>

#include "convexlab/polytope_bundle.hpp"
#include "convexlab/umbilic.hpp"

namespace convexlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Projection inside(const Vec3& p) { return {0.0, p}; }

Vec3 closest_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

// Ericson, Real-Time Collision Detection, 5.1.5.
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

Projection ball_projection(const Ball& b, const Vec3& p) {
  const Vec3 d = p - b.center;
  const double len = d.norm();
  if (len <= b.radius) return inside(p);
  return {len - b.radius, b.center + b.radius * d / len};
}

Projection ellipsoid_projection(const Ellipsoid& e, int dim, const Vec3& p) {
  double level = 0.0;
  for (int i = 0; i < dim; ++i) level += (p[i] / e.semi_axes[i]) * (p[i] / e.semi_axes[i]);
  if (level <= 1.0) return inside(p);
  // Nearest point a_i^2 p_i / (a_i^2 + t); f(t) is convex and decreasing,
  // so Newton from t = 0 approaches the root from the left.
  auto f = [&](double t, double& df) {
    double s = 0.0;
    df = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double a2 = e.semi_axes[i] * e.semi_axes[i];
      const double q = e.semi_axes[i] * p[i] / (a2 + t);
      s += q * q;
      df += -2.0 * q * q / (a2 + t);
    }
    return s - 1.0;
  };
  double t = 0.0;
  for (int it = 0; it < 200; ++it) {
    double df = 0.0;
    const double v = f(t, df);
    const double next = t - v / df;
    if (!(next > t) || next - t <= 1e-16 * (1.0 + next)) {
      t = std::max(t, next);
      break;
    }
    t = next;
  }
  Vec3 x = Vec3::Zero();
  for (int i = 0; i < dim; ++i) {
    const double a2 = e.semi_axes[i] * e.semi_axes[i];
    x[i] = a2 * p[i] / (a2 + t);
  }
  return {(p - x).norm(), x};
}

struct SupportQuery {
  SupportEvaluator h;
  std::vector<Vec3> seeds;
};

Projection support_projection(const SupportQuery& q, const Vec3& p) {
  const auto& h = q.h;
  const int dim = h.ambient_dim();
  auto gap = [&](const Vec3& u) { return p.dot(u) - (h.value(u) + h.shift().dot(u)); };
  Vec3 u = q.seeds.front();
  double best = -kInf;
  for (const auto& s : q.seeds) {
    const double g = gap(s);
    if (g > best) {
      best = g;
      u = s;
    }
  }
  // Ascent on the sphere for max_u (p.u - h(u)); the maximum is the
  // distance when positive.
  const double scale = h.scale();
  for (int it = 0; it < 2000; ++it) {
    const Vec3 x = h.gradient(u) + h.shift();
    Vec3 g = p - x;
    g -= g.dot(u) * u;
    if (dim == 2) g.z() = 0.0;
    const double gnorm = g.norm();
    if (gnorm <= 1e-13 * scale) break;
    const double radius = std::max(scale, (p - x).norm());
    double step = 1.0 / radius;
    const double current = gap(u);
    Vec3 trial = u;
    for (int back = 0; back < 40; ++back) {
      trial = (u + step * g).normalized();
      if (gap(trial) >= current) break;
      step *= 0.5;
    }
    if ((trial - u).norm() < 1e-15) break;
    u = trial;
  }
  const double d = gap(u);
  if (d <= 0.0) return inside(p);
  return {d, p - d * u};
}

struct PolytopeQuery {
  int dim = 3;
  std::vector<Vec3> normals;
  std::vector<double> offsets;
  std::vector<std::array<Vec3, 3>> triangles;
  std::vector<std::array<Vec3, 2>> segments;
  double tol = 0.0;
};

PolytopeQuery make_polytope_query(const Body& body) {
  const FaceLattice lattice = build_face_lattice(body);
  PolytopeQuery q;
  q.dim = body.ambient_dim;
  double scale = 0.0;
  for (const auto& v : lattice.vertices) scale = std::max(scale, v.norm());
  q.tol = 1e-12 * (1.0 + scale);
  for (int id : lattice.faces_of_dim(q.dim - 1)) {
    const Face& f = lattice.faces[static_cast<std::size_t>(id)];
    q.normals.push_back(f.normal);
    q.offsets.push_back(f.normal.dot(lattice.vertices[static_cast<std::size_t>(f.vertices.front())]));
    if (q.dim == 2) {
      q.segments.push_back({lattice.vertices[static_cast<std::size_t>(f.vertices[0])],
                            lattice.vertices[static_cast<std::size_t>(f.vertices[1])]});
    } else {
      // Fan around the centroid over the boundary edges of the facet.
      for (int e : f.children) {
        const Face& edge = lattice.faces[static_cast<std::size_t>(e)];
        q.triangles.push_back({f.centroid, lattice.vertices[static_cast<std::size_t>(edge.vertices[0])],
                               lattice.vertices[static_cast<std::size_t>(edge.vertices[1])]});
      }
    }
  }
  return q;
}

Projection polytope_projection(const PolytopeQuery& q, const Vec3& p) {
  bool in = true;
  for (std::size_t i = 0; i < q.normals.size() && in; ++i) in = q.normals[i].dot(p) - q.offsets[i] <= q.tol;
  if (in) return inside(p);
  Projection best{kInf, p};
  for (const auto& t : q.triangles) {
    const Vec3 c = closest_on_triangle(p, t[0], t[1], t[2]);
    const double d = (p - c).norm();
    if (d < best.distance) best = {d, c};
  }
  for (const auto& s : q.segments) {
    const Vec3 c = closest_on_segment(p, s[0], s[1]);
    const double d = (p - c).norm();
    if (d < best.distance) best = {d, c};
  }
  return best;
}

Projection cap_body_projection(const CapBody& cb, int dim, const Vec3& p) {
  const int axis = dim - 1;
  Vec3 e = Vec3::Zero();
  e[axis] = 1.0;
  const Vec3 lower = -cb.epsilon * e;  // center of the sphere carrying the upper cap
  const Vec3 upper = cb.epsilon * e;
  const double dl = (p - lower).norm(), du = (p - upper).norm();
  if (dl <= 1.0 && du <= 1.0) return inside(p);
  const double slack = 1e-12;
  if (dl > 1.0) {
    const Vec3 q = lower + (p - lower) / dl;
    if ((q - upper).norm() <= 1.0 + slack) return {dl - 1.0, q};
  }
  if (du > 1.0) {
    const Vec3 q = upper + (p - upper) / du;
    if ((q - lower).norm() <= 1.0 + slack) return {du - 1.0, q};
  }
  const double s = cap_body_seam_radius(cb.epsilon);
  Vec3 radial = p;
  radial[axis] = 0.0;
  if (dim == 2) radial.z() = 0.0;
  const double rn = radial.norm();
  const Vec3 dir = rn > 0 ? Vec3(radial / rn) : Vec3::UnitX();
  const Vec3 q = s * dir;
  return {(p - q).norm(), q};
}

Projection mesh_projection(const TriMesh& mesh, const Vec3& p) {
  if (winding_number(mesh, p) > 0.5) return inside(p);
  Projection best{kInf, p};
  for (const auto& t : mesh.triangles) {
    const Vec3 c = closest_on_triangle(p, mesh.vertices[static_cast<std::size_t>(t[0])],
                                       mesh.vertices[static_cast<std::size_t>(t[1])],
                                       mesh.vertices[static_cast<std::size_t>(t[2])]);
    const double d = (p - c).norm();
    if (d < best.distance) best = {d, c};
  }
  return best;
}

Projection curve_projection(const Polyline& curve, const Vec3& p) {
  if (winding_number(curve, p) > 0.5) return inside(p);
  Projection best{kInf, p};
  for (const auto& s : curve.segments) {
    const Vec3 c = closest_on_segment(p, curve.vertices[static_cast<std::size_t>(s[0])],
                                      curve.vertices[static_cast<std::size_t>(s[1])]);
    const double d = (p - c).norm();
    if (d < best.distance) best = {d, c};
  }
  return best;
}

Projection points_projection(const std::vector<Vec3>& pts, const Vec3& p) {
  Projection best{kInf, p};
  for (const auto& x : pts) {
    const double d = (p - x).norm();
    if (d < best.distance) best = {d, x};
  }
  return best;
}

std::vector<Vec3> occupied_nodes(const VoxelGrid& g) {
  std::vector<Vec3> out;
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i)
        if (g.at(i, j, k)) out.push_back(g.origin + g.step * Vec3(i, j, k));
  return out;
}

bool is_voxel(const Body& b) {
  const auto* s = std::get_if<SampledSet>(&b.kind);
  return s && std::holds_alternative<VoxelGrid>(s->data);
}

// 1D lower envelope of parabolas; f holds squared distances in grid units.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[static_cast<std::size_t>(q)] == kInf) continue;
    if (f[static_cast<std::size_t>(v[0])] == kInf) {
      v[0] = q;
      continue;
    }
    double s = 0.0;
    while (true) {
      const int r = v[static_cast<std::size_t>(k)];
      s = ((f[static_cast<std::size_t>(q)] + double(q) * q) - (f[static_cast<std::size_t>(r)] + double(r) * r)) /
          (2.0 * (q - r));
      if (s <= z[static_cast<std::size_t>(k)] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    if (s <= z[static_cast<std::size_t>(k)]) {
      v[0] = q;
      z[1] = kInf;
      k = 0;
      continue;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = kInf;
  }
  if (f[static_cast<std::size_t>(v[0])] == kInf) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int r = v[static_cast<std::size_t>(k)];
    d[static_cast<std::size_t>(q)] = double(q - r) * (q - r) + f[static_cast<std::size_t>(r)];
  }
}

}  // namespace

struct DistanceSource::Query {
  std::function<Projection(const Vec3&)> project;
};

DistanceSource::DistanceSource(std::vector<Body> bodies) : bodies_(std::move(bodies)) {
  if (bodies_.empty()) throw DomainError("distance source needs at least one body");
  dim_ = bodies_.front().ambient_dim;
  for (const auto& b : bodies_) {
    if (b.ambient_dim != dim_) throw DomainError("bodies have different ambient dimensions");
    auto q = std::make_shared<Query>();
    const int dim = b.ambient_dim;
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Ball>) {
            q->project = [k](const Vec3& p) { return ball_projection(k, p); };
          } else if constexpr (std::is_same_v<T, Ellipsoid>) {
            q->project = [k, dim](const Vec3& p) { return ellipsoid_projection(k, dim, p); };
          } else if constexpr (std::is_same_v<T, SupportSmooth>) {
            auto sq = std::make_shared<SupportQuery>(SupportQuery{k.evaluator, SphereQuadrature::make(dim, 3).nodes});
            q->project = [sq](const Vec3& p) { return support_projection(*sq, p); };
          } else if constexpr (std::is_same_v<T, Polytope>) {
            auto pq = std::make_shared<PolytopeQuery>(make_polytope_query(b));
            q->project = [pq](const Vec3& p) { return polytope_projection(*pq, p); };
          } else if constexpr (std::is_same_v<T, CapBody>) {
            q->project = [k, dim](const Vec3& p) { return cap_body_projection(k, dim, p); };
          } else {
            std::visit(
                [&](const auto& data) {
                  using D = std::decay_t<decltype(data)>;
                  if constexpr (std::is_same_v<D, TriMesh>) {
                    q->project = [data](const Vec3& p) { return mesh_projection(data, p); };
                  } else if constexpr (std::is_same_v<D, Polyline>) {
                    q->project = [data](const Vec3& p) { return curve_projection(data, p); };
                  } else if constexpr (std::is_same_v<D, std::vector<Vec3>>) {
                    if (data.empty()) throw DomainError("empty point set");
                    q->project = [data](const Vec3& p) { return points_projection(data, p); };
                  } else {
                    auto nodes = occupied_nodes(data);
                    if (nodes.empty()) throw DomainError("voxel set has no occupied nodes");
                    has_nearest_ = false;
                    q->project = [nodes](const Vec3& p) { return points_projection(nodes, p); };
                  }
                },
                k.data);
          }
        },
        b.kind);
    queries_.push_back(std::move(q));
  }
}

Projection DistanceSource::project(const Vec3& p) const {
  Projection best{kInf, p};
  for (const auto& q : queries_) {
    const Projection c = q->project(p);
    if (c.distance < best.distance) best = c;
    if (best.distance == 0.0) break;
  }
  return best;
}

Box DistanceSource::bounding_box() const {
  Box box = convexlab::bounding_box(bodies_.front());
  for (std::size_t i = 1; i < bodies_.size(); ++i) {
    const Box b = convexlab::bounding_box(bodies_[i]);
    box.lo = box.lo.cwiseMin(b.lo);
    box.hi = box.hi.cwiseMax(b.hi);
  }
  return box;
}

double DistanceField::interpolate(const Vec3& p) const {
  const Vec3 g = (p - origin) / step;
  int idx[3];
  double t[3];
  for (int a = 0; a < 3; ++a) {
    if (dims[static_cast<std::size_t>(a)] == 1) {
      idx[a] = 0;
      t[a] = 0.0;
      continue;
    }
    const double c = std::clamp(g[a], 0.0, double(dims[static_cast<std::size_t>(a)] - 1));
    idx[a] = std::min(static_cast<int>(std::floor(c)), dims[static_cast<std::size_t>(a)] - 2);
    t[a] = c - idx[a];
  }
  double out = 0.0;
  for (int corner = 0; corner < 8; ++corner) {
    const int di = corner & 1, dj = (corner >> 1) & 1, dk = (corner >> 2) & 1;
    if ((dk && dims[2] == 1) || (dj && dims[1] == 1) || (di && dims[0] == 1)) continue;
    const double w = (di ? t[0] : 1 - t[0]) * (dj ? t[1] : 1 - t[1]) * (dk ? t[2] : 1 - t[2]);
    out += w * at(idx[0] + di, idx[1] + dj, idx[2] + dk);
  }
  return out;
}

Vec3 DistanceField::interpolated_gradient(const Vec3& p) const {
  Vec3 g = Vec3::Zero();
  const double e = 1e-3 * step;
  for (int a = 0; a < ambient_dim; ++a) {
    Vec3 d = Vec3::Zero();
    d[a] = e;
    g[a] = (interpolate(p + d) - interpolate(p - d)) / (2 * e);
  }
  return g;
}

Box padded_box(const std::vector<Body>& bodies, double pad) {
  if (bodies.empty()) throw DomainError("no bodies");
  Box box = bounding_box(bodies.front());
  for (std::size_t i = 1; i < bodies.size(); ++i) {
    const Box b = bounding_box(bodies[i]);
    box.lo = box.lo.cwiseMin(b.lo);
    box.hi = box.hi.cwiseMax(b.hi);
  }
  for (int a = 0; a < bodies.front().ambient_dim; ++a) {
    box.lo[a] -= pad;
    box.hi[a] += pad;
  }
  return box;
}

std::vector<double> euclidean_distance_transform(const std::vector<std::uint8_t>& occupied,
                                                 const std::array<int, 3>& dims, double step) {
  const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  if (occupied.size() != total) throw DomainError("occupancy size does not match the grid");
  if (std::none_of(occupied.begin(), occupied.end(), [](std::uint8_t c) { return c != 0; })) {
    throw DomainError("distance transform of an empty set");
  }
  std::vector<double> f(total);
  for (std::size_t i = 0; i < total; ++i) f[i] = occupied[i] ? 0.0 : kInf;
  const int longest = std::max({dims[0], dims[1], dims[2]});
  std::vector<double> line(static_cast<std::size_t>(longest)), out(static_cast<std::size_t>(longest));
  std::vector<int> v(static_cast<std::size_t>(longest));
  std::vector<double> z(static_cast<std::size_t>(longest) + 1);
  const std::array<std::size_t, 3> stride{1, static_cast<std::size_t>(dims[0]),
                                          static_cast<std::size_t>(dims[0]) * dims[1]};
  for (int axis = 0; axis < 3; ++axis) {
    const int len = dims[static_cast<std::size_t>(axis)];
    if (len == 1) continue;
    line.resize(static_cast<std::size_t>(len));
    out.resize(static_cast<std::size_t>(len));
    v.resize(static_cast<std::size_t>(len));
    z.resize(static_cast<std::size_t>(len) + 1);
    const int o1 = (axis + 1) % 3, o2 = (axis + 2) % 3;
    for (int b = 0; b < dims[static_cast<std::size_t>(o2)]; ++b) {
      for (int a = 0; a < dims[static_cast<std::size_t>(o1)]; ++a) {
        const std::size_t base = a * stride[static_cast<std::size_t>(o1)] + b * stride[static_cast<std::size_t>(o2)];
        for (int q = 0; q < len; ++q) line[static_cast<std::size_t>(q)] = f[base + q * stride[static_cast<std::size_t>(axis)]];
        edt_1d(line, out, v, z);
        for (int q = 0; q < len; ++q) f[base + q * stride[static_cast<std::size_t>(axis)]] = out[static_cast<std::size_t>(q)];
      }
    }
  }
  for (auto& x : f) x = std::sqrt(x) * step;
  return f;
}

DistanceField build_distance_field(const std::vector<Body>& bodies, const Box& bbox, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("grid step must be positive");
  auto source = std::make_shared<DistanceSource>(bodies);
  const int dim = source->ambient_dim();
  const Box inner = source->bounding_box();
  DistanceField field;
  field.ambient_dim = dim;
  field.step = h;
  Vec3 lo = bbox.lo;
  for (const auto& b : bodies) {
    if (!is_voxel(b)) continue;
    const auto& g = std::get<VoxelGrid>(std::get<SampledSet>(b.kind).data);
    if (std::abs(g.step - h) > 1e-12 * h) throw DomainError("voxel grid step must equal the field step");
    for (int a = 0; a < dim; ++a) lo[a] = g.origin[a] - h * std::ceil((g.origin[a] - bbox.lo[a]) / h - 1e-9);
  }
  double margin = kInf;
  for (int a = 0; a < dim; ++a) {
    margin = std::min({margin, inner.lo[a] - lo[a], bbox.hi[a] - inner.hi[a]});
  }
  if (margin < 0.0) throw DomainError("bounding box does not contain the bodies");
  field.margin = margin;
  field.origin = Vec3::Zero();
  for (int a = 0; a < dim; ++a) {
    field.origin[a] = lo[a];
    field.dims[static_cast<std::size_t>(a)] = static_cast<int>(std::ceil((bbox.hi[a] - lo[a]) / h - 1e-9)) + 1;
    if (field.dims[static_cast<std::size_t>(a)] < 2) throw DomainError("bounding box is thinner than one cell");
  }
  const std::size_t total = static_cast<std::size_t>(field.dims[0]) * field.dims[1] * field.dims[2];
  field.values.assign(total, kInf);

  std::vector<Body> exact;
  for (const auto& b : bodies) {
    if (!is_voxel(b)) {
      exact.push_back(b);
      continue;
    }
    const auto& g = std::get<VoxelGrid>(std::get<SampledSet>(b.kind).data);
    std::vector<std::uint8_t> occ(total, 0);
    int off[3] = {0, 0, 0};
    for (int a = 0; a < dim; ++a) off[a] = static_cast<int>(std::lround((g.origin[a] - field.origin[a]) / h));
    for (int k = 0; k < g.dims[2]; ++k)
      for (int j = 0; j < g.dims[1]; ++j)
        for (int i = 0; i < g.dims[0]; ++i) {
          if (!g.at(i, j, k)) continue;
          const int fi = i + off[0], fj = j + off[1], fk = k + off[2];
          if (fi < 0 || fj < 0 || fk < 0 || fi >= field.dims[0] || fj >= field.dims[1] || fk >= field.dims[2]) {
            throw DomainError("voxel set exceeds the bounding box");
          }
          occ[field.index(fi, fj, fk)] = 1;
        }
    const auto d = euclidean_distance_transform(occ, field.dims, h);
    for (std::size_t i = 0; i < total; ++i) field.values[i] = std::min(field.values[i], d[i]);
  }
  if (!exact.empty()) {
    const DistanceSource direct(exact);
    for (int k = 0; k < field.dims[2]; ++k)
      for (int j = 0; j < field.dims[1]; ++j)
        for (int i = 0; i < field.dims[0]; ++i) {
          double& v = field.values[field.index(i, j, k)];
          v = std::min(v, direct.distance(field.node(i, j, k)));
        }
  }
  field.source = std::move(source);
  return field;
}

DistanceField build_distance_field(const Body& body, const Box& bbox, double h) {
  return build_distance_field(std::vector<Body>{body}, bbox, h);
}

double lipschitz_ratio(const DistanceField& field) {
  double worst = 0.0;
  for (int k = 0; k < field.dims[2]; ++k)
    for (int j = 0; j < field.dims[1]; ++j)
      for (int i = 0; i < field.dims[0]; ++i) {
        const double v = field.at(i, j, k);
        if (i + 1 < field.dims[0]) worst = std::max(worst, std::abs(field.at(i + 1, j, k) - v));
        if (j + 1 < field.dims[1]) worst = std::max(worst, std::abs(field.at(i, j + 1, k) - v));
        if (k + 1 < field.dims[2]) worst = std::max(worst, std::abs(field.at(i, j, k + 1) - v));
      }
  return worst / field.step;
}

double offset_volume(const DistanceField& field, double rho, int subsamples) {
  if (!(rho >= 0.0)) throw DomainError("offset radius must be non-negative");
  if (rho + field.step > field.margin) {
    throw DomainError("offset radius plus grid step exceeds the margin of the bounding box");
  }
  const bool planar = field.ambient_dim == 2;
  const int s = subsamples > 0 ? subsamples : (planar ? 16 : 8);
  const double cell = planar ? field.step * field.step : field.step * field.step * field.step;
  const int nk = planar ? 1 : field.dims[2] - 1;
  double full = 0.0, partial = 0.0;
  for (int k = 0; k < nk; ++k)
    for (int j = 0; j + 1 < field.dims[1]; ++j)
      for (int i = 0; i + 1 < field.dims[0]; ++i) {
        double c[8];
        double lo = kInf, hi = -kInf;
        const int corners = planar ? 4 : 8;
        for (int q = 0; q < corners; ++q) {
          c[q] = field.at(i + (q & 1), j + ((q >> 1) & 1), k + ((q >> 2) & 1));
          lo = std::min(lo, c[q]);
          hi = std::max(hi, c[q]);
        }
        if (hi <= rho) {
          full += 1.0;
          continue;
        }
        if (lo > rho) continue;
        int count = 0;
        const int sz = planar ? 1 : s;
        for (int c3 = 0; c3 < sz; ++c3)
          for (int b = 0; b < s; ++b)
            for (int a = 0; a < s; ++a) {
              const double x = (a + 0.5) / s, y = (b + 0.5) / s, z = planar ? 0.0 : (c3 + 0.5) / s;
              double v = (1 - x) * (1 - y) * c[0] + x * (1 - y) * c[1] + (1 - x) * y * c[2] + x * y * c[3];
              if (!planar) {
                v = (1 - z) * v + z * ((1 - x) * (1 - y) * c[4] + x * (1 - y) * c[5] + (1 - x) * y * c[6] + x * y * c[7]);
              }
              if (v <= rho) ++count;
            }
        partial += static_cast<double>(count) / (planar ? s * s : s * s * s);
      }
  return (full + partial) * cell;
}

std::string to_string(SteinerVerdict v) {
  return v == SteinerVerdict::ConsistentWithReach ? "ConsistentWithReach" : "PolynomialityViolated";
}

SteinerFit steiner_fit_volumes(int n, const std::vector<double>& radii, const std::vector<double>& volumes,
                               double threshold) {
  if (radii.size() != volumes.size()) throw DomainError("radii and volumes differ in length");
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  const auto distinct = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
  if (distinct < n + 3) {
    throw DomainError("Steiner fit needs at least " + std::to_string(n + 3) + " distinct radii");
  }
  const int deg = n + 1;
  const double rmax = sorted.back();
  Eigen::MatrixXd A(static_cast<Eigen::Index>(radii.size()), deg + 1);
  Eigen::VectorXd b(static_cast<Eigen::Index>(radii.size()));
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double x = radii[i] / rmax;
    double p = 1.0;
    for (int j = 0; j <= deg; ++j) {
      A(static_cast<Eigen::Index>(i), j) = p;
      p *= x;
    }
    b[static_cast<Eigen::Index>(i)] = volumes[i];
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto sv = svd.singularValues();
  if (sv[sv.size() - 1] <= 1e-10 * sv[0]) throw NumericError("radii too clustered for a stable Steiner fit");
  const Eigen::VectorXd coef = svd.solve(b);
  SteinerFit fit;
  fit.radii = radii;
  fit.volumes = volumes;
  fit.threshold = threshold;
  double p = 1.0;
  for (int j = 0; j <= deg; ++j) {
    fit.coefficients.push_back(coef[j] / p);
    p *= rmax;
  }
  const double rmin = sorted.front();
  double vmin = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] == rmin) vmin = volumes[i];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    worst = std::max(worst, std::abs(evaluate_polynomial(fit.coefficients, radii[i]) - volumes[i]));
  }
  fit.residual = worst / vmin;
  fit.verdict = fit.residual > threshold ? SteinerVerdict::PolynomialityViolated : SteinerVerdict::ConsistentWithReach;
  return fit;
}

SteinerFit steiner_fit(const DistanceField& field, const std::vector<double>& radii, double threshold) {
  std::vector<double> volumes;
  volumes.reserve(radii.size());
  for (double r : radii) volumes.push_back(offset_volume(field, r));
  return steiner_fit_volumes(field.ambient_dim - 1, radii, volumes, threshold);
}

namespace {

struct EdgeKey {
  std::size_t a, b;
  bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
};
struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const { return std::hash<std::size_t>()(k.a * 0x9E3779B97F4A7C15ULL ^ k.b); }
};

class Welder {
 public:
  Welder(const DistanceField& f, double r) : f_(f), r_(r) {}

  double value(std::size_t id) const {
    const double v = f_.values[id];
    return v == r_ ? r_ + 1e-9 * f_.step : v;
  }
  Vec3 position(std::size_t id) const {
    const int nx = f_.dims[0], ny = f_.dims[1];
    const int i = static_cast<int>(id % nx), j = static_cast<int>((id / nx) % ny), k = static_cast<int>(id / (std::size_t(nx) * ny));
    return f_.node(i, j, k);
  }
  int vertex(std::size_t a, std::size_t b) {
    const EdgeKey key{std::min(a, b), std::max(a, b)};
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    const double va = value(key.a), vb = value(key.b);
    const double t = (r_ - va) / (vb - va);
    points.push_back(position(key.a) + t * (position(key.b) - position(key.a)));
    const int id = static_cast<int>(points.size()) - 1;
    map_.emplace(key, id);
    return id;
  }

  std::vector<Vec3> points;

 private:
  const DistanceField& f_;
  double r_;
  std::unordered_map<EdgeKey, int, EdgeKeyHash> map_;
};

Vec3 level_normal(const DistanceField& field, const Vec3& x) {
  if (field.source && field.source->has_nearest()) {
    const Projection pr = field.source->project(x);
    if (pr.distance > 0.0) return (x - pr.nearest) / pr.distance;
  }
  Vec3 g = field.interpolated_gradient(x);
  const double len = g.norm();
  return len > 0 ? Vec3(g / len) : Vec3::UnitX();
}

void check_closed_level(const DistanceField& field, double r) {
  for (int k = 0; k < field.dims[2]; ++k)
    for (int j = 0; j < field.dims[1]; ++j)
      for (int i = 0; i < field.dims[0]; ++i) {
        const bool boundary = i == 0 || j == 0 || i == field.dims[0] - 1 || j == field.dims[1] - 1 ||
                              (field.ambient_dim == 3 && (k == 0 || k == field.dims[2] - 1));
        if (boundary && field.at(i, j, k) < r) {
          throw OpenMeshError("level set reaches the boundary of the grid");
        }
      }
}

}  // namespace

OffsetSurface extract_level_set(const DistanceField& field, double r, bool estimate_curvature) {
  if (r < 2.0 * field.step) throw DomainError("level r must be at least twice the grid step");
  check_closed_level(field, r);
  OffsetSurface out;
  out.ambient_dim = field.ambient_dim;
  out.r = r;
  Welder weld(field, r);
  if (field.ambient_dim == 3) {
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int k = 0; k + 1 < field.dims[2]; ++k)
      for (int j = 0; j + 1 < field.dims[1]; ++j)
        for (int i = 0; i + 1 < field.dims[0]; ++i) {
          std::size_t corner[8];
          bool any_in = false, any_out = false;
          for (int q = 0; q < 8; ++q) {
            corner[q] = field.index(i + (q & 1), j + ((q >> 1) & 1), k + ((q >> 2) & 1));
            (weld.value(corner[q]) < r ? any_in : any_out) = true;
          }
          if (!any_in || !any_out) continue;
          for (const auto& p : perms) {
            int ids[4] = {0, 1 << p[0], 0, 7};
            ids[2] = ids[1] | (1 << p[1]);
            std::size_t tet[4];
            double val[4];
            Vec3 pos[4];
            std::vector<int> in, outside;
            for (int q = 0; q < 4; ++q) {
              tet[q] = corner[ids[q]];
              val[q] = weld.value(tet[q]);
              pos[q] = weld.position(tet[q]);
              (val[q] < r ? in : outside).push_back(q);
            }
            if (in.empty() || outside.empty()) continue;
            // Orientation from edge midpoints, which never degenerate.
            Vec3 across = Vec3::Zero();
            for (int q : outside) across += pos[q] / static_cast<double>(outside.size());
            for (int q : in) across -= pos[q] / static_cast<double>(in.size());
            auto mid = [&](int a, int b) { return 0.5 * (pos[a] + pos[b]); };
            auto emit = [&](int a, int b, int c, const Vec3& ma, const Vec3& mb, const Vec3& mc) {
              if ((mb - ma).cross(mc - ma).dot(across) < 0) std::swap(b, c);
              out.mesh.triangles.push_back({a, b, c});
            };
            if (in.size() == 1 || outside.size() == 1) {
              const bool lone_in = in.size() == 1;
              const int lone = lone_in ? in[0] : outside[0];
              const auto& rest = lone_in ? outside : in;
              emit(weld.vertex(tet[lone], tet[rest[0]]), weld.vertex(tet[lone], tet[rest[1]]),
                   weld.vertex(tet[lone], tet[rest[2]]), mid(lone, rest[0]), mid(lone, rest[1]), mid(lone, rest[2]));
            } else {
              const int a = weld.vertex(tet[in[0]], tet[outside[0]]);
              const int b = weld.vertex(tet[in[0]], tet[outside[1]]);
              const int c = weld.vertex(tet[in[1]], tet[outside[1]]);
              const int d = weld.vertex(tet[in[1]], tet[outside[0]]);
              const Vec3 ma = mid(in[0], outside[0]), mb = mid(in[0], outside[1]);
              const Vec3 mc = mid(in[1], outside[1]), md = mid(in[1], outside[0]);
              emit(a, b, c, ma, mb, mc);
              emit(a, c, d, ma, mc, md);
            }
          }
        }
    out.mesh.vertices = std::move(weld.points);
    out.mesh.normals.reserve(out.mesh.vertices.size());
    for (const auto& x : out.mesh.vertices) out.mesh.normals.push_back(level_normal(field, x));
    validate_closed(out.mesh);
    if (estimate_curvature) {
      std::vector<int> failed;
      for (const auto& smp : estimate_shape_operators(out.mesh, ShapeOperatorOptions{}, failed)) {
        out.principal.push_back({smp.principal[0], smp.principal[1]});
      }
    }
  } else {
    for (int j = 0; j + 1 < field.dims[1]; ++j)
      for (int i = 0; i + 1 < field.dims[0]; ++i) {
        const std::size_t c[4] = {field.index(i, j, 0), field.index(i + 1, j, 0), field.index(i, j + 1, 0),
                                  field.index(i + 1, j + 1, 0)};
        const int tris[2][3] = {{0, 1, 3}, {0, 3, 2}};
        for (const auto& t : tris) {
          std::vector<int> in, outside;
          double val[3];
          Vec3 pos[3];
          for (int q = 0; q < 3; ++q) {
            val[q] = weld.value(c[t[q]]);
            pos[q] = weld.position(c[t[q]]);
            (val[q] < r ? in : outside).push_back(q);
          }
          if (in.empty() || outside.empty()) continue;
          Vec3 across = Vec3::Zero();
          for (int q : outside) across += pos[q] / static_cast<double>(outside.size());
          for (int q : in) across -= pos[q] / static_cast<double>(in.size());
          const bool lone_in = in.size() == 1;
          const int lone = lone_in ? in[0] : outside[0];
          const auto& rest = lone_in ? outside : in;
          int a = weld.vertex(c[t[lone]], c[t[rest[0]]]);
          int b = weld.vertex(c[t[lone]], c[t[rest[1]]]);
          const Vec3 d = 0.5 * (pos[rest[1]] - pos[rest[0]]);
          // Outward normal of segment a->b is (d.y, -d.x).
          if (d.y() * across.x() - d.x() * across.y() < 0) std::swap(a, b);
          out.curve.segments.push_back({a, b});
        }
      }
    out.curve.vertices = std::move(weld.points);
    out.curve.normals.reserve(out.curve.vertices.size());
    for (const auto& x : out.curve.vertices) out.curve.normals.push_back(level_normal(field, x));
    validate_closed(out.curve);
    if (estimate_curvature) {
      for (double kappa : estimate_curve_curvatures(out.curve)) out.principal.push_back({kappa});
    }
  }
  return out;
}

double level_set_measure(const OffsetSurface& surface) {
  return surface.ambient_dim == 3 ? surface_area(surface.mesh) : curve_length(surface.curve);
}

double offset_curvature(double kappa, double r) { return kappa / (1.0 + r * kappa); }

std::vector<double> complement_curvatures(const std::vector<double>& kappa) {
  std::vector<double> out;
  out.reserve(kappa.size());
  for (double k : kappa) out.push_back(-k);
  return out;
}

OffsetCurvatureReport offset_curvature_check(const SupportEvaluator& body, double r, int level) {
  if (body.ambient_dim() != 3) throw DomainError("offset curvature check needs a body in R^3");
  if (!(r >= 0.0)) throw DomainError("offset radius must be non-negative");
  TriMesh mesh = icosphere(level);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Vec3 u = mesh.vertices[v];
    mesh.normals.push_back(u);
    mesh.vertices[v] = body.gradient(u) + body.shift() + r * u;
  }
  const auto samples = estimate_shape_operators(mesh);
  OffsetCurvatureReport rep;
  rep.r = r;
  rep.level = level;
  rep.vertices = static_cast<int>(mesh.vertices.size());
  rep.min_predicted = kInf;
  for (std::size_t v = 0; v < samples.size(); ++v) {
    const auto pd = principal_data(body, mesh.normals[v]);
    std::vector<double> pred;
    for (double k : pd.curvatures) pred.push_back(offset_curvature(k, r));
    std::sort(pred.begin(), pred.end());
    const double top = pred.back();
    rep.max_predicted = std::max(rep.max_predicted, top);
    rep.min_predicted = std::min(rep.min_predicted, pred.front());
    for (int j = 0; j < 2; ++j) {
      rep.max_relative_deviation =
          std::max(rep.max_relative_deviation, std::abs(samples[v].principal[j] - pred[static_cast<std::size_t>(j)]) / top);
    }
  }
  return rep;
}

namespace {

constexpr char kMagic[8] = {'C', 'L', 'X', 'F', 'I', 'E', 'L', 'D'};

template <typename T>
void put(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw ParseError("truncated field file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_field_binary(std::ostream& out, const DistanceField& field) {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, 1);
  put<std::int32_t>(out, field.ambient_dim);
  for (int d : field.dims) put<std::int32_t>(out, d);
  for (int a = 0; a < 3; ++a) put<double>(out, field.origin[a]);
  put<double>(out, field.step);
  for (double v : field.values) put<double>(out, v);
}

void write_field_binary(const std::filesystem::path& path, const DistanceField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_field_binary(out, field);
}

DistanceField read_field_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a distance field file");
  }
  if (get<std::uint32_t>(in) != 1) throw ParseError("unsupported field file version");
  DistanceField f;
  f.ambient_dim = get<std::int32_t>(in);
  check_ambient_dim(f.ambient_dim);
  for (auto& d : f.dims) {
    d = get<std::int32_t>(in);
    if (d < 1) throw ParseError("bad grid dimensions");
  }
  for (int a = 0; a < 3; ++a) f.origin[a] = get<double>(in);
  f.step = get<double>(in);
  const std::size_t total = static_cast<std::size_t>(f.dims[0]) * f.dims[1] * f.dims[2];
  f.values.resize(total);
  for (auto& v : f.values) v = get<double>(in);
  return f;
}

}  // namespace convexlab
