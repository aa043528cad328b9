#include "convexlab/polytope_bundle.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "convexlab/heintze_karcher.hpp"

namespace convexlab {

std::vector<int> FaceLattice::faces_of_dim(int dim) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (faces[i].dim == dim) out.push_back(static_cast<int>(i));
  }
  return out;
}

int FaceLattice::vertex_face(int i) const {
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (faces[f].dim == 0 && faces[f].vertices.front() == i) return static_cast<int>(f);
  }
  throw DomainError("vertex " + std::to_string(i) + " is not in the lattice");
}

std::vector<int> FaceLattice::incident_facets(int id) const {
  const auto& verts = faces[static_cast<std::size_t>(id)].vertices;
  std::vector<int> out;
  for (int f : faces_of_dim(n())) {
    const auto& fv = faces[static_cast<std::size_t>(f)].vertices;
    if (std::includes(fv.begin(), fv.end(), verts.begin(), verts.end())) out.push_back(f);
  }
  return out;
}

namespace {

struct Plane {
  Vec3 normal;
  double offset;
};

double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double numer = std::abs(a.dot(b.cross(c)));
  const double denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(numer, denom);
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Vec3 centroid_of(const std::vector<Vec3>& pts, const std::vector<int>& ids) {
  Vec3 c = Vec3::Zero();
  for (int i : ids) c += pts[static_cast<std::size_t>(i)];
  return c / static_cast<double>(ids.size());
}

// Supporting hyperplanes through tuples of vertices, with the vertex sets
// they touch.
std::map<std::vector<int>, Plane> supporting_facets(int dim, const std::vector<Vec3>& v,
                                                    double tol) {
  const int count = static_cast<int>(v.size());
  std::map<std::vector<int>, Plane> facets;
  auto consider = [&](Vec3 normal, const Vec3& on) {
    const double len = normal.norm();
    if (len <= tol) return;
    normal /= len;
    bool pos = false;
    bool neg = false;
    std::vector<int> touching;
    for (int i = 0; i < count; ++i) {
      const double s = normal.dot(v[static_cast<std::size_t>(i)] - on);
      if (s > tol) pos = true;
      else if (s < -tol) neg = true;
      else touching.push_back(i);
      if (pos && neg) return;
    }
    if (pos) normal = -normal;
    facets.try_emplace(touching, Plane{normal, normal.dot(on)});
  };
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      for (int j = i + 1; j < count; ++j) {
        const Vec3 d = v[static_cast<std::size_t>(j)] - v[static_cast<std::size_t>(i)];
        consider(Vec3(d.y(), -d.x(), 0.0), v[static_cast<std::size_t>(i)]);
      }
    }
  } else {
    for (int i = 0; i < count; ++i) {
      for (int j = i + 1; j < count; ++j) {
        for (int k = j + 1; k < count; ++k) {
          const Vec3& a = v[static_cast<std::size_t>(i)];
          const Vec3 nrm = (v[static_cast<std::size_t>(j)] - a).cross(v[static_cast<std::size_t>(k)] - a);
          consider(nrm, a);
        }
      }
    }
  }
  return facets;
}

// Facet vertices in counter-clockwise order seen from outside.
std::vector<int> cyclic_order(const std::vector<Vec3>& v, const std::vector<int>& ids, const Vec3& normal) {
  const Vec3 c = centroid_of(v, ids);
  const Vec3 e1 = (v[static_cast<std::size_t>(ids.front())] - c).normalized();
  const Vec3 e2 = normal.cross(e1);
  std::vector<std::pair<double, int>> keyed;
  for (int i : ids) {
    const Vec3 d = v[static_cast<std::size_t>(i)] - c;
    keyed.emplace_back(std::atan2(d.dot(e2), d.dot(e1)), i);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  for (const auto& [angle, i] : keyed) out.push_back(i);
  return out;
}

}  // namespace

FaceLattice build_face_lattice(const Body& polytope) {
  const auto* p = std::get_if<Polytope>(&polytope.kind);
  if (!p) throw DomainError("face lattice needs a polytope body, got " + polytope.kind_name());
  return build_face_lattice(polytope.ambient_dim, p->vertices);
}

FaceLattice build_face_lattice(int ambient_dim, const std::vector<Vec3>& input) {
  const Body validated = make_polytope(ambient_dim, input);
  const auto& verts = std::get<Polytope>(validated.kind).vertices;
  FaceLattice lat;
  lat.ambient_dim = ambient_dim;
  lat.vertices = verts;
  const int n = ambient_dim - 1;

  double scale = 0.0;
  const Vec3 mean = centroid_of(verts, [&] {
    std::vector<int> all(verts.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return all;
  }());
  for (const auto& x : verts) scale = std::max(scale, (x - mean).norm());
  const double tol = 1e-9 * std::max(scale, 1.0);

  const auto facet_planes = supporting_facets(ambient_dim, verts, tol);

  // Every vertex must be an extreme point: its incident facet normals span
  // the ambient space.
  for (std::size_t i = 0; i < verts.size(); ++i) {
    Eigen::MatrixXd normals(3, 0);
    for (const auto& [ids, plane] : facet_planes) {
      if (std::binary_search(ids.begin(), ids.end(), static_cast<int>(i))) {
        normals.conservativeResize(3, normals.cols() + 1);
        normals.col(normals.cols() - 1) = plane.normal;
      }
    }
    const auto rank = normals.cols() == 0 ? 0 : Eigen::FullPivLU<Eigen::MatrixXd>(normals).setThreshold(1e-9).rank();
    if (rank < ambient_dim) {
      throw DomainError("vertex " + std::to_string(i) + " is not in convex position");
    }
  }

  auto add_face = [&](int dim, std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    Face f;
    f.dim = dim;
    f.vertices = std::move(ids);
    f.centroid = centroid_of(verts, f.vertices);
    lat.faces.push_back(std::move(f));
    return static_cast<int>(lat.faces.size()) - 1;
  };

  for (std::size_t i = 0; i < verts.size(); ++i) add_face(0, {static_cast<int>(i)});

  std::vector<std::pair<std::vector<int>, Plane>> facets(facet_planes.begin(), facet_planes.end());
  if (ambient_dim == 3) {
    std::set<std::pair<int, int>> edges;
    for (const auto& [ids, plane] : facets) {
      const auto ring = cyclic_order(verts, ids, plane.normal);
      for (std::size_t j = 0; j < ring.size(); ++j) {
        const int a = ring[j];
        const int b = ring[(j + 1) % ring.size()];
        edges.emplace(std::min(a, b), std::max(a, b));
      }
    }
    for (const auto& [a, b] : edges) {
      const int id = add_face(1, {a, b});
      lat.faces[static_cast<std::size_t>(id)].basis = {(verts[static_cast<std::size_t>(b)] - verts[static_cast<std::size_t>(a)]).normalized()};
    }
  }
  for (const auto& [ids, plane] : facets) {
    const int id = add_face(n, ids);
    auto& f = lat.faces[static_cast<std::size_t>(id)];
    f.normal = plane.normal;
    if (n == 1) {
      f.basis = {Vec3(-plane.normal.y(), plane.normal.x(), 0.0)};
    } else {
      const Vec3 e1 = (verts[static_cast<std::size_t>(ids[0])] - f.centroid).normalized();
      f.basis = {e1, plane.normal.cross(e1)};
    }
  }
  {
    std::vector<int> all(verts.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    const int id = add_face(ambient_dim, all);
    for (int d = 0; d < ambient_dim; ++d) lat.faces[static_cast<std::size_t>(id)].basis.push_back(Vec3::Unit(d));
  }
  for (std::size_t i = 0; i < lat.faces.size(); ++i) {
    for (std::size_t j = 0; j < lat.faces.size(); ++j) {
      auto& lo = lat.faces[i];
      const auto& hi = lat.faces[j];
      if (hi.dim != lo.dim + 1) continue;
      if (std::includes(hi.vertices.begin(), hi.vertices.end(), lo.vertices.begin(), lo.vertices.end())) {
        lo.parents.push_back(static_cast<int>(j));
        lat.faces[j].children.push_back(static_cast<int>(i));
      }
    }
  }
  return lat;
}

double face_measure(const FaceLattice& lat, int id) {
  const Face& f = lat.faces.at(static_cast<std::size_t>(id));
  const auto& v = lat.vertices;
  if (f.dim == 0) return 1.0;
  if (f.dim == 1) {
    if (lat.ambient_dim == 2 || f.vertices.size() == 2) {
      // Extreme points only, so an edge has exactly two vertices.
      return (v[static_cast<std::size_t>(f.vertices[0])] - v[static_cast<std::size_t>(f.vertices[1])]).norm();
    }
  }
  if (f.dim == 2 && lat.ambient_dim == 3) {
    const auto ring = cyclic_order(v, f.vertices, f.normal);
    double area = 0.0;
    for (std::size_t j = 0; j < ring.size(); ++j) {
      const Vec3& a = v[static_cast<std::size_t>(ring[j])];
      const Vec3& b = v[static_cast<std::size_t>(ring[(j + 1) % ring.size()])];
      area += (a - f.centroid).cross(b - f.centroid).dot(f.normal);
    }
    return 0.5 * area;
  }
  if (f.dim == lat.ambient_dim) return polytope_volume(lat);
  throw DomainError("no measure for this face");
}

double polytope_volume(const FaceLattice& lat) {
  double sum = 0.0;
  for (int f : lat.faces_of_dim(lat.n())) {
    const Face& face = lat.faces[static_cast<std::size_t>(f)];
    sum += face_measure(lat, f) * face.normal.dot(face.centroid);
  }
  return sum / lat.ambient_dim;
}

NormalConeRecord normal_cone_measure(const FaceLattice& lat, int id) {
  const Face& f = lat.faces.at(static_cast<std::size_t>(id));
  const int n = lat.n();
  if (f.dim > n) throw DomainError("the body itself has no normal cone");
  NormalConeRecord rec;
  rec.face = id;
  rec.face_dim = f.dim;
  const auto facets = lat.incident_facets(id);
  for (int g : facets) rec.generators.push_back(lat.faces[static_cast<std::size_t>(g)].normal);
  if (f.dim == n) {
    rec.spherical_measure = 1.0;
    return rec;
  }
  auto check_separated = [](const Vec3& a, const Vec3& b) {
    if (angle_between(a, b) < 1e-10) throw NumericError("normal cone generators are nearly parallel");
  };
  if (n == 1 || f.dim == 1) {
    // Two incident facets; the cone is the arc between their normals.
    if (rec.generators.size() != 2) throw NumericError("ridge does not have exactly two facets");
    check_separated(rec.generators[0], rec.generators[1]);
    rec.spherical_measure = angle_between(rec.generators[0], rec.generators[1]);
    return rec;
  }
  // Vertex in R^3: order the facet normals around the vertex, then sum the
  // spherical triangles of a fan from the first generator.
  const Vec3 axis = [&] {
    Vec3 s = Vec3::Zero();
    for (const auto& g : rec.generators) s += g;
    return s.normalized();
  }();
  const Vec3 ref = (rec.generators[0] - rec.generators[0].dot(axis) * axis).normalized();
  const Vec3 ref2 = axis.cross(ref);
  std::vector<std::pair<double, Vec3>> keyed;
  for (const auto& g : rec.generators) {
    const Vec3 d = g - g.dot(axis) * axis;
    keyed.emplace_back(std::atan2(d.dot(ref2), d.dot(ref)), g);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  rec.generators.clear();
  for (const auto& kv : keyed) rec.generators.push_back(kv.second);
  const std::size_t m = rec.generators.size();
  for (std::size_t j = 0; j < m; ++j) check_separated(rec.generators[j], rec.generators[(j + 1) % m]);
  double area = 0.0;
  for (std::size_t j = 1; j + 1 < m; ++j) {
    area += spherical_triangle_area(rec.generators[0], rec.generators[j], rec.generators[j + 1]);
  }
  rec.spherical_measure = area;
  return rec;
}

std::vector<double> monte_carlo_vertex_measures(const FaceLattice& lat, std::size_t samples,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::size_t> hits(lat.vertices.size(), 0);
  for (std::size_t s = 0; s < samples; ++s) {
    Vec3 u(gauss(rng), gauss(rng), lat.ambient_dim == 3 ? gauss(rng) : 0.0);
    std::size_t best = 0;
    double best_val = -1e300;
    for (std::size_t i = 0; i < lat.vertices.size(); ++i) {
      const double val = u.dot(lat.vertices[i]);
      if (val > best_val) {
        best_val = val;
        best = i;
      }
    }
    ++hits[best];
  }
  const double sphere = lat.ambient_dim == 3 ? 4.0 * kPi : 2.0 * kPi;
  std::vector<double> out;
  for (std::size_t h : hits) out.push_back(sphere * static_cast<double>(h) / static_cast<double>(samples));
  return out;
}

CurvatureMeasureReport curvature_measure_total(const FaceLattice& lat, int k) {
  const int n = lat.n();
  if (k < 0 || k > n) throw DomainError("curvature measure index must lie in [0, n]");
  CurvatureMeasureReport r;
  r.k = k;
  for (int id : lat.faces_of_dim(k)) {
    FaceContribution c;
    c.face = id;
    c.face_measure = face_measure(lat, id);
    c.cone_measure = normal_cone_measure(lat, id).spherical_measure;
    c.contribution = c.face_measure * c.cone_measure;
    r.total += c.contribution;
    r.faces.push_back(c);
  }
  if (k == n) {
    r.ac_part = r.total;
  } else {
    r.sing_part = r.total;
  }
  return r;
}

std::vector<CurvatureMeasureReport> curvature_measures(const FaceLattice& lat) {
  std::vector<CurvatureMeasureReport> out;
  for (int k = 0; k <= lat.n(); ++k) out.push_back(curvature_measure_total(lat, k));
  return out;
}

std::vector<CurvatureMeasureReport> smooth_curvature_measures(const SupportEvaluator& body, int level) {
  const auto totals = smooth_curvature_totals(body, level);
  std::vector<CurvatureMeasureReport> out;
  for (std::size_t k = 0; k < totals.size(); ++k) {
    CurvatureMeasureReport r;
    r.k = static_cast<int>(k);
    r.total = totals[k];
    r.ac_part = totals[k];
    out.push_back(r);
  }
  return out;
}

std::vector<CurvatureMeasureReport> cap_body_curvature_measures(int n, double epsilon) {
  const auto m = cap_body_metrics(n, epsilon);
  const double cap_total = 2.0 * m.cap_area;
  std::vector<CurvatureMeasureReport> out;
  for (int k = 0; k <= n; ++k) {
    CurvatureMeasureReport r;
    r.k = k;
    r.ac_part = binomial(n, n - k) * cap_total;
    if (n == 2 && k == 1) {
      r.sing_part = singular_seam_mass(make_cap_body(3, epsilon));
    } else if (k == 0) {
      // Seam normals: the band |u_last| < eps of the sphere.
      r.sing_part = n == 2 ? 4.0 * kPi * epsilon : 4.0 * std::asin(epsilon);
    }
    r.total = r.ac_part + r.sing_part;
    out.push_back(r);
  }
  return out;
}

std::vector<double> steiner_coefficients_from_measures(const std::vector<CurvatureMeasureReport>& reports,
                                                       double volume) {
  if (reports.empty()) throw DomainError("no curvature measure reports");
  const int n = static_cast<int>(reports.size()) - 1;
  std::vector<double> c(static_cast<std::size_t>(n + 2), 0.0);
  c[0] = volume;
  std::vector<bool> seen(static_cast<std::size_t>(n + 1), false);
  for (const auto& r : reports) {
    if (r.k < 0 || r.k > n || seen[static_cast<std::size_t>(r.k)]) {
      throw DomainError("curvature measure reports must cover k = 0..n once each");
    }
    seen[static_cast<std::size_t>(r.k)] = true;
    const int j = n + 1 - r.k;
    c[static_cast<std::size_t>(j)] = r.total / j;
  }
  return c;
}

double evaluate_polynomial(const std::vector<double>& coefficients, double x) {
  double s = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) s = s * x + *it;
  return s;
}

double singular_seam_mass(const Body& cap_body) {
  const auto* c = std::get_if<CapBody>(&cap_body.kind);
  if (!c) throw DomainError("seam mass needs a cap body");
  if (cap_body.ambient_dim != 3) throw DomainError("seam mass is defined for cap bodies in R^3");
  const double seam_length = 2.0 * kPi * cap_body_seam_radius(c->epsilon);
  return seam_length * cap_body_dihedral_angle(c->epsilon);
}

double mesh_edge_curvature_mass(const TriMesh& mesh,
                                const std::function<bool(const Vec3&, const Vec3&)>& select) {
  std::map<std::pair<int, int>, std::vector<std::size_t>> edge_faces;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[static_cast<std::size_t>(e)];
      const int b = tri[static_cast<std::size_t>((e + 1) % 3)];
      edge_faces[{std::min(a, b), std::max(a, b)}].push_back(t);
    }
  }
  double mass = 0.0;
  for (const auto& [edge, faces] : edge_faces) {
    if (faces.size() != 2) continue;
    const Vec3& a = mesh.vertices[static_cast<std::size_t>(edge.first)];
    const Vec3& b = mesh.vertices[static_cast<std::size_t>(edge.second)];
    if (!select(a, b)) continue;
    mass += (b - a).norm() * angle_between(mesh.facet_normal(faces[0]), mesh.facet_normal(faces[1]));
  }
  return mass;
}

}  // namespace convexlab
