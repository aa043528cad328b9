#include "convexlab/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

namespace convexlab {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Vec3 TriMesh::facet_normal(std::size_t t) const {
  const auto& f = triangles[t];
  Vec3 n = (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]);
  const double len = n.norm();
  return len > 0 ? Vec3(n / len) : Vec3::Zero();
}

double TriMesh::facet_area(std::size_t t) const {
  const auto& f = triangles[t];
  return 0.5 * (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]).norm();
}

double surface_area(const TriMesh& mesh) {
  double a = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) a += mesh.facet_area(t);
  return a;
}

double curve_length(const Polyline& curve) {
  double l = 0.0;
  for (const auto& s : curve.segments) l += (curve.vertices[s[1]] - curve.vertices[s[0]]).norm();
  return l;
}

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

double signed_volume(const TriMesh& mesh) {
  double v = 0.0;
  for (const auto& f : mesh.triangles) {
    v += mesh.vertices[f[0]].dot(mesh.vertices[f[1]].cross(mesh.vertices[f[2]]));
  }
  return v / 6.0;
}

double signed_area(const Polyline& curve) {
  double a = 0.0;
  for (const auto& s : curve.segments) {
    const Vec3& p = curve.vertices[s[0]];
    const Vec3& q = curve.vertices[s[1]];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

}  // namespace

void validate_closed(const TriMesh& mesh) {
  // +1 for each use a->b with a < b, -1 for b->a; a closed consistently
  // oriented surface has every edge used once in each direction.
  std::unordered_map<std::uint64_t, std::pair<int, int>> uses;
  uses.reserve(mesh.triangles.size() * 3);
  for (const auto& f : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[e];
      const int b = f[(e + 1) % 3];
      auto& u = uses[edge_key(a, b)];
      if (a < b) {
        ++u.first;
      } else {
        ++u.second;
      }
    }
  }
  for (const auto& [key, u] : uses) {
    const int total = u.first + u.second;
    if (total == 1) throw OpenMeshError("mesh has boundary edges");
    if (total != 2) throw OpenMeshError("mesh has non-manifold edges");
    if (u.first != 1) throw OrientationError("mesh facets have mixed orientation");
  }
}

void validate_closed(const Polyline& curve) {
  std::vector<int> out(curve.vertices.size(), 0);
  std::vector<int> in(curve.vertices.size(), 0);
  for (const auto& s : curve.segments) {
    ++out[s[0]];
    ++in[s[1]];
  }
  for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
    if (in[i] + out[i] == 0) continue;
    if (in[i] + out[i] != 2) throw OpenMeshError("curve has open or branching vertices");
    if (in[i] != 1) throw OrientationError("curve segments have mixed orientation");
  }
}

double divergence_volume(const TriMesh& mesh) {
  validate_closed(mesh);
  // (1/3) sum (centroid . n) area equals the signed tetrahedron sum.
  return std::abs(signed_volume(mesh));
}

double divergence_volume(const Polyline& curve) {
  validate_closed(curve);
  return std::abs(signed_area(curve));
}

bool orient_outward(TriMesh& mesh) {
  if (signed_volume(mesh) >= 0.0) return false;
  for (auto& f : mesh.triangles) std::swap(f[1], f[2]);
  return true;
}

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

std::vector<std::vector<int>> connected_components(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<char> used(n, 0);
  for (const auto& f : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      used[f[e]] = 1;
      const int a = find_root(parent, f[e]);
      const int b = find_root(parent, f[(e + 1) % 3]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    if (used[i]) groups[find_root(parent, i)].push_back(i);
  }
  std::vector<std::vector<int>> out;
  for (auto& [root, ids] : groups) out.push_back(std::move(ids));
  return out;
}

TriMesh submesh(const TriMesh& mesh, const std::vector<int>& vertex_ids) {
  std::vector<int> remap(mesh.vertices.size(), -1);
  TriMesh out;
  for (int id : vertex_ids) {
    remap[id] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[id]);
    if (mesh.has_normals()) out.normals.push_back(mesh.normals[id]);
  }
  for (const auto& f : mesh.triangles) {
    if (remap[f[0]] >= 0 && remap[f[1]] >= 0 && remap[f[2]] >= 0) {
      out.triangles.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
    }
  }
  return out;
}

int euler_characteristic(const TriMesh& mesh) {
  std::unordered_map<std::uint64_t, int> edges;
  std::vector<char> used(mesh.vertices.size(), 0);
  for (const auto& f : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      used[f[e]] = 1;
      edges[edge_key(f[e], f[(e + 1) % 3])] = 1;
    }
  }
  const long v = std::count(used.begin(), used.end(), 1);
  return static_cast<int>(v - static_cast<long>(edges.size()) +
                          static_cast<long>(mesh.triangles.size()));
}

double mean_edge_length(const TriMesh& mesh) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& f : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      total += (mesh.vertices[f[e]] - mesh.vertices[f[(e + 1) % 3]]).norm();
      ++count;
    }
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh) {
  std::vector<std::vector<int>> nbrs(mesh.vertices.size());
  for (const auto& f : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      nbrs[f[e]].push_back(f[(e + 1) % 3]);
      nbrs[f[e]].push_back(f[(e + 2) % 3]);
    }
  }
  for (auto& n : nbrs) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return nbrs;
}

TriMesh merge(const TriMesh& a, const TriMesh& b) {
  TriMesh out = a;
  const int offset = static_cast<int>(a.vertices.size());
  out.vertices.insert(out.vertices.end(), b.vertices.begin(), b.vertices.end());
  if (a.has_normals() && b.has_normals()) {
    out.normals.insert(out.normals.end(), b.normals.begin(), b.normals.end());
  } else {
    out.normals.clear();
  }
  for (const auto& f : b.triangles) {
    out.triangles.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
  }
  return out;
}

double winding_number(const TriMesh& mesh, const Vec3& p) {
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3 a = mesh.vertices[t[0]] - p;
    const Vec3 b = mesh.vertices[t[1]] - p;
    const Vec3 c = mesh.vertices[t[2]] - p;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double numer = a.dot(b.cross(c));
    const double denom = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    total += 2.0 * std::atan2(numer, denom);
  }
  return total / (4.0 * kPi);
}

double winding_number(const Polyline& curve, const Vec3& p) {
  double total = 0.0;
  for (const auto& s : curve.segments) {
    const Vec3 a = curve.vertices[s[0]] - p;
    const Vec3 b = curve.vertices[s[1]] - p;
    total += std::atan2(a.x() * b.y() - a.y() * b.x(), a.x() * b.x() + a.y() * b.y());
  }
  return total / (2.0 * kPi);
}

// ---------------------------------------------------------------------------

TriMesh icosphere(int level, const Vec3& center, double radius) {
  if (level < 0) throw DomainError("icosphere level must be nonnegative");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::unordered_map<std::uint64_t, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = edge_key(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]);
      const int b = midpoint(tri[1], tri[2]);
      const int c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  TriMesh mesh;
  mesh.normals = v;
  mesh.vertices.reserve(v.size());
  for (const auto& p : v) mesh.vertices.push_back(center + radius * p);
  mesh.triangles = std::move(f);
  return mesh;
}

TriMesh ellipsoid_mesh(const Vec3& semi_axes, int level) {
  TriMesh mesh = icosphere(level);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3 s = mesh.vertices[i];
    mesh.vertices[i] = semi_axes.cwiseProduct(s);
    mesh.normals[i] = s.cwiseQuotient(semi_axes).normalized();
  }
  return mesh;
}

TriMesh box_mesh(const Vec3& lo, const Vec3& hi, int per_edge) {
  if (per_edge < 1) throw DomainError("box_mesh needs per_edge >= 1");
  TriMesh mesh;
  // One face per (axis, side); (u, v, w) is a right-handed frame with w the
  // outward axis.
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side < 2; ++side) {
      const int u = (axis + 1) % 3;
      const int v = (axis + 2) % 3;
      const int base = static_cast<int>(mesh.vertices.size());
      for (int j = 0; j <= per_edge; ++j) {
        for (int i = 0; i <= per_edge; ++i) {
          Vec3 p;
          p[axis] = side ? hi[axis] : lo[axis];
          p[u] = lo[u] + (hi[u] - lo[u]) * i / per_edge;
          p[v] = lo[v] + (hi[v] - lo[v]) * j / per_edge;
          mesh.vertices.push_back(p);
        }
      }
      auto id = [&](int i, int j) { return base + j * (per_edge + 1) + i; };
      for (int j = 0; j < per_edge; ++j) {
        for (int i = 0; i < per_edge; ++i) {
          if (side) {
            mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
          } else {
            mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
            mesh.triangles.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
          }
        }
      }
    }
  }
  // Weld duplicated edge and corner vertices.
  std::map<std::array<long long, 3>, int> welded;
  std::vector<int> remap(mesh.vertices.size());
  std::vector<Vec3> unique;
  const double scale = 1e9 / std::max(1.0, (hi - lo).maxCoeff());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& p = mesh.vertices[i];
    const std::array<long long, 3> key = {std::llround(p.x() * scale),
                                          std::llround(p.y() * scale),
                                          std::llround(p.z() * scale)};
    auto [it, inserted] = welded.emplace(key, static_cast<int>(unique.size()));
    if (inserted) unique.push_back(p);
    remap[i] = it->second;
  }
  for (auto& f : mesh.triangles) {
    for (auto& idx : f) idx = remap[idx];
  }
  mesh.vertices = std::move(unique);
  return mesh;
}

TriMesh cap_body_mesh(double eps, const CapMeshOptions& options) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("cap body epsilon must lie in (0,1)");
  const double theta_max = std::acos(eps);
  const double band = options.seam_band * theta_max;
  std::vector<double> thetas;
  const double coarse_end = theta_max - band;
  for (int i = 1; i <= options.rings; ++i) thetas.push_back(coarse_end * i / options.rings);
  for (int i = 1; i <= options.band_rings; ++i) {
    thetas.push_back(coarse_end + band * i / options.band_rings);
  }
  const int na = options.azimuth;
  const int nr = static_cast<int>(thetas.size());  // last ring is the seam

  TriMesh mesh;
  // Upper cap: points -eps e_z + y with |y| = 1 and polar angle theta.
  auto cap_point = [&](double theta, double phi, double sign) {
    const Vec3 y(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                 sign * std::cos(theta));
    return std::pair<Vec3, Vec3>(y - sign * eps * Vec3::UnitZ(), y);
  };
  auto add = [&](const Vec3& p, const Vec3& n) {
    mesh.vertices.push_back(p);
    mesh.normals.push_back(n.normalized());
    return static_cast<int>(mesh.vertices.size()) - 1;
  };

  // Seam ring shared by both caps.
  std::vector<int> seam(na);
  for (int j = 0; j < na; ++j) {
    const double phi = 2.0 * kPi * j / na;
    const Vec3 p(std::sqrt(1.0 - eps * eps) * std::cos(phi),
                 std::sqrt(1.0 - eps * eps) * std::sin(phi), 0.0);
    seam[j] = add(p, Vec3(p.x(), p.y(), 0.0));
  }

  for (double sign : {1.0, -1.0}) {
    const auto [pole_p, pole_n] = cap_point(0.0, 0.0, sign);
    const int pole = add(pole_p, pole_n);
    std::vector<std::vector<int>> rings(nr);
    for (int r = 0; r < nr - 1; ++r) {
      rings[r].resize(na);
      for (int j = 0; j < na; ++j) {
        const auto [p, n] = cap_point(thetas[r], 2.0 * kPi * j / na, sign);
        rings[r][j] = add(p, n);
      }
    }
    rings[nr - 1] = seam;
    // Outward winding: counter-clockwise seen from outside.
    auto tri = [&](int a, int b, int c) {
      if (sign > 0) {
        mesh.triangles.push_back({a, b, c});
      } else {
        mesh.triangles.push_back({a, c, b});
      }
    };
    for (int j = 0; j < na; ++j) tri(pole, rings[0][j], rings[0][(j + 1) % na]);
    for (int r = 0; r + 1 < nr; ++r) {
      for (int j = 0; j < na; ++j) {
        const int a = rings[r][j];
        const int b = rings[r + 1][j];
        const int c = rings[r + 1][(j + 1) % na];
        const int d = rings[r][(j + 1) % na];
        tri(a, b, c);
        tri(a, c, d);
      }
    }
  }
  return mesh;
}

TriMesh cylinder_mesh(double radius, double half_height, int azimuth, int rows) {
  TriMesh mesh;
  for (int r = 0; r <= rows; ++r) {
    const double z = -half_height + 2.0 * half_height * r / rows;
    for (int j = 0; j < azimuth; ++j) {
      const double phi = 2.0 * kPi * j / azimuth;
      const Vec3 n(std::cos(phi), std::sin(phi), 0.0);
      mesh.vertices.push_back(radius * n + Vec3(0, 0, z));
      mesh.normals.push_back(n);
    }
  }
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < azimuth; ++j) {
      const int a = r * azimuth + j;
      const int b = r * azimuth + (j + 1) % azimuth;
      const int c = (r + 1) * azimuth + (j + 1) % azimuth;
      const int d = (r + 1) * azimuth + j;
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  return mesh;
}

TriMesh grid_patch(int n, double half) {
  TriMesh mesh;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices.emplace_back(-half + 2.0 * half * i / n, -half + 2.0 * half * j / n, 0.0);
      mesh.normals.emplace_back(0.0, 0.0, 1.0);
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return mesh;
}

Polyline polygon(const std::vector<Vec3>& vertices) {
  Polyline curve;
  curve.vertices = vertices;
  const int n = static_cast<int>(vertices.size());
  for (int i = 0; i < n; ++i) curve.segments.push_back({i, (i + 1) % n});
  curve.normals.assign(n, Vec3::Zero());
  for (const auto& s : curve.segments) {
    const Vec3 d = vertices[s[1]] - vertices[s[0]];
    const Vec3 outward(d.y(), -d.x(), 0.0);
    curve.normals[s[0]] += outward.normalized();
    curve.normals[s[1]] += outward.normalized();
  }
  for (auto& nrm : curve.normals) nrm.normalize();
  return curve;
}

// ---------------------------------------------------------------------------

namespace {

// Next non-empty, non-comment line.
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TriMesh read_off(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw ParseError("OFF: empty input");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  bool with_normals = false;
  if (magic == "NOFF") {
    with_normals = true;
  } else if (magic != "OFF") {
    throw ParseError("OFF: expected 'OFF' or 'NOFF' header, got '" + magic + "'");
  }
  long nv = -1;
  long nf = -1;
  if (!(header >> nv >> nf)) {
    if (!next_line(in, line)) throw ParseError("OFF: missing counts line");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) throw ParseError("OFF: malformed counts line");
  }
  if (nv < 0 || nf < 0) throw ParseError("OFF: negative counts");
  TriMesh mesh;
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_line(in, line)) throw ParseError("OFF: truncated vertex list");
    std::istringstream vs(line);
    Vec3 p;
    if (!(vs >> p.x() >> p.y() >> p.z())) throw ParseError("OFF: malformed vertex line");
    mesh.vertices.push_back(p);
    if (with_normals) {
      Vec3 n;
      if (!(vs >> n.x() >> n.y() >> n.z())) throw ParseError("NOFF: vertex line lacks normal");
      mesh.normals.push_back(n.normalized());
    }
  }
  for (long i = 0; i < nf; ++i) {
    if (!next_line(in, line)) throw ParseError("OFF: truncated face list");
    std::istringstream fs(line);
    int count = 0;
    fs >> count;
    if (count != 3) {
      throw ParseError("OFF: only triangles are supported, found a face with " +
                       std::to_string(count) + " vertices");
    }
    std::array<int, 3> f{};
    if (!(fs >> f[0] >> f[1] >> f[2])) throw ParseError("OFF: malformed face line");
    for (int idx : f) {
      if (idx < 0 || idx >= nv) throw ParseError("OFF: face index out of range");
    }
    mesh.triangles.push_back(f);
  }
  return mesh;
}

TriMesh read_obj(std::istream& in) {
  TriMesh mesh;
  std::vector<Vec3> obj_normals;
  std::vector<int> normal_of_vertex;
  std::string line;
  auto resolve = [](long idx, std::size_t count) -> int {
    if (idx < 0) idx += static_cast<long>(count) + 1;
    if (idx < 1 || idx > static_cast<long>(count)) throw ParseError("OBJ: index out of range");
    return static_cast<int>(idx - 1);
  };
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z())) throw ParseError("OBJ: malformed vertex");
      mesh.vertices.push_back(p);
    } else if (tag == "vn") {
      Vec3 n;
      if (!(ls >> n.x() >> n.y() >> n.z())) throw ParseError("OBJ: malformed normal");
      obj_normals.push_back(n.normalized());
    } else if (tag == "f") {
      std::vector<std::string> corners;
      std::string c;
      while (ls >> c) corners.push_back(c);
      if (corners.size() != 3) {
        throw ParseError("OBJ: only triangles are supported, found a face with " +
                         std::to_string(corners.size()) + " vertices");
      }
      std::array<int, 3> f{};
      for (int k = 0; k < 3; ++k) {
        const std::string& corner = corners[k];
        const auto slash = corner.find('/');
        f[k] = resolve(std::stol(corner.substr(0, slash)), mesh.vertices.size());
        const auto last = corner.rfind('/');
        if (slash != std::string::npos && last + 1 < corner.size() &&
            std::count(corner.begin(), corner.end(), '/') == 2) {
          const int n = resolve(std::stol(corner.substr(last + 1)), obj_normals.size());
          normal_of_vertex.resize(mesh.vertices.size(), -1);
          normal_of_vertex[f[k]] = n;
        }
      }
      mesh.triangles.push_back(f);
    }
  }
  if (!normal_of_vertex.empty()) {
    normal_of_vertex.resize(mesh.vertices.size(), -1);
    if (std::find(normal_of_vertex.begin(), normal_of_vertex.end(), -1) == normal_of_vertex.end()) {
      for (int n : normal_of_vertex) mesh.normals.push_back(obj_normals[n]);
    }
  }
  return mesh;
}

TriMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path.string() + "'");
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (ext == ".off") return read_off(in);
  if (ext == ".obj") return read_obj(in);
  throw ParseError("unsupported mesh extension '" + ext + "' (expected .off or .obj)");
}

void write_off(std::ostream& out, const TriMesh& mesh) {
  out.precision(17);
  out << (mesh.has_normals() ? "NOFF\n" : "OFF\n");
  out << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& p = mesh.vertices[i];
    out << p.x() << ' ' << p.y() << ' ' << p.z();
    if (mesh.has_normals()) {
      const Vec3& n = mesh.normals[i];
      out << ' ' << n.x() << ' ' << n.y() << ' ' << n.z();
    }
    out << '\n';
  }
  for (const auto& f : mesh.triangles) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_off(const std::filesystem::path& path, const TriMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  write_off(out, mesh);
}

}  // namespace convexlab
