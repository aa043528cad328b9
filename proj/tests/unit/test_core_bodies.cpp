#include <cmath>
#include <sstream>

#include "convexlab/body.hpp"
#include "convexlab/body_spec.hpp"
#include "convexlab/mesh.hpp"
#include "doctest.h"

using namespace convexlab;

namespace {

template <class F>
double simpson(F f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Brute-force oracles for the upper cap of the unit sphere above height e.
double cap_area_3d(double e) {
  return simpson([](double t) { return 2.0 * kPi * std::sin(t); }, 0.0, std::acos(e), 20000);
}
double cap_volume_3d(double e) {
  return simpson([](double z) { return kPi * (1.0 - z * z); }, e, 1.0, 20000);
}
double arc_length_2d(double e) {
  return simpson([](double) { return 1.0; }, -std::acos(e), std::acos(e), 20000);
}
double segment_area_2d(double e) {
  return simpson([e](double x) { return std::sqrt(1.0 - x * x) - e; }, -std::sqrt(1 - e * e),
                 std::sqrt(1 - e * e), 200000);
}

// Voxel-counting volume of a solid given by an inside predicate.
template <class Inside>
double voxel_volume(Inside inside, const Vec3& lo, const Vec3& hi, double h) {
  double count = 0.0;
  for (double z = lo.z() + h / 2; z < hi.z(); z += h) {
    for (double y = lo.y() + h / 2; y < hi.y(); y += h) {
      for (double x = lo.x() + h / 2; x < hi.x(); x += h) {
        if (inside(Vec3(x, y, z))) count += 1.0;
      }
    }
  }
  return count * h * h * h;
}

}  // namespace

TEST_CASE("cap body closed forms against brute-force integration") {
  for (double e : {0.1, 0.5, 0.9}) {
    const auto m3 = cap_body_metrics(2, e);
    CHECK(m3.cap_area == doctest::Approx(cap_area_3d(e)).epsilon(1e-10));
    CHECK(m3.half_volume == doctest::Approx(cap_volume_3d(e)).epsilon(1e-10));
    CHECK(m3.disc_area == doctest::Approx(kPi * (1 - e * e)).epsilon(1e-14));
    const auto m2 = cap_body_metrics(1, e);
    CHECK(m2.cap_area == doctest::Approx(arc_length_2d(e)).epsilon(1e-10));
    CHECK(m2.half_volume == doctest::Approx(segment_area_2d(e)).epsilon(1e-6));
    CHECK(m2.disc_area == doctest::Approx(2.0 * std::sqrt(1 - e * e)).epsilon(1e-14));
  }
}

TEST_CASE("cap body ratio at eps = 1/2") {
  // 2 - 3e + e^3 = (1 - e)^2 (2 + e) on a grid before trusting the simplified ratio.
  for (int i = 1; i < 100; ++i) {
    const double e = i / 100.0;
    CHECK(2 - 3 * e + e * e * e == doctest::Approx((1 - e) * (1 - e) * (2 + e)).epsilon(1e-13));
  }
  const auto m = cap_body_metrics(2, 0.5);
  CHECK(std::abs(m.ratio - 1.6) < 1e-9);
  CHECK(std::abs(m.ratio - 2.0 / ((1 - 0.5) * (2 + 0.5))) < 1e-14);
  CHECK(std::abs(3.0 * m.half_volume - (m.cap_area - 0.5 * m.disc_area)) < 1e-12);
  CHECK(m.cap_area == doctest::Approx(kPi));
  CHECK(m.disc_area == doctest::Approx(0.75 * kPi));
}

TEST_CASE("cap body ratio properties on a 100-point grid") {
  for (int n : {1, 2}) {
    double prev = 1.0;
    for (int i = 1; i <= 100; ++i) {
      const double e = i / 101.0;
      const auto m = cap_body_metrics(n, e);
      CHECK(m.ratio > 1.0);
      CHECK(m.ratio > prev);
      prev = m.ratio;
      CHECK(std::abs((n + 1) * m.half_volume - (m.cap_area - e * m.disc_area)) < 1e-12);
    }
  }
  CHECK(cap_body_metrics(2, 1e-7).ratio == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(cap_body_metrics(1, 1e-7).ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cap body domain errors") {
  CHECK_THROWS_AS(cap_body_metrics(2, 0.0), DomainError);
  CHECK_THROWS_AS(cap_body_metrics(2, 1.0), DomainError);
  CHECK_THROWS_AS(cap_body_metrics(2, -0.3), DomainError);
  CHECK_THROWS_AS(cap_body_metrics(3, 0.5), DomainError);
  CHECK_THROWS_AS(make_cap_body(3, 1.5), DomainError);
}

TEST_CASE("cap body seam geometry") {
  const double e = 0.5;
  CHECK(cap_body_seam_radius(e) == doctest::Approx(std::sqrt(3.0) / 2.0));
  // Outer normals of the two unit spheres centered at -e e_z and e e_z at a
  // seam point (s, 0, 0).
  const double s = cap_body_seam_radius(e);
  const Vec3 upper = Vec3(s, 0, 0) - Vec3(0, 0, -e);
  const Vec3 lower = Vec3(s, 0, 0) - Vec3(0, 0, e);
  CHECK(cap_body_dihedral_angle(e) == doctest::Approx(std::acos(upper.dot(lower))));
  CHECK(cap_body_hausdorff_to_ball(e) == 0.5);
}

TEST_CASE("divergence volume") {
  SUBCASE("icosphere") {
    CHECK(divergence_volume(icosphere(4)) == doctest::Approx(4.0 * kPi / 3.0).epsilon(5e-3));
  }
  SUBCASE("unit cube is exact") {
    CHECK(std::abs(divergence_volume(box_mesh(Vec3::Zero(), Vec3::Ones(), 3)) - 1.0) < 1e-14);
    CHECK(std::abs(divergence_volume(box_mesh(Vec3(-2, 5, 1), Vec3(-1, 6, 2))) - 1.0) < 1e-13);
  }
  SUBCASE("cap body mesh pipeline") {
    const auto m = cap_body_metrics(2, 0.5);
    const TriMesh lens = cap_body_mesh(0.5);
    const double v = divergence_volume(lens);
    CHECK(v == doctest::Approx(2.0 * m.half_volume).epsilon(1e-2));
    const double ratio = surface_area(lens) / (3.0 * v);
    CHECK(ratio == doctest::Approx(1.6).epsilon(1e-2));
  }
  SUBCASE("inward winding is flipped, not rejected") {
    TriMesh s = icosphere(2);
    for (auto& t : s.triangles) std::swap(t[1], t[2]);
    CHECK(divergence_volume(s) == doctest::Approx(divergence_volume(icosphere(2))));
    CHECK(orient_outward(s));
    CHECK_FALSE(orient_outward(s));
  }
  SUBCASE("mixed orientation is an error") {
    TriMesh s = icosphere(1);
    std::swap(s.triangles[0][1], s.triangles[0][2]);
    CHECK_THROWS_AS(divergence_volume(s), OrientationError);
  }
  SUBCASE("open mesh is an error") {
    TriMesh s = icosphere(1);
    s.triangles.pop_back();
    CHECK_THROWS_AS(divergence_volume(s), OpenMeshError);
    CHECK_THROWS_AS(divergence_volume(grid_patch(4, 1.0)), OpenMeshError);
  }
  SUBCASE("planar curves") {
    const Polyline sq = polygon({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)});
    CHECK(divergence_volume(sq) == doctest::Approx(1.0));
    CHECK(divergence_volume(std::get<Polyline>(std::get<SampledSet>(l_tromino().kind).data)) ==
          doctest::Approx(3.0));
  }
}

TEST_CASE("divergence volume agrees with voxel counting as the grid refines") {
  const TriMesh ball = icosphere(3);
  const TriMesh cube = box_mesh(Vec3::Zero(), Vec3::Ones(), 2);
  const Vec3 lo(-1.05, -1.05, -1.05), hi(1.05, 1.05, 1.05);
  auto in_ball = [&](const Vec3& p) { return winding_number(ball, p) > 0.5; };
  auto in_cube = [&](const Vec3& p) { return winding_number(cube, p) > 0.5; };
  const double vb = divergence_volume(ball);
  const double vc = divergence_volume(cube);
  const double eb1 = std::abs(voxel_volume(in_ball, lo, hi, 0.15) - vb);
  const double eb2 = std::abs(voxel_volume(in_ball, lo, hi, 0.075) - vb);
  CHECK(eb1 < 4.0 * 0.15 * surface_area(ball));
  CHECK(eb2 < eb1);
  const Vec3 clo(-0.1111, -0.1013, -0.0917), chi(1.2, 1.2, 1.2);
  const double ec1 = std::abs(voxel_volume(in_cube, clo, chi, 0.0637) - vc);
  const double ec2 = std::abs(voxel_volume(in_cube, clo, chi, 0.0291) - vc);
  CHECK(ec1 < 0.0637 * 6.0);
  CHECK(ec2 < ec1);
}

TEST_CASE("winding numbers") {
  const TriMesh s = icosphere(2);
  CHECK(winding_number(s, Vec3(0.1, 0.2, -0.3)) == doctest::Approx(1.0));
  CHECK(winding_number(s, Vec3(2, 0, 0)) == doctest::Approx(0.0).epsilon(1e-12));
  const Polyline sq = polygon({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)});
  CHECK(winding_number(sq, Vec3(0.5, 0.5, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(winding_number(sq, Vec3(1.5, 0.5, 0))) < 1e-12);
}

TEST_CASE("body factories enforce invariants") {
  CHECK_THROWS_AS(make_ball(3, 0.0), DomainError);
  CHECK_THROWS_AS(make_ball(4, 1.0), DomainError);
  CHECK_THROWS_AS(make_ellipsoid(3, Vec3(1, -1, 2)), DomainError);
  CHECK_NOTHROW(make_ellipsoid(2, Vec3(1, 2, -5)));
  CHECK_THROWS_AS(make_polytope(3, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)}),
                  DomainError);
  CHECK_THROWS_AS(make_polytope(2, {Vec3(0, 0, 0), Vec3(1, 1, 0), Vec3(2, 2, 0)}), DomainError);
  CHECK_THROWS_AS(make_point_set(3, {}), DomainError);
  CHECK(unit_cube().is_convex());
  CHECK_FALSE(l_tromino().is_convex());
  CHECK(l_tromino().ambient_dim == 2);
}

TEST_CASE("bounding boxes") {
  const Box e = bounding_box(make_ellipsoid(3, Vec3(1, 1, 2)));
  CHECK(e.hi.z() == doctest::Approx(2.0));
  const Box c = bounding_box(make_cap_body(3, 0.5));
  CHECK(c.hi.z() == doctest::Approx(0.5));
  CHECK(c.hi.x() == doctest::Approx(std::sqrt(0.75)));
  const Box b = bounding_box(make_support_smooth(SupportEvaluator::ball(3, 1.0, Vec3(3, 0, 0)), "b"));
  CHECK(b.lo.x() == doctest::Approx(2.0));
  CHECK(b.hi.x() == doctest::Approx(4.0));
  CHECK(b.hi.y() == doctest::Approx(1.0));
  const Box l = bounding_box(l_tromino());
  CHECK(l.hi.x() == 2.0);
  CHECK(l.hi.z() == 0.0);
}

TEST_CASE("boundary meshes of smooth bodies") {
  const TriMesh m = boundary_mesh(make_ellipsoid(3, Vec3(1, 1, 2)), 4);
  for (std::size_t i = 0; i < m.vertices.size(); i += 37) {
    const Vec3& x = m.vertices[i];
    CHECK(x.x() * x.x() + x.y() * x.y() + x.z() * x.z() / 4 == doctest::Approx(1.0));
  }
  CHECK(divergence_volume(m) == doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-2));
  CHECK_THROWS_AS(boundary_mesh(unit_cube(), 3), DomainError);
}

TEST_CASE("inline body specs") {
  const Body b = parse_body("ball:r=2,x=1");
  CHECK(b.kind_name() == "ball");
  CHECK(std::get<Ball>(b.kind).radius == 2.0);
  CHECK(std::get<Ball>(b.kind).center.x() == 1.0);
  const Body e = parse_body("ellipsoid:a=1,b=1,c=2");
  CHECK(std::get<Ellipsoid>(e.kind).semi_axes.z() == 2.0);
  const Body c = parse_body("capbody:eps=0.5");
  CHECK(std::get<CapBody>(c.kind).epsilon == 0.5);
  CHECK(parse_body("capbody:eps=0.25,dim=2").ambient_dim == 2);
  CHECK(std::get<Polytope>(parse_body("cube").kind).vertices.size() == 8u);
  CHECK(parse_body("square").ambient_dim == 2);
  CHECK(parse_body("polytope:vertices=0 0;1 0;0 1").ambient_dim == 2);
  CHECK(parse_body_list("ball:x=-2 + ball:x=2").size() == 2u);

  CHECK_THROWS_AS(parse_body("ball:radius=1"), ParseError);
  CHECK_THROWS_AS(parse_body("ball:r=abc"), ParseError);
  CHECK_THROWS_AS(parse_body("torus:r=1"), ParseError);
  CHECK_THROWS_AS(parse_body("capbody"), ParseError);
  CHECK_THROWS_AS(parse_body("capbody:eps=1.2"), DomainError);
  CHECK_THROWS_AS(parse_body("ball:r=1,dim=5"), ParseError);
  CHECK_THROWS_AS(parse_body(""), ParseError);
}

TEST_CASE("body documents") {
  std::istringstream doc(
      "# spheroid\n"
      "kind = ellipsoid\n"
      "a = 1\n"
      "b = 1   # equal axes\n"
      "c = 2\n");
  const Body e = body_from_spec(parse_spec_document(doc));
  CHECK(std::get<Ellipsoid>(e.kind).semi_axes.z() == 2.0);
  std::istringstream missing("a = 1\n");
  CHECK_THROWS_AS(parse_spec_document(missing), ParseError);
  std::istringstream bad("kind = ball\nr 2\n");
  CHECK_THROWS_AS(parse_spec_document(bad), ParseError);
  std::istringstream dup("kind = ball\nr = 2\nr = 3\n");
  CHECK_THROWS_AS(parse_spec_document(dup), ParseError);
}

TEST_CASE("OFF vertex blocks accept polygonal faces") {
  std::istringstream off(
      "OFF\n8 6 0\n"
      "0 0 0\n1 0 0\n0 1 0\n1 1 0\n0 0 1\n1 0 1\n0 1 1\n1 1 1\n"
      "4 0 2 3 1\n4 4 5 7 6\n4 0 1 5 4\n4 2 6 7 3\n4 0 4 6 2\n4 1 3 7 5\n");
  const auto v = read_off_vertices(off);
  CHECK(v.size() == 8u);
  CHECK(v[7] == Vec3(1, 1, 1));
  std::istringstream truncated("OFF\n8 6 0\n0 0 0\n");
  CHECK_THROWS_AS(read_off_vertices(truncated), ParseError);
}
