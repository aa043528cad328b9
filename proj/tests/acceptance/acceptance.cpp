// Acceptance criteria 1-12. One PASS/FAIL line per criterion; tolerances
// are pinned here and not configurable.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "convexlab/body.hpp"
#include "convexlab/harness.hpp"
#include "convexlab/heintze_karcher.hpp"
#include "convexlab/mesh.hpp"
#include "convexlab/polytope_bundle.hpp"
#include "convexlab/symmetric_functions.hpp"
#include "convexlab/tube_lab.hpp"
#include "convexlab/umbilic.hpp"

using namespace convexlab;

namespace {

struct Criterion {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back(std::string(cond ? "" : "[FAIL] ") + what);
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, const Criterion& c) {
  std::cout << "criterion " << id << ": " << (c.ok ? "PASS" : "FAIL") << "  " << title << '\n';
  for (const auto& n : c.notes) std::cout << "    " << n << '\n';
  if (!c.ok) ++failures;
}

template <typename F>
void run(int id, const std::string& title, F&& body) {
  Criterion c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  report(id, title, c);
}

// Cap body quantities from elementary formulas (unit caps above height eps).
double cap_ratio(int n, double eps) {
  if (n == 2) return 2.0 / ((1 - eps) * (2 + eps));
  const double half = std::acos(eps) - eps * std::sqrt(1 - eps * eps);
  return std::acos(eps) / half;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const double tol_ball = 1e-6;

  run(1, "ball equality: |gap| <= 1e-6 V at level 5, verdict EqualityBall", [&](Criterion& c) {
    for (int dim : {2, 3}) {
      const auto r = hk_functional(SupportEvaluator::ball(dim, 1.0), HKOptions{5});
      const double v_exact = dim == 2 ? kPi : 4 * kPi / 3;
      c.expect(std::abs(r.gap) <= tol_ball * v_exact, "n=" + std::to_string(dim - 1) + " gap " + num(r.gap));
      c.expect(r.verdict == HKVerdict::EqualityBall, "n=" + std::to_string(dim - 1) + " verdict " + to_string(r.verdict));
    }
  });

  run(2, "HK inequality on 50 seeded random smooth bodies: gap >= -1e-6 V", [&](Criterion& c) {
    const auto bodies = random_smooth_bodies(42, 50);
    int bad = 0;
    double worst = 1e300;
    for (const auto& b : bodies) {
      const auto r = hk_functional(b, HKOptions{5});
      worst = std::min(worst, r.gap / r.volume);
      if (r.gap < -1e-6 * r.volume) ++bad;
    }
    c.expect(bodies.size() == 50, "bodies " + std::to_string(bodies.size()));
    c.expect(bad == 0, "failures " + std::to_string(bad) + ", min gap/V " + num(worst));
  });

  run(3, "proof chain: V <= tube bound <= (n/(n+1)) int 1/H1 + 1e-6; equal on the ball", [&](Criterion& c) {
    const auto ball = proof_chain(SupportEvaluator::ball(3, 1.0), 5);
    const double v = 4 * kPi / 3;
    for (double q : {ball.volume, ball.tube_bound, ball.hk_bound}) c.expect(std::abs(q - v) <= 1e-6, "ball " + num(q));
    const auto ell = proof_chain(SupportEvaluator::ellipsoid(3, Vec3(1, 1, 2)), 5);
    c.expect(ell.volume <= ell.tube_bound + 1e-6 && ell.tube_bound <= ell.hk_bound + 1e-6,
             "ellipsoid " + num(ell.volume) + " <= " + num(ell.tube_bound) + " <= " + num(ell.hk_bound));
    c.expect(ell.volume < ell.tube_bound && ell.tube_bound < ell.hk_bound, "ellipsoid chain strictly ordered");
  });

  run(4, "cap body ratio 1.6 (closed 1e-9, mesh 1%), divergence identity 1e-12, ratio > 1 on grid", [&](Criterion& c) {
    const auto m = cap_body_metrics(2, 0.5);
    c.expect(std::abs(m.ratio - 1.6) <= 1e-9, "closed form " + num(m.ratio));
    c.expect(std::abs(m.ratio - cap_ratio(2, 0.5)) <= 1e-12, "independent formula");
    const TriMesh lens = cap_body_mesh(0.5);
    const double mesh_ratio = surface_area(lens) / (3 * divergence_volume(lens));
    c.expect(std::abs(mesh_ratio - 1.6) / 1.6 <= 0.01, "mesh pipeline " + num(mesh_ratio));
    double worst_id = 0, min_ratio = 1e300;
    for (int n : {1, 2}) {
      for (int i = 1; i <= 100; ++i) {
        const double eps = i / 101.0;
        const auto mm = cap_body_metrics(n, eps);
        worst_id = std::max(worst_id, std::abs((n + 1) * mm.half_volume - (mm.cap_area - eps * mm.disc_area)));
        min_ratio = std::min(min_ratio, mm.ratio);
        if (std::abs(mm.ratio - cap_ratio(n, eps)) > 1e-9) c.expect(false, "ratio formula mismatch at " + num(eps));
      }
    }
    c.expect(worst_id <= 1e-12, "divergence identity " + num(worst_id));
    c.expect(min_ratio > 1.0, "min ratio on grid " + num(min_ratio));
  });

  run(5, "cube measures (6, 6pi, 4pi) within 1e-8; Steiner vs tube volumes within 1%", [&](Criterion& c) {
    const FaceLattice cube = build_face_lattice(unit_cube());
    const auto ms = curvature_measures(cube);
    const double exact[3] = {4 * kPi, 6 * kPi, 6.0};
    for (const auto& r : ms) c.expect(std::abs(r.total - exact[r.k]) <= 1e-8, "C" + std::to_string(r.k) + " " + num(r.total));
    const auto coef = steiner_coefficients_from_measures(ms, polytope_volume(cube));
    const double h = 0.02;
    const auto field = build_distance_field(unit_cube(), padded_box({unit_cube()}, 0.3 + 2 * h), h);
    for (double r : {0.1, 0.2, 0.3}) {
      const double oracle = 1 + 6 * r + 3 * kPi * r * r + 4 * kPi / 3 * r * r * r;
      const double from_measures = evaluate_polynomial(coef, r);
      const double tube = offset_volume(field, r);
      c.expect(std::abs(from_measures - oracle) <= 1e-9, "Steiner(" + num(r) + ") " + num(from_measures));
      c.expect(std::abs(tube - from_measures) / from_measures <= 0.01, "tube(" + num(r) + ") " + num(tube));
    }
  });

  run(6, "reach: cube consistent (< 0.5%), L-shape violated, residual ratio >= 10", [&](Criterion& c) {
    const double h = 0.02;
    const Body cube = unit_cube();
    const auto cf = build_distance_field(cube, padded_box({cube}, 0.5 + 2 * h), h);
    const auto cfit = steiner_fit(cf, {0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5});
    c.expect(cfit.verdict == SteinerVerdict::ConsistentWithReach && cfit.residual < 0.005,
             "cube residual " + num(cfit.residual));
    const std::vector<double> radii{0.1, 0.3, 0.6, 0.9, 1.2, 1.6, 2.0, 2.5, 3.0, 3.5, 4.0};
    const Body l = l_tromino();
    const auto lf = build_distance_field(l, padded_box({l}, 4.0 + 2 * h), h);
    const auto lfit = steiner_fit(lf, radii);
    c.expect(lfit.verdict == SteinerVerdict::PolynomialityViolated, "L-shape residual " + num(lfit.residual));
    const Body sq = unit_square();
    const auto sf = build_distance_field(sq, padded_box({sq}, 4.0 + 2 * h), h);
    const auto sfit = steiner_fit(sf, radii);
    c.expect(sfit.verdict == SteinerVerdict::ConsistentWithReach, "square residual " + num(sfit.residual));
    c.expect(lfit.residual >= 10 * sfit.residual, "L / square " + num(lfit.residual / sfit.residual));
    c.expect(lfit.residual >= 10 * cfit.residual, "L / cube " + num(lfit.residual / cfit.residual));
  });

  run(7, "offset curvature: sphere 2/3 within 1e-3, ellipsoid within 2%", [&](Criterion& c) {
    const auto s = offset_curvature_check(SupportEvaluator::ball(3, 1.0), 0.5, 5);
    c.expect(std::abs(s.max_predicted - 2.0 / 3.0) <= 1e-12, "predicted " + num(s.max_predicted));
    c.expect(s.max_relative_deviation < 1e-3, "sphere deviation " + num(s.max_relative_deviation));
    const auto e = offset_curvature_check(SupportEvaluator::ellipsoid(3, Vec3(1, 1, 2)), 0.25, 5);
    c.expect(e.max_relative_deviation < 0.02, "ellipsoid deviation " + num(e.max_relative_deviation));
  });

  run(8, "umbilic: spheres -> Sphere (error < 1e-3), ellipsoid -> Neither, two spheres -> two Sphere", [&](Criterion& c) {
    for (const auto& [center, radius] : std::vector<std::pair<Vec3, double>>{{Vec3::Zero(), 1.0}, {Vec3(1, 0, 0), 2.0}}) {
      const auto v = classify_surface(icosphere(5, center, radius));
      const bool one = v.components.size() == 1;
      c.expect(one && v.components[0].classification == SurfaceClass::Sphere, "sphere r=" + num(radius));
      if (one) {
        c.expect((v.components[0].center - center).norm() < 1e-3, "center error " + num((v.components[0].center - center).norm()));
        c.expect(std::abs(v.components[0].radius - radius) < 1e-3, "radius error " + num(std::abs(v.components[0].radius - radius)));
      }
    }
    for (int level = 3; level <= 5; ++level) {
      const auto v = classify_surface(ellipsoid_mesh(Vec3(1, 1, 2), level));
      c.expect(v.components.size() == 1 && v.components[0].classification == SurfaceClass::Neither,
               "ellipsoid level " + std::to_string(level) + " " + to_string(v.components[0].classification));
    }
    const auto two = classify_surface(merge(icosphere(4, Vec3(-2, 0, 0)), icosphere(4, Vec3(2, 0, 0))));
    int spheres = 0;
    for (const auto& comp : two.components) spheres += comp.classification == SurfaceClass::Sphere;
    c.expect(two.components.size() == 2 && spheres == 2, "two spheres: " + std::to_string(spheres) + " Sphere components");
  });

  run(9, "threshold: ball H1 = threshold, cap body 2 < 3.2, ellipsoid min H_k < threshold", [&](Criterion& c) {
    const auto ball = SupportEvaluator::ball(3, 1.0);
    const double mu_ball = curvature_threshold(2, 1, 4 * kPi, 4 * kPi / 3);
    c.expect(std::abs(mu_ball - 2.0) <= 1e-12, "ball threshold " + num(mu_ball));
    c.expect(std::abs(min_mean_curvature(ball, 1, 5) - 2.0) <= 1e-9, "ball min H1");
    const auto m = cap_body_metrics(2, 0.5);
    const double mu_cap = curvature_threshold(2, 1, 2 * m.cap_area, 2 * m.half_volume);
    c.expect(std::abs(mu_cap - 3.2) <= 1e-9, "cap threshold " + num(mu_cap));
    c.expect(2.0 < mu_cap, "cap H1 = 2 below threshold");
    const auto ell = SupportEvaluator::ellipsoid(3, Vec3(1, 1, 2));
    const auto hk = hk_functional(ell, HKOptions{5});
    for (int k : {1, 2}) {
      const double mu = curvature_threshold(2, k, hk.area, hk.volume);
      const double lo = min_mean_curvature(ell, k, 5);
      c.expect(lo < mu, "ellipsoid k=" + std::to_string(k) + " min " + num(lo) + " < " + num(mu));
    }
  });

  run(10, "compactness: L1 deviation strictly decreasing to < 1e-2, Hausdorff < eps_i", [&](Criterion& c) {
    std::vector<double> dev;
    for (int i = 1; i <= 6; ++i) {
      const double eps = std::ldexp(1.0, -i);
      const double mu = 2 * cap_ratio(2, eps);        // k = 1, C(2,1) = 2
      const double area = 2 * 2 * kPi * (1 - eps);     // two unit caps of height 1 - eps
      dev.push_back(std::abs(2.0 - mu) * area);
      const double h = sampled_hausdorff_to_ball(2, eps, 10000);
      c.expect(h < eps, "eps=2^-" + std::to_string(i) + " deviation " + num(dev.back()) + ", Hausdorff " + num(h));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < dev.size(); ++i) decreasing = decreasing && dev[i] < dev[i - 1];
    c.expect(decreasing, "deviation strictly decreasing");
    c.expect(dev.back() < 1e-2, "final deviation " + num(dev.back()) + " < 1e-2");
  });

  run(11, "Newton-MacLaurin: 1e4 random nonnegative curvature vectors, margin >= -1e-12", [&](Criterion& c) {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> dim(1, 6);
    std::exponential_distribution<double> mag(1.0);
    std::bernoulli_distribution zero(0.15);
    double worst = 1e300;
    for (int s = 0; s < 10000; ++s) {
      std::vector<double> kappa(static_cast<std::size_t>(dim(rng)));
      for (auto& x : kappa) x = zero(rng) ? 0.0 : mag(rng);
      for (int k = 1; k <= static_cast<int>(kappa.size()); ++k) worst = std::min(worst, newton_maclaurin_margin(kappa, k));
    }
    c.expect(worst >= -1e-12, "min margin " + num(worst));
  });

  run(12, "determinism: two runs of verify --all --seed 42 are byte-identical", [&](Criterion& c) {
    if (argc > 1) {
      const auto dir = std::filesystem::temp_directory_path() / ("convexlab_accept_" + std::to_string(::getpid()));
      std::filesystem::create_directories(dir);
      const auto a = dir / "a.json", b = dir / "b.json";
      const std::string cli = argv[1];
      const int ra = std::system(("\"" + cli + "\" verify --all --seed 42 --out \"" + a.string() + "\" 2>/dev/null").c_str());
      const int rb = std::system(("\"" + cli + "\" verify --all --seed 42 --out \"" + b.string() + "\" 2>/dev/null").c_str());
      c.expect(ra == 0 && rb == 0, "both runs exit 0");
      const std::string ta = read_file(a), tb = read_file(b);
      c.expect(!ta.empty() && ta == tb, "reports identical (" + std::to_string(ta.size()) + " bytes)");
      std::filesystem::remove_all(dir);
    } else {
      HarnessConfig cfg;
      const auto ta = to_json(run_all(cfg)).dump(2), tb = to_json(run_all(cfg)).dump(2);
      c.expect(ta == tb, "in-process reports identical (" + std::to_string(ta.size()) + " bytes)");
    }
  });

  std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criteria FAIL") << '\n';
  return failures == 0 ? 0 : 1;
}
