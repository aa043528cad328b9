#include "convexlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "convexlab/heintze_karcher.hpp"
#include "convexlab/mesh.hpp"
#include "convexlab/polytope_bundle.hpp"
#include "convexlab/symmetric_functions.hpp"
#include "convexlab/tube_lab.hpp"
#include "convexlab/umbilic.hpp"

namespace convexlab {

using nlohmann::ordered_json;

const std::vector<TheoremId>& all_theorems() {
  static const std::vector<TheoremId> ids{TheoremId::HKSmooth,    TheoremId::HKChain,      TheoremId::HKThreshold,
                                          TheoremId::Compactness, TheoremId::CapBody,      TheoremId::SingularSeam,
                                          TheoremId::Umbilic,     TheoremId::SteinerReach};
  return ids;
}

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::HKSmooth:
      return "HK-smooth";
    case TheoremId::HKChain:
      return "HK-chain";
    case TheoremId::HKThreshold:
      return "HK-threshold";
    case TheoremId::Compactness:
      return "Compactness";
    case TheoremId::CapBody:
      return "CapBody";
    case TheoremId::SingularSeam:
      return "SingularSeam";
    case TheoremId::Umbilic:
      return "Umbilic";
    case TheoremId::SteinerReach:
      return "SteinerReach";
  }
  return "?";
}

std::optional<TheoremId> theorem_from_string(std::string_view text) {
  for (TheoremId id : all_theorems()) {
    if (to_string(id) == text) return id;
  }
  return std::nullopt;
}

const std::vector<CoverageEntry>& coverage_manifest() {
  static const std::vector<CoverageEntry> entries{
      {"Heintze-Karcher inequality for convex bodies, equality only for balls", TheoremId::HKSmooth},
      {"Heintze-Karcher inequality for closed sets: tube map and normal-bundle volume chain", TheoremId::HKChain},
      {"polynomial tube volume below the reach (Steiner formula as reach criterion)", TheoremId::SteinerReach},
      {"curvature of parallel surfaces: kappa / (1 + r kappa)", TheoremId::SteinerReach},
      {"pointwise H_k lower bound forces a ball (Newton-MacLaurin reduction)", TheoremId::HKThreshold},
      {"two antipodal spherical caps: constant curvature away from a seam, not a ball", TheoremId::CapBody},
      {"almost-constant H_k implies Hausdorff closeness to a ball", TheoremId::Compactness},
      {"characterization of the sphere with a small singular set; the seam of positive measure", TheoremId::SingularSeam},
      {"umbilical C^{1,1} hypersurfaces are pieces of planes or spheres", TheoremId::Umbilic},
      {"curvature measures: absolutely continuous and singular parts", TheoremId::SingularSeam},
  };
  return entries;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Skip:
      return "SKIP";
  }
  return "?";
}

Verdict TheoremReport::verdict() const {
  bool all_skip = !fixtures.empty();
  for (const auto& f : fixtures) {
    if (f.verdict == Verdict::Fail) return Verdict::Fail;
    if (f.verdict != Verdict::Skip) all_skip = false;
  }
  return all_skip ? Verdict::Skip : Verdict::Pass;
}

namespace {

void info(FixtureResult& f, std::string name, double value) {
  f.quantities.push_back({std::move(name), value, std::nullopt, std::nullopt});
}

bool check(FixtureResult& f, std::string name, double value, double tol, bool ok) {
  const Verdict v = ok ? Verdict::Pass : Verdict::Fail;
  if (!ok) {
    f.verdict = Verdict::Fail;
    if (!f.reason.empty()) f.reason += "; ";
    f.reason += name + " out of tolerance";
  }
  f.quantities.push_back({std::move(name), value, tol, v});
  return ok;
}

FixtureResult fixture(std::string name) {
  FixtureResult f;
  f.fixture = std::move(name);
  return f;
}

// Runs `body` and turns any library error into a failing fixture.
template <typename F>
FixtureResult guarded(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    FixtureResult f = fixture(name);
    f.verdict = Verdict::Fail;
    f.reason = e.what();
    return f;
  }
}

SupportEvaluator evaluator_or_throw(const Body& body) {
  auto ev = support_evaluator(body);
  if (!ev) throw DomainError("body '" + body.name + "' has no support function");
  return *ev;
}

double relative_error(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string label(const Body& body) { return body.name.empty() ? body.kind_name() : body.name; }

}  // namespace

FixtureResult verify_hk(const Body& body, const HarnessConfig& config) {
  const SupportEvaluator ev = evaluator_or_throw(body);
  HKOptions opt;
  opt.level = config.quadrature_level;
  const HKReport r = hk_functional(ev, opt);
  FixtureResult f = fixture(label(body));
  const bool is_ball = std::holds_alternative<Ball>(body.kind);
  f.reason = to_string(r.verdict);
  info(f, "volume", r.volume);
  info(f, "area", r.area);
  info(f, "hk_bound", r.volume + r.gap);
  check(f, "gap", r.gap, config.hk_gap * r.volume, r.gap >= -config.hk_gap * r.volume);
  if (is_ball) check(f, "abs_gap", std::abs(r.gap), config.hk_gap * r.volume, std::abs(r.gap) <= config.hk_gap * r.volume);
  info(f, "curvature_spread", r.curvature_spread);
  const bool equality = r.verdict == HKVerdict::EqualityBall;
  check(f, "equality_iff_ball", equality ? 1.0 : 0.0, 0.0, equality == is_ball);
  if (f.verdict == Verdict::Pass) f.reason = to_string(r.verdict);
  return f;
}

TheoremReport verify_hk_report(const Body& body, const HarnessConfig& config) {
  TheoremReport rep;
  rep.theorem = TheoremId::HKSmooth;
  rep.seed = config.seed;
  rep.fixtures.push_back(verify_hk(body, config));
  return rep;
}

FixtureResult verify_hk_threshold(const Body& body, int k, const HarnessConfig& config) {
  const int n = body.n();
  if (k < 1 || k > n) throw DomainError("k must lie in [1, n]");
  FixtureResult f = fixture(label(body) + " k=" + std::to_string(k));
  double lo = 0.0, hi = 0.0, mu = 0.0, ratio = 0.0;
  bool is_ball = false;
  if (const auto* cb = std::get_if<CapBody>(&body.kind)) {
    const auto m = cap_body_metrics(n, cb->epsilon);
    ratio = m.ratio;
    mu = std::pow(ratio, k) * binomial(n, k);
    lo = hi = binomial(n, k);  // unit caps; the seam is H^n-null
  } else {
    const SupportEvaluator ev = evaluator_or_throw(body);
    is_ball = std::holds_alternative<Ball>(body.kind);
    const auto quad = SphereQuadrature::make(ev.ambient_dim(), config.quadrature_level);
    double area = 0.0, volume = 0.0;
    lo = 1e300;
    hi = -1e300;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const auto d = principal_data(ev, quad.nodes[i], quad.weights[i]);
      area += d.area_weight;
      volume += d.area_weight * d.x.dot(d.u) / (n + 1);
      const double hk = mean_curvature(d.curvatures, k);
      lo = std::min(lo, hk);
      hi = std::max(hi, hk);
    }
    ratio = area / ((n + 1) * volume);
    mu = curvature_threshold(n, k, area, volume);
  }
  info(f, "ratio", ratio);
  info(f, "threshold", mu);
  info(f, "max_Hk", hi);
  const double tol = config.threshold_equality * mu;
  if (is_ball) {
    check(f, "ess_inf_Hk-threshold", lo - mu, tol, std::abs(lo - mu) <= tol);
    check(f, "max_Hk-threshold", hi - mu, tol, std::abs(hi - mu) <= tol);
    if (f.verdict == Verdict::Pass) f.reason = "H_k equals the threshold";
  } else {
    check(f, "ess_inf_Hk-threshold", lo - mu, 0.0, lo < mu);
    if (f.verdict == Verdict::Pass) f.reason = "hypothesis fails, consistent with a non-ball";
  }
  return f;
}

double sampled_hausdorff_to_ball(int n, double epsilon, int samples) {
  check_ambient_dim(n + 1);
  if (samples < 1) throw DomainError("need at least one sample");
  const Body cb = make_cap_body(n + 1, epsilon);
  const DistanceSource to_k({cb});
  std::vector<Vec3> dirs;
  dirs.reserve(static_cast<std::size_t>(samples));
  if (n == 1) {
    for (int i = 0; i < samples; ++i) {
      const double t = 2 * kPi * (i + 0.5) / samples;
      dirs.emplace_back(std::cos(t), std::sin(t), 0.0);
    }
  } else {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < samples; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / samples;
      const double r = std::sqrt(1.0 - z * z);
      dirs.emplace_back(r * std::cos(golden * i), r * std::sin(golden * i), z);
    }
  }
  double ball_to_k = 0.0, k_to_ball = 0.0;
  for (const auto& d : dirs) {
    ball_to_k = std::max(ball_to_k, to_k.distance(d));
    // Radial boundary point of the lens (star-shaped about the origin).
    const double c = std::abs(d[n]);
    const double t = -epsilon * c + std::sqrt(epsilon * epsilon * c * c + 1.0 - epsilon * epsilon);
    k_to_ball = std::max(k_to_ball, std::max(0.0, (t * d).norm() - 1.0));
  }
  return std::max(ball_to_k, k_to_ball);
}

TheoremReport compactness_experiment(int n, int k, int steps, const HarnessConfig& config) {
  if (steps < 2) throw DomainError("compactness experiment needs at least two steps");
  if (k < 1 || k > n) throw DomainError("k must lie in [1, n]");
  TheoremReport rep;
  rep.theorem = TheoremId::Compactness;
  rep.seed = config.seed;
  std::vector<double> dev, haus;
  for (int i = 1; i <= steps; ++i) {
    const double eps = std::ldexp(1.0, -i);
    FixtureResult f = fixture("capbody n=" + std::to_string(n) + " eps=2^-" + std::to_string(i));
    const auto m = cap_body_metrics(n, eps);
    const double mu = std::pow(m.ratio, k) * binomial(n, k);
    const double area = 2.0 * m.cap_area;
    const double deviation = std::abs(binomial(n, k) - mu) * area;
    const double h = sampled_hausdorff_to_ball(n, eps, config.hausdorff_samples);
    info(f, "epsilon", eps);
    info(f, "threshold", mu);
    info(f, "l1_deviation", deviation);
    info(f, "hausdorff_exact", cap_body_hausdorff_to_ball(eps));
    check(f, "hausdorff_sampled", h, eps, h < eps);
    dev.push_back(deviation);
    haus.push_back(h);
    rep.fixtures.push_back(std::move(f));
  }
  FixtureResult fam = fixture("capbody family n=" + std::to_string(n) + " k=" + std::to_string(k));
  double min_drop = 1e300, min_hdrop = 1e300;
  for (std::size_t i = 1; i < dev.size(); ++i) {
    min_drop = std::min(min_drop, dev[i - 1] - dev[i]);
    min_hdrop = std::min(min_hdrop, haus[i - 1] - haus[i]);
  }
  check(fam, "min_deviation_decrease", min_drop, 0.0, min_drop > 0.0);
  check(fam, "min_hausdorff_decrease", min_hdrop, 0.0, min_hdrop > 0.0);
  info(fam, "final_l1_deviation", dev.back());
  info(fam, "final_hausdorff", haus.back());
  // The family limit is the unit ball, which the functional detects.
  const auto limit = hk_functional(SupportEvaluator::ball(n + 1, 1.0), HKOptions{config.quadrature_level});
  check(fam, "limit_is_ball", limit.verdict == HKVerdict::EqualityBall ? 1.0 : 0.0, 0.0,
        limit.verdict == HKVerdict::EqualityBall);
  if (fam.verdict == Verdict::Pass) fam.reason = "deviation and Hausdorff distance decrease toward the ball";
  rep.fixtures.push_back(std::move(fam));
  return rep;
}

namespace {

TheoremReport run_hk_smooth(const HarnessConfig& c) {
  TheoremReport rep;
  rep.theorem = TheoremId::HKSmooth;
  rep.seed = c.seed;
  std::vector<Body> bodies{make_ball(3, 1.0), make_ball(2, 1.0), make_ellipsoid(3, Vec3(1, 1, 2)),
                           make_ellipsoid(2, Vec3(1, 2, 1))};
  bodies[0].name = "ball n=2";
  bodies[1].name = "ball n=1";
  bodies[2].name = "ellipsoid 1,1,2";
  bodies[3].name = "ellipse 1,2";
  for (const auto& b : bodies) rep.fixtures.push_back(guarded(label(b), [&] { return verify_hk(b, c); }));
  const auto random = random_smooth_bodies(c.seed, c.random_bodies);
  for (std::size_t i = 0; i < random.size(); ++i) {
    const Body b = make_support_smooth(random[i], "random " + std::to_string(c.seed) + "/" + std::to_string(i));
    rep.fixtures.push_back(guarded(label(b), [&] { return verify_hk(b, c); }));
  }
  return rep;
}

TheoremReport run_hk_chain(const HarnessConfig& c) {
  TheoremReport rep;
  rep.theorem = TheoremId::HKChain;
  rep.seed = c.seed;
  struct Item {
    std::string name;
    SupportEvaluator body;
    bool ball;
  };
  const std::vector<Item> items{{"ball n=2", SupportEvaluator::ball(3, 1.0), true},
                                {"ellipsoid 1,1,2", SupportEvaluator::ellipsoid(3, Vec3(1, 1, 2)), false},
                                {"ball n=1", SupportEvaluator::ball(2, 1.0), true},
                                {"ellipse 1,2", SupportEvaluator::ellipsoid(2, Vec3(1, 2, 1)), false}};
  for (const auto& it : items) {
    rep.fixtures.push_back(guarded(it.name, [&] {
      FixtureResult f = fixture(it.name);
      const ProofChain pc = proof_chain(it.body, c.quadrature_level);
      info(f, "volume", pc.volume);
      info(f, "jacobian_bound", pc.jacobian_bound);
      info(f, "tube_bound", pc.tube_bound);
      info(f, "hk_bound", pc.hk_bound);
      const double s = c.chain_slack;
      info(f, "jacobian_bound-volume", pc.jacobian_bound - pc.volume);
      check(f, "tube_bound-volume", pc.tube_bound - pc.volume, s, pc.volume <= pc.tube_bound + s);
      check(f, "hk_bound-tube_bound", pc.hk_bound - pc.tube_bound, s, pc.tube_bound <= pc.hk_bound + s);
      if (it.ball) {
        const double spread = std::max({pc.volume, pc.tube_bound, pc.hk_bound}) -
                              std::min({pc.volume, pc.tube_bound, pc.hk_bound});
        check(f, "ball_spread", spread, s, spread <= s);
      }
      if (f.verdict == Verdict::Pass) f.reason = "volume <= tube bound <= functional";
      return f;
    }));
  }
  return rep;
}

TheoremReport run_hk_threshold(const HarnessConfig& c) {
  TheoremReport rep;
  rep.theorem = TheoremId::HKThreshold;
  rep.seed = c.seed;
  Body ball = make_ball(3, 1.0);
  ball.name = "ball n=2";
  Body cap = make_cap_body(3, 0.5);
  cap.name = "capbody eps=0.5";
  Body ell = make_ellipsoid(3, Vec3(1, 1, 2));
  ell.name = "ellipsoid 1,1,2";
  Body cap2 = make_cap_body(2, 0.5);
  cap2.name = "capbody n=1 eps=0.5";
  const std::vector<std::pair<Body, int>> cases{{ball, 1}, {ball, 2}, {cap, 1}, {cap, 2}, {ell, 1}, {ell, 2}, {cap2, 1}};
  for (const auto& [b, k] : cases) {
    rep.fixtures.push_back(guarded(label(b), [&] { return verify_hk_threshold(b, k, c); }));
  }
  rep.fixtures.push_back(guarded("newton-maclaurin", [&] {
    FixtureResult f = fixture("newton-maclaurin");
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<int> dim(1, 6);
    std::exponential_distribution<double> mag(1.0);
    std::bernoulli_distribution zero(0.15);
    double worst = 1e300;
    for (int s = 0; s < c.newton_maclaurin_samples; ++s) {
      const int n = dim(rng);
      std::vector<double> kappa(static_cast<std::size_t>(n));
      for (auto& x : kappa) x = zero(rng) ? 0.0 : mag(rng);
      for (int k = 1; k <= n; ++k) worst = std::min(worst, newton_maclaurin_margin(kappa, k));
    }
    info(f, "samples", c.newton_maclaurin_samples);
    check(f, "min_margin", worst, c.newton_maclaurin, worst >= -c.newton_maclaurin);
    if (f.verdict == Verdict::Pass) f.reason = "H_1/n >= (H_k/C(n,k))^(1/k)";
    return f;
  }));
  return rep;
}

TheoremReport run_cap_body(const HarnessConfig& c) {
  TheoremReport rep;
  rep.theorem = TheoremId::CapBody;
  rep.seed = c.seed;
  rep.fixtures.push_back(guarded("closed form eps=0.5", [&] {
    FixtureResult f = fixture("closed form eps=0.5");
    const auto m = cap_body_metrics(2, 0.5);
    info(f, "cap_area", m.cap_area);
    info(f, "disc_area", m.disc_area);
    info(f, "half_volume", m.half_volume);
    check(f, "ratio", m.ratio, c.cap_ratio_closed, std::abs(m.ratio - 1.6) <= c.cap_ratio_closed);
    for (int n : {1, 2}) {
      const auto mm = cap_body_metrics(n, 0.5);
      const double id = (n + 1) * mm.half_volume - (mm.cap_area - 0.5 * mm.disc_area);
      check(f, "divergence_identity n=" + std::to_string(n), id, c.divergence_identity,
            std::abs(id) <= c.divergence_identity);
    }
    if (f.verdict == Verdict::Pass) f.reason = "ratio 2/((1-eps)(2+eps))";
    return f;
  }));
  rep.fixtures.push_back(guarded("mesh pipeline eps=0.5", [&] {
    FixtureResult f = fixture("mesh pipeline eps=0.5");
    const TriMesh lens = cap_body_mesh(0.5);
    const double v = divergence_volume(lens);
    const double ratio = surface_area(lens) / (3.0 * v);
    info(f, "mesh_volume", v);
    check(f, "mesh_ratio_rel_error", relative_error(ratio, 1.6), c.cap_ratio_mesh,
          relative_error(ratio, 1.6) <= c.cap_ratio_mesh);
    if (f.verdict == Verdict::Pass) f.reason = "mesh agrees with the closed form";
    return f;
  }));
  for (int n : {1, 2}) {
    const std::string name = "ratio grid n=" + std::to_string(n);
    rep.fixtures.push_back(guarded(name, [&] {
      FixtureResult f = fixture(name);
      double lo = 1e300, worst_id = 0.0;
      for (int i = 1; i <= 100; ++i) {
        const double eps = i / 101.0;
        const auto m = cap_body_metrics(n, eps);
        lo = std::min(lo, m.ratio);
        worst_id = std::max(worst_id, std::abs((n + 1) * m.half_volume - (m.cap_area - eps * m.disc_area)));
      }
      check(f, "min_ratio-1", lo - 1.0, 0.0, lo > 1.0);
      check(f, "max_divergence_identity", worst_id, c.divergence_identity, worst_id <= c.divergence_identity);
      if (f.verdict == Verdict::Pass) f.reason = "ratio > 1 on the grid";
      return f;
    }));
  }
  return rep;
}

TheoremReport run_singular_seam(const HarnessConfig& c) {
  TheoremReport rep;
  rep.theorem = TheoremId::SingularSeam;
  rep.seed = c.seed;
  rep.fixtures.push_back(guarded("cube", [&] {
    FixtureResult f = fixture("cube");
    const auto reports = curvature_measures(build_face_lattice(unit_cube()));
    const double expected[3] = {4 * kPi, 6 * kPi, 6.0};
    for (const auto& r : reports) {
      const std::string k = std::to_string(r.k);
      check(f, "C" + k, r.total, c.measure_exact, std::abs(r.total - expected[r.k]) <= c.measure_exact);
      const double misplaced = r.k < 2 ? r.ac_part : r.sing_part;
      check(f, "C" + k + (r.k < 2 ? "_ac" : "_sing"), misplaced, c.measure_exact, std::abs(misplaced) <= c.measure_exact);
    }
    if (f.verdict == Verdict::Pass) f.reason = "exact angles";
    return f;
  }));
  rep.fixtures.push_back(guarded("square", [&] {
    FixtureResult f = fixture("square");
    const auto reports = curvature_measures(build_face_lattice(unit_square()));
    check(f, "C0", reports[0].total, c.measure_exact, std::abs(reports[0].total - 2 * kPi) <= c.measure_exact);
    check(f, "C1", reports[1].total, c.measure_exact, std::abs(reports[1].total - 4.0) <= c.measure_exact);
    return f;
  }));
  rep.fixtures.push_back(guarded("capbody seam eps=0.5", [&] {
    FixtureResult f = fixture("capbody seam eps=0.5");
    const double mass = singular_seam_mass(make_cap_body(3, 0.5));
    const TriMesh lens = cap_body_mesh(0.5);
    const double jump = mesh_edge_curvature_mass(
        lens, [](const Vec3& a, const Vec3& b) { return std::abs(a.z()) < 1e-12 && std::abs(b.z()) < 1e-12; });
    info(f, "seam_length", 2 * kPi * cap_body_seam_radius(0.5));
    info(f, "dihedral_angle", cap_body_dihedral_angle(0.5));
    check(f, "seam_mass", mass, 0.0, mass > 0.0);
    check(f, "mesh_jump_rel_error", relative_error(jump, mass), c.seam_mass, relative_error(jump, mass) <= c.seam_mass);
    const auto measures = cap_body_curvature_measures(2, 0.5);
    check(f, "C1_sing", measures[1].sing_part, 0.0, measures[1].sing_part > 0.0);
    check(f, "C2_sing", measures[2].sing_part, 0.0, measures[2].sing_part == 0.0);
    if (f.verdict == Verdict::Pass) f.reason = "singular set of positive length";
    return f;
  }));
  return rep;
}

TheoremReport run_umbilic(const HarnessConfig& c) {
  TheoremReport rep;
  rep.theorem = TheoremId::Umbilic;
  rep.seed = c.seed;
  struct SphereCase {
    std::string name;
    Vec3 center;
    double radius;
  };
  for (const auto& s : {SphereCase{"unit sphere", Vec3::Zero(), 1.0}, SphereCase{"sphere r=2 at (1,0,0)", Vec3(1, 0, 0), 2.0}}) {
    rep.fixtures.push_back(guarded(s.name, [&] {
      FixtureResult f = fixture(s.name);
      const auto v = classify_surface(icosphere(c.mesh_level, s.center, s.radius));
      check(f, "components", static_cast<double>(v.components.size()), 0.0, v.components.size() == 1);
      const auto& comp = v.components.front();
      check(f, "is_sphere", comp.classification == SurfaceClass::Sphere ? 1.0 : 0.0, 0.0,
            comp.classification == SurfaceClass::Sphere);
      check(f, "center_error", (comp.center - s.center).norm(), c.umbilic_center,
            (comp.center - s.center).norm() < c.umbilic_center);
      check(f, "radius_error", std::abs(comp.radius - s.radius), c.umbilic_center,
            std::abs(comp.radius - s.radius) < c.umbilic_center);
      f.reason = to_string(comp.classification);
      return f;
    }));
  }
  for (int level = 3; level <= c.mesh_level; ++level) {
    const std::string name = "ellipsoid 1,1,2 level " + std::to_string(level);
    rep.fixtures.push_back(guarded(name, [&] {
      FixtureResult f = fixture(name);
      const auto v = classify_surface(ellipsoid_mesh(Vec3(1, 1, 2), level));
      const auto& comp = v.components.front();
      info(f, "max_deviation", comp.max_deviation);
      check(f, "is_neither", comp.classification == SurfaceClass::Neither ? 1.0 : 0.0, 0.0,
            comp.classification == SurfaceClass::Neither);
      f.reason = to_string(comp.classification);
      return f;
    }));
  }
  rep.fixtures.push_back(guarded("two disjoint spheres", [&] {
    FixtureResult f = fixture("two disjoint spheres");
    const int level = std::max(3, c.mesh_level - 1);
    const auto v = classify_surface(merge(icosphere(level, Vec3(-2, 0, 0)), icosphere(level, Vec3(2, 0, 0))));
    int spheres = 0;
    for (const auto& comp : v.components) spheres += comp.classification == SurfaceClass::Sphere ? 1 : 0;
    check(f, "sphere_components", spheres, 2.0, spheres == 2 && v.components.size() == 2);
    f.reason = std::to_string(spheres) + " Sphere components";
    return f;
  }));
  rep.fixtures.push_back(guarded("flat patch", [&] {
    FixtureResult f = fixture("flat patch");
    const auto v = classify_surface(grid_patch(16, 1.0));
    const auto& comp = v.components.front();
    check(f, "is_plane", comp.classification == SurfaceClass::Plane ? 1.0 : 0.0, 0.0,
          comp.classification == SurfaceClass::Plane);
    f.reason = to_string(comp.classification);
    return f;
  }));
  return rep;
}

FixtureResult steiner_match(const std::string& name, const Body& body, const HarnessConfig& c) {
  FixtureResult f = fixture(name);
  const FaceLattice lattice = build_face_lattice(body);
  const auto coef = steiner_coefficients_from_measures(curvature_measures(lattice), polytope_volume(lattice));
  const double h = body.ambient_dim == 2 ? c.planar_grid_step : c.grid_step;
  const auto field = build_distance_field(body, padded_box({body}, 0.3 + 2 * h), h);
  for (double r : {0.1, 0.2, 0.3}) {
    const double v = offset_volume(field, r);
    const double e = relative_error(v, evaluate_polynomial(coef, r));
    check(f, "tube_volume_rel_error rho=" + format_number(r), e, c.steiner_match, e <= c.steiner_match);
  }
  if (f.verdict == Verdict::Pass) f.reason = "Steiner polynomial from curvature measures";
  return f;
}

TheoremReport run_steiner_reach(const HarnessConfig& c) {
  TheoremReport rep;
  rep.theorem = TheoremId::SteinerReach;
  rep.seed = c.seed;
  rep.fixtures.push_back(guarded("cube steiner", [&] { return steiner_match("cube steiner", unit_cube(), c); }));
  rep.fixtures.push_back(
      guarded("tetrahedron steiner", [&] { return steiner_match("tetrahedron steiner", regular_tetrahedron(), c); }));

  double cube_residual = 0.0;
  rep.fixtures.push_back(guarded("cube reach", [&] {
    FixtureResult f = fixture("cube reach");
    const Body cube = unit_cube();
    const auto field = build_distance_field(cube, padded_box({cube}, 0.5 + 2 * c.grid_step), c.grid_step);
    const auto fit = steiner_fit(field, {0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5}, c.reach_threshold);
    cube_residual = fit.residual;
    check(f, "residual", fit.residual, c.reach_threshold, fit.verdict == SteinerVerdict::ConsistentWithReach);
    f.reason = to_string(fit.verdict);
    return f;
  }));

  const std::vector<double> wide{0.1, 0.3, 0.6, 0.9, 1.2, 1.6, 2.0, 2.5, 3.0, 3.5, 4.0};
  const double h2 = c.planar_grid_step;
  double l_residual = 0.0, square_residual = 0.0;
  rep.fixtures.push_back(guarded("L-shape reach", [&] {
    FixtureResult f = fixture("L-shape reach");
    const Body l = l_tromino();
    const auto field = build_distance_field(l, padded_box({l}, 4.0 + 2 * h2), h2);
    const auto fit = steiner_fit(field, wide, c.reach_threshold);
    l_residual = fit.residual;
    check(f, "residual", fit.residual, c.reach_threshold, fit.verdict == SteinerVerdict::PolynomialityViolated);
    f.reason = to_string(fit.verdict);
    return f;
  }));
  rep.fixtures.push_back(guarded("square reach", [&] {
    FixtureResult f = fixture("square reach");
    const Body sq = unit_square();
    const auto field = build_distance_field(sq, padded_box({sq}, 4.0 + 2 * h2), h2);
    const auto fit = steiner_fit(field, wide, c.reach_threshold);
    square_residual = fit.residual;
    check(f, "residual", fit.residual, c.reach_threshold, fit.verdict == SteinerVerdict::ConsistentWithReach);
    f.reason = to_string(fit.verdict);
    return f;
  }));
  rep.fixtures.push_back(guarded("residual ratio", [&] {
    FixtureResult f = fixture("residual ratio");
    info(f, "cube_residual", cube_residual);
    const double ratio = l_residual / std::max(square_residual, 1e-300);
    check(f, "L_over_square", ratio, c.reach_ratio, ratio >= c.reach_ratio);
    const double ratio3 = l_residual / std::max(cube_residual, 1e-300);
    check(f, "L_over_cube", ratio3, c.reach_ratio, ratio3 >= c.reach_ratio);
    return f;
  }));
  rep.fixtures.push_back(guarded("two balls reach", [&] {
    FixtureResult f = fixture("two balls reach");
    const Body a = make_ball(3, 1.0, Vec3(-2, 0, 0));
    const Body b = make_ball(3, 1.0, Vec3(2, 0, 0));
    const double h = 2 * c.grid_step;
    const auto field = build_distance_field({a, b}, padded_box({a, b}, 0.95 + 2 * h), h);
    const auto fit = steiner_fit(field, {0.2, 0.35, 0.5, 0.65, 0.8, 0.95}, c.reach_threshold);
    check(f, "residual", fit.residual, c.reach_threshold, fit.verdict == SteinerVerdict::ConsistentWithReach);
    f.reason = to_string(fit.verdict);
    return f;
  }));
  rep.fixtures.push_back(guarded("offset curvature sphere", [&] {
    FixtureResult f = fixture("offset curvature sphere");
    const auto r = offset_curvature_check(SupportEvaluator::ball(3, 1.0), 0.5, c.mesh_level);
    info(f, "predicted", r.max_predicted);
    check(f, "max_relative_deviation", r.max_relative_deviation, c.offset_sphere,
          r.max_relative_deviation < c.offset_sphere);
    return f;
  }));
  rep.fixtures.push_back(guarded("offset curvature ellipsoid 1,1,2", [&] {
    FixtureResult f = fixture("offset curvature ellipsoid 1,1,2");
    const auto r = offset_curvature_check(SupportEvaluator::ellipsoid(3, Vec3(1, 1, 2)), 0.25, c.mesh_level);
    check(f, "max_relative_deviation", r.max_relative_deviation, c.offset_ellipsoid,
          r.max_relative_deviation < c.offset_ellipsoid);
    return f;
  }));
  return rep;
}

}  // namespace

TheoremReport run_theorem(TheoremId id, const HarnessConfig& config) {
  switch (id) {
    case TheoremId::HKSmooth:
      return run_hk_smooth(config);
    case TheoremId::HKChain:
      return run_hk_chain(config);
    case TheoremId::HKThreshold:
      return run_hk_threshold(config);
    case TheoremId::Compactness:
      return compactness_experiment(2, 1, config.compactness_steps, config);
    case TheoremId::CapBody:
      return run_cap_body(config);
    case TheoremId::SingularSeam:
      return run_singular_seam(config);
    case TheoremId::Umbilic:
      return run_umbilic(config);
    case TheoremId::SteinerReach:
      return run_steiner_reach(config);
  }
  throw DomainError("unknown theorem id");
}

std::vector<TheoremReport> run_all(const HarnessConfig& config) {
  std::vector<TheoremReport> out;
  for (TheoremId id : all_theorems()) {
    if (std::find(config.theorems.begin(), config.theorems.end(), id) != config.theorems.end()) {
      out.push_back(run_theorem(id, config));
    }
  }
  return out;
}

bool any_failure(const std::vector<TheoremReport>& reports) {
  return std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.verdict() == Verdict::Fail; });
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

struct Field {
  const char* key;
  double HarnessConfig::*real;
  int HarnessConfig::*integer;
};

const std::vector<Field>& resolution_fields() {
  static const std::vector<Field> f{
      {"quadrature_level", nullptr, &HarnessConfig::quadrature_level},
      {"random_bodies", nullptr, &HarnessConfig::random_bodies},
      {"mesh_level", nullptr, &HarnessConfig::mesh_level},
      {"grid_step", &HarnessConfig::grid_step, nullptr},
      {"planar_grid_step", &HarnessConfig::planar_grid_step, nullptr},
      {"compactness_steps", nullptr, &HarnessConfig::compactness_steps},
      {"hausdorff_samples", nullptr, &HarnessConfig::hausdorff_samples},
      {"newton_maclaurin_samples", nullptr, &HarnessConfig::newton_maclaurin_samples},
  };
  return f;
}

const std::vector<Field>& tolerance_fields() {
  static const std::vector<Field> f{
      {"hk_gap", &HarnessConfig::hk_gap, nullptr},
      {"chain_slack", &HarnessConfig::chain_slack, nullptr},
      {"cap_ratio_closed", &HarnessConfig::cap_ratio_closed, nullptr},
      {"cap_ratio_mesh", &HarnessConfig::cap_ratio_mesh, nullptr},
      {"divergence_identity", &HarnessConfig::divergence_identity, nullptr},
      {"measure_exact", &HarnessConfig::measure_exact, nullptr},
      {"steiner_match", &HarnessConfig::steiner_match, nullptr},
      {"reach_threshold", &HarnessConfig::reach_threshold, nullptr},
      {"reach_ratio", &HarnessConfig::reach_ratio, nullptr},
      {"offset_sphere", &HarnessConfig::offset_sphere, nullptr},
      {"offset_ellipsoid", &HarnessConfig::offset_ellipsoid, nullptr},
      {"umbilic_center", &HarnessConfig::umbilic_center, nullptr},
      {"seam_mass", &HarnessConfig::seam_mass, nullptr},
      {"threshold_equality", &HarnessConfig::threshold_equality, nullptr},
      {"newton_maclaurin", &HarnessConfig::newton_maclaurin, nullptr},
  };
  return f;
}

void read_section(const ordered_json& j, const std::string& section, const std::vector<Field>& fields,
                  HarnessConfig& cfg, bool nonnegative_only) {
  if (!j.is_object()) throw ParseError("config: '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return key == f.key; });
    if (it == fields.end()) throw ParseError("config: unknown key '" + section + "." + key + "'");
    if (!value.is_number()) throw ParseError("config: '" + section + "." + key + "' must be a number");
    if (it->integer) {
      if (!value.is_number_integer()) throw ParseError("config: '" + section + "." + key + "' must be an integer");
      const auto v = value.get<long long>();
      if (v <= 0 || v > 1000000) throw ParseError("config: '" + section + "." + key + "' must be positive");
      cfg.*(it->integer) = static_cast<int>(v);
    } else {
      const double v = value.get<double>();
      const bool ok = std::isfinite(v) && (nonnegative_only ? v >= 0.0 : v > 0.0);
      if (!ok) {
        throw ParseError("config: '" + section + "." + key + "' must be " + (nonnegative_only ? "nonnegative" : "positive"));
      }
      cfg.*(it->real) = v;
    }
  }
}

}  // namespace

HarnessConfig parse_harness_config(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: top level must be an object");
  HarnessConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "theorems") {
      if (!value.is_array() || value.empty()) throw ParseError("config: 'theorems' must be a non-empty array");
      std::vector<TheoremId> ids;
      for (const auto& t : value) {
        if (!t.is_string()) throw ParseError("config: theorem ids must be strings");
        const auto id = theorem_from_string(t.get<std::string>());
        if (!id) throw ParseError("config: unknown theorem id '" + t.get<std::string>() + "'");
        if (std::find(ids.begin(), ids.end(), *id) == ids.end()) ids.push_back(*id);
      }
      cfg.theorems = ids;
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ParseError("config: 'seed' must be a nonnegative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "resolution") {
      read_section(value, key, resolution_fields(), cfg, false);
    } else if (key == "tolerances") {
      read_section(value, key, tolerance_fields(), cfg, true);
    } else {
      throw ParseError("config: unknown key '" + key + "'");
    }
  }
  if (cfg.mesh_level < 3) throw ParseError("config: 'resolution.mesh_level' must be at least 3");
  if (cfg.compactness_steps < 2) throw ParseError("config: 'resolution.compactness_steps' must be at least 2");
  return cfg;
}

ordered_json to_json(const HarnessConfig& config) {
  ordered_json j;
  j["theorems"] = ordered_json::array();
  for (TheoremId id : config.theorems) j["theorems"].push_back(to_string(id));
  j["seed"] = config.seed;
  ordered_json res, tol;
  for (const auto& f : resolution_fields()) {
    if (f.integer) res[f.key] = config.*(f.integer);
    else res[f.key] = json_number(config.*(f.real));
  }
  for (const auto& f : tolerance_fields()) tol[f.key] = json_number(config.*(f.real));
  j["resolution"] = res;
  j["tolerances"] = tol;
  return j;
}

// ---------------------------------------------------------------------------
// Serialization

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

ordered_json to_json(const TheoremReport& report) {
  ordered_json j;
  j["theorem"] = to_string(report.theorem);
  j["verdict"] = to_string(report.verdict());
  j["seed"] = report.seed;
  j["fixtures"] = ordered_json::array();
  for (const auto& f : report.fixtures) {
    ordered_json fj;
    fj["fixture"] = f.fixture;
    fj["verdict"] = to_string(f.verdict);
    fj["reason"] = f.reason;
    fj["quantities"] = ordered_json::array();
    for (const auto& q : f.quantities) {
      ordered_json qj;
      qj["name"] = q.name;
      qj["value"] = json_number(q.value);
      qj["tolerance"] = q.tolerance ? json_number(*q.tolerance) : ordered_json(nullptr);
      qj["verdict"] = q.verdict ? ordered_json(to_string(*q.verdict)) : ordered_json(nullptr);
      fj["quantities"].push_back(std::move(qj));
    }
    j["fixtures"].push_back(std::move(fj));
  }
  return j;
}

ordered_json to_json(const std::vector<TheoremReport>& reports) {
  ordered_json j = ordered_json::array();
  for (const auto& r : reports) j.push_back(to_json(r));
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const std::vector<TheoremReport>& reports) {
  std::ostringstream out;
  out << "# convexlab harness summary v1\n";
  out << "theorem,fixture,quantity,value,tolerance,verdict\n";
  for (const auto& r : reports) {
    for (const auto& f : r.fixtures) {
      for (const auto& q : f.quantities) {
        out << csv_field(to_string(r.theorem)) << ',' << csv_field(f.fixture) << ',' << csv_field(q.name) << ','
            << format_number(q.value) << ',' << (q.tolerance ? format_number(*q.tolerance) : "") << ','
            << (q.verdict ? to_string(*q.verdict) : "") << '\n';
      }
      if (f.quantities.empty()) {
        out << csv_field(to_string(r.theorem)) << ',' << csv_field(f.fixture) << ",error,,," << to_string(f.verdict)
            << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace convexlab
