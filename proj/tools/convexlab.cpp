#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "convexlab/body.hpp"
#include "convexlab/body_spec.hpp"
#include "convexlab/harness.hpp"
#include "convexlab/heintze_karcher.hpp"
#include "convexlab/mesh.hpp"
#include "convexlab/polytope_bundle.hpp"
#include "convexlab/tube_lab.hpp"
#include "convexlab/umbilic.hpp"

namespace fs = std::filesystem;
using namespace convexlab;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

constexpr const char* kBodyHelp =
    "body spec: ball:r=1, ellipsoid:a=1,b=1,c=2, capbody:eps=0.5, polytope:@file.off, cube, square, "
    "tetrahedron, lshape, bumpy:seed=42, mesh:file=s.off, or @spec.txt (lengths in body units)";

// Relative output paths land in $CONVEXLAB_OUT_DIR when it is set.
fs::path output_path(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("CONVEXLAB_OUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  }
  return p;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const fs::path p = output_path(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + p.string() + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json box_json(const Box& b, int dim) {
  ordered_json lo = ordered_json::array(), hi = ordered_json::array();
  for (int i = 0; i < dim; ++i) {
    lo.push_back(json_number(b.lo[i]));
    hi.push_back(json_number(b.hi[i]));
  }
  return ordered_json{{"lo", lo}, {"hi", hi}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<CurvatureMeasureReport> measures_of(const Body& body, int level) {
  if (std::holds_alternative<Polytope>(body.kind)) return curvature_measures(build_face_lattice(body));
  if (const auto* cb = std::get_if<CapBody>(&body.kind)) return cap_body_curvature_measures(body.n(), cb->epsilon);
  if (auto ev = support_evaluator(body)) return smooth_curvature_measures(*ev, level);
  throw DomainError("curvature measures need a polytope, cap body or smooth convex body, got " + body.kind_name());
}

// ---------------------------------------------------------------------------

struct BodyArgs {
  std::string body;
  int level = 5;
  std::string out;
  std::string mesh_out;
};

int run_body(const BodyArgs& a) {
  const Body body = parse_body(a.body);
  ordered_json j;
  j["kind"] = body.kind_name();
  j["name"] = body.name;
  j["ambient_dim"] = body.ambient_dim;
  j["convex"] = body.is_convex();
  j["bounding_box"] = box_json(bounding_box(body), body.ambient_dim);
  if (std::holds_alternative<Polytope>(body.kind)) {
    const FaceLattice lattice = build_face_lattice(body);
    j["volume"] = json_number(polytope_volume(lattice));
  } else if (const auto* cb = std::get_if<CapBody>(&body.kind)) {
    const auto m = cap_body_metrics(body.n(), cb->epsilon);
    j["volume"] = json_number(2 * m.half_volume);
    j["area"] = json_number(2 * m.cap_area);
    j["ratio"] = json_number(m.ratio);
    j["seam_radius"] = json_number(cap_body_seam_radius(cb->epsilon));
  } else if (auto ev = support_evaluator(body)) {
    const HKReport r = hk_functional(*ev, HKOptions{a.level});
    j["volume"] = json_number(r.volume);
    j["area"] = json_number(r.area);
  }
  if (!a.mesh_out.empty()) {
    const fs::path p = output_path(a.mesh_out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_off(p, boundary_mesh(body, a.level));
  }
  emit(a.out, dump(j));
  return kExitOk;
}

struct MeasuresArgs {
  std::string body;
  int level = 5;
  std::string out;
};

int run_measures(const MeasuresArgs& a) {
  const Body body = parse_body(a.body);
  std::ostringstream csv;
  csv << "# convexlab measures v1\n";
  csv << "k,total,ac,sing\n";
  for (const auto& r : measures_of(body, a.level)) {
    csv << r.k << ',' << format_number(r.total) << ',' << format_number(r.ac_part) << ','
        << format_number(r.sing_part) << '\n';
  }
  emit(a.out, csv.str());
  return kExitOk;
}

struct HkArgs {
  std::string body;
  int level = 5;
  bool chain = false;
  std::string out;
};

int run_hk(const HkArgs& a) {
  const Body body = parse_body(a.body);
  const auto ev = support_evaluator(body);
  if (!ev) throw DomainError("hk needs a smooth convex body (ball, ellipsoid, bumpy), got " + body.kind_name());
  const HKReport r = hk_functional(*ev, HKOptions{a.level});
  ordered_json j;
  j["body"] = a.body;
  j["volume"] = json_number(r.volume);
  j["area"] = json_number(r.area);
  j["hk_integral"] = json_number(r.hk_integral);
  j["gap"] = json_number(r.gap);
  j["verdict"] = to_string(r.verdict);
  j["quadrature_level"] = r.quadrature_level;
  if (a.chain) {
    const ProofChain pc = proof_chain(*ev, a.level);
    j["chain"] = ordered_json{{"volume", json_number(pc.volume)},
                              {"jacobian_bound", json_number(pc.jacobian_bound)},
                              {"tube_bound", json_number(pc.tube_bound)},
                              {"hk_bound", json_number(pc.hk_bound)}};
  }
  emit(a.out, dump(j));
  return r.gap < -r.tolerance ? kExitFail : kExitOk;
}

struct TubeArgs {
  std::string body;
  double step = 0.02;
  double pad = 0.0;
  std::vector<double> radii{0.1, 0.2, 0.3};
  bool fit = false;
  double threshold = 0.005;
  double level_set = 0.0;
  std::string mesh_out;
  std::string field_out;
  std::string out;
};

int run_tube(const TubeArgs& a) {
  const std::vector<Body> bodies = parse_body_list(a.body);
  double rmax = a.level_set;
  for (double r : a.radii) {
    if (!(r > 0.0)) throw DomainError("radii must be positive");
    rmax = std::max(rmax, r);
  }
  const double pad = a.pad > 0.0 ? a.pad : rmax + 2 * a.step;
  const DistanceField field = build_distance_field(bodies, padded_box(bodies, pad), a.step);
  ordered_json j;
  j["body"] = a.body;
  j["step"] = json_number(a.step);
  j["dims"] = field.dims;
  j["lipschitz_ratio"] = json_number(lipschitz_ratio(field));
  ordered_json vols = ordered_json::array();
  for (double r : a.radii) vols.push_back({{"rho", json_number(r)}, {"volume", json_number(offset_volume(field, r))}});
  j["offset_volumes"] = vols;
  if (a.fit) {
    const SteinerFit fit = steiner_fit(field, a.radii, a.threshold);
    ordered_json coef = ordered_json::array();
    for (double c : fit.coefficients) coef.push_back(json_number(c));
    j["steiner_fit"] = ordered_json{{"coefficients", coef},
                                    {"residual", json_number(fit.residual)},
                                    {"threshold", json_number(fit.threshold)},
                                    {"verdict", to_string(fit.verdict)}};
  }
  if (a.level_set > 0.0) {
    const OffsetSurface s = extract_level_set(field, a.level_set, false);
    j["level_set"] = ordered_json{{"r", json_number(a.level_set)}, {"measure", json_number(level_set_measure(s))}};
    if (!a.mesh_out.empty()) {
      if (s.ambient_dim != 3) throw DomainError("--mesh-out needs a 3D body");
      const fs::path p = output_path(a.mesh_out);
      if (p.has_parent_path()) fs::create_directories(p.parent_path());
      write_off(p, s.mesh);
    }
  }
  if (!a.field_out.empty()) {
    const fs::path p = output_path(a.field_out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_field_binary(p, field);
  }
  emit(a.out, dump(j));
  return kExitOk;
}

struct UmbilicArgs {
  std::string mesh;
  std::string body;
  int level = 5;
  double deviation = 1e-3;
  std::string out;
};

int run_umbilic(const UmbilicArgs& a) {
  if (a.mesh.empty() == a.body.empty()) throw CLI::ValidationError("umbilic", "give exactly one of --mesh or --body");
  const TriMesh mesh = a.mesh.empty() ? boundary_mesh(parse_body(a.body), a.level) : read_mesh(a.mesh);
  UmbilicTolerances tol;
  tol.deviation = a.deviation;
  const UmbilicVerdict v = classify_surface(mesh, tol);
  ordered_json comps = ordered_json::array();
  for (const auto& c : v.components) {
    ordered_json cj;
    cj["classification"] = to_string(c.classification);
    cj["vertex_count"] = c.vertex_count;
    if (c.classification == SurfaceClass::Sphere) {
      cj["center"] = {json_number(c.center.x()), json_number(c.center.y()), json_number(c.center.z())};
      cj["radius"] = json_number(c.radius);
    }
    cj["max_deviation"] = json_number(c.max_deviation);
    cj["kappa_spread"] = json_number(c.kappa_spread);
    cj["fit_residual"] = json_number(c.fit_residual);
    cj["mean_kappa"] = json_number(c.mean_kappa);
    comps.push_back(std::move(cj));
  }
  emit(a.out, dump(ordered_json{{"components", comps}}));
  return kExitOk;
}

struct VerifyArgs {
  bool all = false;
  std::vector<std::string> theorems;
  std::uint64_t seed = 42;
  bool seed_given = false;
  std::string config;
  std::string out;
  std::string csv;
};

int run_verify(const VerifyArgs& a) {
  HarnessConfig cfg = a.config.empty() ? HarnessConfig{} : parse_harness_config(read_text(a.config));
  if (a.seed_given) cfg.seed = a.seed;
  if (!a.theorems.empty()) {
    cfg.theorems.clear();
    for (const auto& t : a.theorems) {
      const auto id = theorem_from_string(t);
      if (!id) throw CLI::ValidationError("--theorem", "unknown theorem id '" + t + "'");
      cfg.theorems.push_back(*id);
    }
  } else if (!a.all && a.config.empty()) {
    throw CLI::ValidationError("verify", "give --all, --theorem or --config");
  }
  const auto reports = run_all(cfg);
  ordered_json j;
  j["format"] = "convexlab harness report v1";
  j["config"] = to_json(cfg);
  j["reports"] = to_json(reports);
  emit(a.out, dump(j));
  if (!a.csv.empty()) emit(a.csv, to_csv(reports));
  for (const auto& r : reports) {
    std::cerr << to_string(r.verdict()) << ' ' << to_string(r.theorem) << " (" << r.fixtures.size() << " fixtures)\n";
    for (const auto& f : r.fixtures) {
      if (f.verdict == Verdict::Fail) std::cerr << "  FAIL " << f.fixture << ": " << f.reason << '\n';
    }
  }
  return any_failure(reports) ? kExitFail : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convexlab: convex-geometry experiments (curvature, tubes, Heintze-Karcher checks)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "convexlab 1.0");

  BodyArgs body_args;
  auto* body = app.add_subcommand("body", "Describe a body and optionally export its boundary mesh");
  body->add_option("--body", body_args.body, kBodyHelp)->required();
  body->add_option("--level", body_args.level, "icosphere subdivision level for quadrature and meshes (count)")
      ->check(CLI::Range(1, 8));
  body->add_option("--out", body_args.out, "JSON output path (default stdout)");
  body->add_option("--mesh-out", body_args.mesh_out, "write the boundary mesh as OFF (3D bodies)");

  MeasuresArgs m_args;
  auto* measures = app.add_subcommand("measures", "Curvature measure totals C_k with absolutely continuous and singular parts");
  measures->add_option("--body", m_args.body, kBodyHelp)->required();
  measures->add_option("--level", m_args.level, "quadrature level for smooth bodies (count)")->check(CLI::Range(1, 8));
  measures->add_option("--out", m_args.out, "CSV output path (default stdout); columns k,total,ac,sing in body units^k");

  HkArgs hk_args;
  auto* hk = app.add_subcommand("hk", "Heintze-Karcher functional of a smooth convex body");
  hk->add_option("--body", hk_args.body, kBodyHelp)->required();
  hk->add_option("--level", hk_args.level, "quadrature level (icosphere subdivisions, count)")->check(CLI::Range(1, 8));
  hk->add_flag("--chain", hk_args.chain, "also report the proof-chain bounds (volumes, body units^(n+1))");
  hk->add_option("--out", hk_args.out, "JSON output path (default stdout)");

  TubeArgs tube_args;
  auto* tube = app.add_subcommand("tube", "Distance field, offset volumes, Steiner fit and level sets");
  tube->add_option("--body", tube_args.body, std::string(kBodyHelp) + "; join several with ' + '")->required();
  tube->add_option("--step", tube_args.step, "grid step h (body units)")->check(CLI::PositiveNumber);
  tube->add_option("--pad", tube_args.pad, "grid padding around the bodies (body units; default max radius + 2h)")
      ->check(CLI::NonNegativeNumber);
  tube->add_option("--radii", tube_args.radii, "offset radii rho (body units)")->delimiter(',');
  tube->add_flag("--fit", tube_args.fit, "fit a Steiner polynomial through the offset volumes (needs n+3 radii)");
  tube->add_option("--threshold", tube_args.threshold, "reach residual threshold (fraction of V(rho_min))")
      ->check(CLI::PositiveNumber);
  tube->add_option("--level-set", tube_args.level_set, "extract the level set at this distance r (body units)")
      ->check(CLI::PositiveNumber);
  tube->add_option("--mesh-out", tube_args.mesh_out, "write the level-set mesh as OFF");
  tube->add_option("--field-out", tube_args.field_out, "write the distance field as little-endian binary");
  tube->add_option("--out", tube_args.out, "JSON output path (default stdout)");

  UmbilicArgs u_args;
  auto* umbilic = app.add_subcommand("umbilic", "Classify each surface component as Plane, Sphere or Neither");
  umbilic->add_option("--mesh", u_args.mesh, "closed or open triangle mesh (OFF or OBJ)")->check(CLI::ExistingFile);
  umbilic->add_option("--body", u_args.body, std::string(kBodyHelp) + "; meshed at --level");
  umbilic->add_option("--level", u_args.level, "icosphere subdivision level for --body (count)")->check(CLI::Range(1, 7));
  umbilic->add_option("--deviation", u_args.deviation, "umbilic deviation tolerance (dimensionless)")
      ->check(CLI::PositiveNumber);
  umbilic->add_option("--out", u_args.out, "JSON output path (default stdout)");

  VerifyArgs v_args;
  auto* verify = app.add_subcommand("verify", "Run the theorem experiments and emit PASS/FAIL reports");
  verify->add_flag("--all", v_args.all, "run every experiment");
  verify->add_option("--theorem", v_args.theorems,
                     "experiment id (repeatable): HK-smooth, HK-chain, HK-threshold, Compactness, CapBody, "
                     "SingularSeam, Umbilic, SteinerReach");
  verify->add_option("--seed", v_args.seed, "random seed (integer, default 42)");
  verify->add_option("--config", v_args.config, "JSON config with theorems, seed, resolution and tolerances")
      ->check(CLI::ExistingFile);
  verify->add_option("--out", v_args.out, "JSON report path (default stdout)");
  verify->add_option("--csv", v_args.csv, "CSV summary path (theorem,fixture,quantity,value,tolerance,verdict)");
  app.footer("Relative output paths are resolved under $CONVEXLAB_OUT_DIR when set.\nExit status: 0 success, 1 verification failure, 2 usage or input error.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  v_args.seed_given = verify->count("--seed") > 0;

  try {
    if (*body) return run_body(body_args);
    if (*measures) return run_measures(m_args);
    if (*hk) return run_hk(hk_args);
    if (*tube) return run_tube(tube_args);
    if (*umbilic) return run_umbilic(u_args);
    if (*verify) return run_verify(v_args);
  } catch (const CLI::Error& e) {
    std::cerr << "convexlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "convexlab: error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
