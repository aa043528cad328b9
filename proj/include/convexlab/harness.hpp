#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "convexlab/body.hpp"

namespace convexlab {

enum class TheoremId { HKSmooth, HKChain, HKThreshold, Compactness, CapBody, SingularSeam, Umbilic, SteinerReach };

/// Ids in report order.
const std::vector<TheoremId>& all_theorems();
std::string to_string(TheoremId id);
/// Accepts the printed form ("HK-smooth", "SteinerReach", ...).
std::optional<TheoremId> theorem_from_string(std::string_view text);

/// Statement each experiment realizes. Every in-scope result has an entry.
struct CoverageEntry {
  std::string statement;
  TheoremId theorem;
};
const std::vector<CoverageEntry>& coverage_manifest();

enum class Verdict { Pass, Fail, Skip };
std::string to_string(Verdict v);

/// One measured value. `tolerance` and `verdict` are absent for values that
/// are reported but not checked.
struct QuantityRecord {
  std::string name;
  double value = 0.0;
  std::optional<double> tolerance;
  std::optional<Verdict> verdict;
};

struct FixtureResult {
  std::string fixture;
  Verdict verdict = Verdict::Pass;
  std::string reason;
  std::vector<QuantityRecord> quantities;
};

struct TheoremReport {
  TheoremId theorem = TheoremId::HKSmooth;
  std::uint64_t seed = 0;
  std::vector<FixtureResult> fixtures;

  /// Fail if any fixture fails, Skip if all skip, otherwise Pass.
  Verdict verdict() const;
};

/// Resolutions, seeds and tolerances of a harness run.
struct HarnessConfig {
  std::vector<TheoremId> theorems = all_theorems();
  std::uint64_t seed = 42;
  int quadrature_level = 5;
  int random_bodies = 50;
  int mesh_level = 5;
  double grid_step = 0.02;         // 3D distance fields
  double planar_grid_step = 0.02;  // 2D distance fields
  int compactness_steps = 6;
  int hausdorff_samples = 10000;
  int newton_maclaurin_samples = 10000;

  double hk_gap = 1e-6;              // relative to volume
  double chain_slack = 1e-6;         // absolute
  double cap_ratio_closed = 1e-9;
  double cap_ratio_mesh = 0.01;      // relative
  double divergence_identity = 1e-12;
  double measure_exact = 1e-8;
  double steiner_match = 0.01;       // relative
  double reach_threshold = 0.005;    // relative to V(rho_min)
  double reach_ratio = 10.0;
  double offset_sphere = 1e-3;
  double offset_ellipsoid = 0.02;
  double umbilic_center = 1e-3;
  double seam_mass = 0.02;           // relative
  double threshold_equality = 1e-9;  // relative
  double newton_maclaurin = 1e-12;
};

/// JSON object with optional keys "theorems" (array of ids), "seed",
/// "resolution" {quadrature_level, random_bodies, mesh_level, grid_step,
/// planar_grid_step, compactness_steps, hausdorff_samples,
/// newton_maclaurin_samples} and "tolerances" {one key per tolerance field
/// above}. Unknown keys, wrong types, bad ids or non-positive resolutions
/// raise ParseError.
HarnessConfig parse_harness_config(std::string_view json_text);
nlohmann::ordered_json to_json(const HarnessConfig& config);

/// Gap of the functional against the volume, and EqualityBall exactly for
/// balls. Bodies without a support function are rejected.
FixtureResult verify_hk(const Body& body, const HarnessConfig& config = {});
TheoremReport verify_hk_report(const Body& body, const HarnessConfig& config = {});

/// ess-inf H_k against the threshold (A / ((n+1) V))^k C(n,k): equal for
/// balls, strictly below for any other body. Cap bodies use the closed form.
FixtureResult verify_hk_threshold(const Body& body, int k, const HarnessConfig& config = {});

/// Cap bodies with eps_i = 2^-i, i = 1..steps: thresholds, L1 deviation
/// |C(n,k) - mu_i| * area, and sampled Hausdorff distance to the unit ball.
TheoremReport compactness_experiment(int n, int k, int steps, const HarnessConfig& config = {});

/// Sampled two-sided Hausdorff distance from the cap body to the unit ball
/// using `samples` Fibonacci points on each boundary.
double sampled_hausdorff_to_ball(int n, double epsilon, int samples);

TheoremReport run_theorem(TheoremId id, const HarnessConfig& config = {});
/// Runs the configured theorems in report order.
std::vector<TheoremReport> run_all(const HarnessConfig& config = {});
bool any_failure(const std::vector<TheoremReport>& reports);

/// Deterministic serialization: fixed key order, non-finite values as
/// strings ("inf", "-inf", "nan").
nlohmann::ordered_json to_json(const TheoremReport& report);
nlohmann::ordered_json to_json(const std::vector<TheoremReport>& reports);
/// "# convexlab harness summary v1" header, then
/// theorem,fixture,quantity,value,tolerance,verdict.
std::string to_csv(const std::vector<TheoremReport>& reports);

/// Formats a double with 17 significant digits ("inf"/"nan" when not finite).
std::string format_number(double v);
nlohmann::ordered_json json_number(double v);

}  // namespace convexlab
