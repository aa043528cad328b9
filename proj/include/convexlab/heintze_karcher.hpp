#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "convexlab/support_function.hpp"

namespace convexlab {

enum class HKVerdict { EqualityBall, StrictInequality, Inconclusive };

std::string to_string(HKVerdict verdict);

/// Volume, boundary area and the functional (n/(n+1)) * int 1/H_1 of a
/// convex body. `gap` is the functional minus the volume; it is nonnegative
/// for every convex body and vanishes exactly for balls.
struct HKReport {
  double volume = 0.0;
  double area = 0.0;
  double hk_integral = 0.0;  // int over the boundary of 1/H_1
  double gap = 0.0;
  int quadrature_level = 0;
  double tolerance = 0.0;         // absolute gap tolerance at this level
  double curvature_spread = 0.0;  // (max kappa - min kappa) / mean kappa
  HKVerdict verdict = HKVerdict::Inconclusive;
};

struct HKOptions {
  int level = 5;
  double equality_gap = 1e-5;     // relative to volume
  double equality_spread = 1e-4;  // relative curvature spread
};

/// Sum over quadrature nodes of area_weight * f(data). With f = 1 this is
/// the boundary area, with f = (x . u)/(n+1) the volume.
double surface_integral(const SupportEvaluator& body, const SphereQuadrature& quad,
                        const std::function<double(const BoundaryPointData&)>& f);

/// Gap tolerance at a quadrature level: 1e-6 * volume plus a finite-difference
/// term when the Hessian is not analytic.
double hk_tolerance(const SupportEvaluator& body, int level, double volume);

/// Screens convexity at the quadrature nodes, then evaluates the functional.
HKReport hk_functional(const SupportEvaluator& body, const HKOptions& options = {});

/// Exact reference values for the ball of radius r in R^{n+1}.
HKReport reference_ball_report(int n, double radius);

/// The three quantities of the normal-bundle volume estimate for the
/// complement of int K, whose principal curvatures are -kappa_i:
///   volume <= jacobian_bound <= tube_bound <= hk_bound,
/// where the t-integrals run up to the focal distance 1/kappa_max and
///   jacobian_bound = sum w * int prod(1 - t kappa_j) dt,
///   tube_bound     = sum w * int (1 - t H_1/n)^n dt,
///   hk_bound       = (n/(n+1)) * int 1/H_1.
struct ProofChain {
  double volume = 0.0;
  double jacobian_bound = 0.0;
  double tube_bound = 0.0;
  double hk_bound = 0.0;
};

ProofChain proof_chain(const SupportEvaluator& body, int level = 5);
double tube_bound_via_normal_bundle(const SupportEvaluator& body, int level = 5);

/// int_0^T (1 - a t)^n dt in closed form (a T <= 1).
double tube_time_integral(double a, double T, int n);

/// Totals C_k(K, R^{n+1}) = int H_{n-k} for k = 0..n of a smooth body.
std::vector<double> smooth_curvature_totals(const SupportEvaluator& body, int level = 5);

/// Minimum over quadrature nodes of H_k (ess-inf proxy).
double min_mean_curvature(const SupportEvaluator& body, int k, int level = 5);

/// Threshold (A / ((n+1) V))^k * C(n,k) of the pointwise curvature condition.
double curvature_threshold(int n, int k, double area, double volume);

struct RandomBodyOptions {
  double base_radius = 1.0;
  int bumps = 6;
  double max_amplitude = 0.05;  // relative to base_radius, per bump
  double min_sharpness = 1.0;
  double max_sharpness = 4.0;
  int screen_level = 3;
};

/// h(u) = r0 + sum_j a_j exp(beta_j (u . c_j - 1)) with uniformly random
/// directions c_j, amplitudes |a_j| <= max_amplitude * r0 and sharpness
/// beta_j. Non-convex draws are rejected and redrawn from the same stream.
/// Hessians come from finite differences.
std::vector<SupportEvaluator> random_smooth_bodies(std::uint64_t seed, int count,
                                                   const RandomBodyOptions& options = {});

}  // namespace convexlab
