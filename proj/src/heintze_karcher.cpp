#include "convexlab/heintze_karcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "convexlab/symmetric_functions.hpp"

namespace convexlab {

std::string to_string(HKVerdict verdict) {
  switch (verdict) {
    case HKVerdict::EqualityBall:
      return "EqualityBall";
    case HKVerdict::StrictInequality:
      return "StrictInequality";
    case HKVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

double surface_integral(const SupportEvaluator& body, const SphereQuadrature& quad,
                        const std::function<double(const BoundaryPointData&)>& f) {
  if (quad.ambient_dim != body.ambient_dim()) {
    throw DomainError("quadrature and body ambient dimensions differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto data = principal_data(body, quad.nodes[i], quad.weights[i]);
    sum += data.area_weight * f(data);
  }
  return sum;
}

double hk_tolerance(const SupportEvaluator& body, int /*level*/, double volume) {
  double rel = 1e-6;
  if (!body.analytic_hessian()) {
    // Round-off of a central second difference is about 4 eps / s^2.
    const double s = body.fd_step();
    rel += 4.0 * std::numeric_limits<double>::epsilon() / (s * s);
  }
  return rel * std::abs(volume);
}

HKReport hk_functional(const SupportEvaluator& body, const HKOptions& options) {
  const auto quad = SphereQuadrature::make(body.ambient_dim(), options.level);
  screen_convexity(body, quad);
  const int n = body.n();
  HKReport r;
  r.quadrature_level = options.level;
  double kmin = std::numeric_limits<double>::infinity();
  double kmax = 0.0;
  double ksum = 0.0;
  std::size_t kcount = 0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto d = principal_data(body, quad.nodes[i], quad.weights[i]);
    const double h1 = mean_curvature(d.curvatures, 1);
    r.area += d.area_weight;
    r.volume += d.area_weight * d.x.dot(d.u) / (n + 1);
    r.hk_integral += d.area_weight / h1;
    for (double k : d.curvatures) {
      kmin = std::min(kmin, k);
      kmax = std::max(kmax, k);
      ksum += k;
      ++kcount;
    }
  }
  r.gap = static_cast<double>(n) / (n + 1) * r.hk_integral - r.volume;
  r.curvature_spread = (kmax - kmin) / (ksum / static_cast<double>(kcount));
  r.tolerance = hk_tolerance(body, options.level, r.volume);
  const bool equal_gap = std::abs(r.gap) <= options.equality_gap * r.volume;
  const bool umbilic = r.curvature_spread <= options.equality_spread;
  if (equal_gap && umbilic) {
    r.verdict = HKVerdict::EqualityBall;
  } else if (r.gap > options.equality_gap * r.volume) {
    r.verdict = HKVerdict::StrictInequality;
  } else {
    r.verdict = HKVerdict::Inconclusive;
  }
  return r;
}

HKReport reference_ball_report(int n, double radius) {
  if (n != 1 && n != 2) throw DomainError("reference ball report needs n in {1,2}");
  if (!(radius > 0)) throw DomainError("ball radius must be positive");
  HKReport r;
  if (n == 1) {
    r.volume = kPi * radius * radius;
    r.area = 2.0 * kPi * radius;
  } else {
    r.volume = 4.0 * kPi * radius * radius * radius / 3.0;
    r.area = 4.0 * kPi * radius * radius;
  }
  r.hk_integral = r.area * radius / n;
  r.gap = static_cast<double>(n) / (n + 1) * r.hk_integral - r.volume;
  r.verdict = HKVerdict::EqualityBall;
  return r;
}

double tube_time_integral(double a, double T, int n) {
  if (a <= 0.0) return T;
  const double base = std::max(0.0, 1.0 - a * T);
  return (1.0 - std::pow(base, n + 1)) / (a * (n + 1));
}

namespace {

// int_0^T prod_j (1 - t kappa_j) dt = sum_i (-1)^i e_i T^{i+1} / (i+1).
double jacobian_time_integral(const std::vector<double>& kappa, double T) {
  const auto e = elementary_symmetric(kappa);
  double sum = 0.0;
  double tp = T;
  for (std::size_t i = 0; i < e.size(); ++i) {
    sum += (i % 2 ? -1.0 : 1.0) * e[i] * tp / static_cast<double>(i + 1);
    tp *= T;
  }
  return sum;
}

}  // namespace

ProofChain proof_chain(const SupportEvaluator& body, int level) {
  const auto quad = SphereQuadrature::make(body.ambient_dim(), level);
  const int n = body.n();
  ProofChain c;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto d = principal_data(body, quad.nodes[i], quad.weights[i]);
    const double h1 = mean_curvature(d.curvatures, 1);
    const double kmax = *std::max_element(d.curvatures.begin(), d.curvatures.end());
    const double focal = 1.0 / kmax;
    c.volume += d.area_weight * d.x.dot(d.u) / (n + 1);
    c.jacobian_bound += d.area_weight * jacobian_time_integral(d.curvatures, focal);
    c.tube_bound += d.area_weight * tube_time_integral(h1 / n, focal, n);
    c.hk_bound += d.area_weight * static_cast<double>(n) / ((n + 1) * h1);
  }
  return c;
}

double tube_bound_via_normal_bundle(const SupportEvaluator& body, int level) {
  return proof_chain(body, level).tube_bound;
}

std::vector<double> smooth_curvature_totals(const SupportEvaluator& body, int level) {
  const auto quad = SphereQuadrature::make(body.ambient_dim(), level);
  const int n = body.n();
  std::vector<double> totals(n + 1, 0.0);
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto d = principal_data(body, quad.nodes[i], quad.weights[i]);
    const auto e = elementary_symmetric(d.curvatures);
    for (int k = 0; k <= n; ++k) totals[k] += d.area_weight * e[n - k];
  }
  return totals;
}

double min_mean_curvature(const SupportEvaluator& body, int k, int level) {
  const auto quad = SphereQuadrature::make(body.ambient_dim(), level);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& u : quad.nodes) {
    m = std::min(m, mean_curvature(principal_data(body, u).curvatures, k));
  }
  return m;
}

double curvature_threshold(int n, int k, double area, double volume) {
  if (k < 1 || k > n) throw DomainError("threshold index must lie in [1, n]");
  if (!(volume > 0)) throw DomainError("threshold needs positive volume");
  return std::pow(area / ((n + 1) * volume), k) * binomial(n, k);
}

std::vector<SupportEvaluator> random_smooth_bodies(std::uint64_t seed, int count,
                                                   const RandomBodyOptions& options) {
  struct Bump {
    Vec3 direction;
    double amplitude;
    double sharpness;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto screen = SphereQuadrature::make(3, options.screen_level);
  std::vector<SupportEvaluator> bodies;
  while (static_cast<int>(bodies.size()) < count) {
    std::vector<Bump> bumps;
    for (int j = 0; j < options.bumps; ++j) {
      const double z = 2.0 * unit(rng) - 1.0;
      const double phi = 2.0 * kPi * unit(rng);
      const double s = std::sqrt(1.0 - z * z);
      Bump b;
      b.direction = Vec3(s * std::cos(phi), s * std::sin(phi), z);
      b.amplitude = (2.0 * unit(rng) - 1.0) * options.max_amplitude * options.base_radius;
      b.sharpness = options.min_sharpness + (options.max_sharpness - options.min_sharpness) * unit(rng);
      bumps.push_back(b);
    }
    const double r0 = options.base_radius;
    auto value = [bumps, r0](const Vec3& x) {
      const double len = x.norm();
      const Vec3 u = x / len;
      double h = r0;
      for (const auto& b : bumps) h += b.amplitude * std::exp(b.sharpness * (u.dot(b.direction) - 1.0));
      return len * h;
    };
    SupportEvaluator body(3, value, {}, {}, r0);
    try {
      screen_convexity(body, screen);
    } catch (const ConvexityViolation&) {
      continue;
    }
    bodies.push_back(std::move(body));
  }
  return bodies;
}

}  // namespace convexlab
