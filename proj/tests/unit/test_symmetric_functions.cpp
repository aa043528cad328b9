#include <cmath>
#include <random>
#include <vector>

#include "convexlab/common.hpp"
#include "convexlab/symmetric_functions.hpp"
#include "doctest.h"

using namespace convexlab;

namespace {

// Subset enumeration, independent of the recurrence.
double e_k_brute(const std::vector<double>& v, int k) {
  const int n = static_cast<int>(v.size());
  double sum = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    double p = 1.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) p *= v[i];
    }
    sum += p;
  }
  return sum;
}

}  // namespace

TEST_CASE("pointwise mean curvatures") {
  const std::vector<double> sphere = {1.0, 1.0};
  CHECK(mean_curvature(sphere, 0) == 1.0);
  CHECK(mean_curvature(sphere, 1) == 2.0);
  CHECK(mean_curvature(sphere, 2) == 1.0);
  const std::vector<double> k23 = {2.0, 3.0};
  CHECK(mean_curvature(k23, 2) == 6.0);
  // Ellipsoid (1,1,2) at the pole: both principal curvatures equal c/a^2 = 2.
  const std::vector<double> pole = {2.0, 2.0};
  CHECK(mean_curvature(pole, 1) == 4.0);
  CHECK_THROWS_AS(mean_curvature(sphere, 3), DomainError);
  CHECK_THROWS_AS(mean_curvature(sphere, -1), DomainError);
}

TEST_CASE("recurrence matches subset enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    const auto e = elementary_symmetric(v);
    for (int k = 0; k <= n; ++k) CHECK(e[k] == doctest::Approx(e_k_brute(v, k)).epsilon(1e-12));
  }
}

TEST_CASE("Newton-MacLaurin margin examples") {
  CHECK(newton_maclaurin_margin(std::vector<double>{1.0, 1.0}, 2) == doctest::Approx(0.0));
  CHECK(newton_maclaurin_margin(std::vector<double>{0.0, 2.0}, 2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(newton_maclaurin_margin(std::vector<double>{-0.1, 1.0}, 1), DomainError);
  CHECK_THROWS_AS(newton_maclaurin_margin(std::vector<double>{1.0, 1.0}, 0), DomainError);
  CHECK_THROWS_AS(newton_maclaurin_margin(std::vector<double>{1.0, 1.0}, 3), DomainError);
}

TEST_CASE("Newton-MacLaurin margin is nonnegative on random inputs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(0.0, 5.0);
  int checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + trial % 5;
    std::vector<double> v(n);
    for (auto& x : v) x = trial % 7 == 0 ? 0.0 : d(rng);
    for (int k = 1; k <= n; ++k) {
      const double lhs = e_k_brute(v, 1) / n;
      const double rhs = std::pow(e_k_brute(v, k) / binomial(n, k), 1.0 / k);
      REQUIRE(lhs - rhs >= -1e-12);
      REQUIRE(newton_maclaurin_margin(v, k) >= -1e-12);
      ++checked;
    }
  }
  CHECK(checked > 10000);
}
