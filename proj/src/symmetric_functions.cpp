#include "convexlab/symmetric_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "convexlab/common.hpp"

namespace convexlab {

std::vector<double> elementary_symmetric(std::span<const double> values) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += values[i] * e[k - 1];
  }
  return e;
}

double mean_curvature(std::span<const double> curvatures, int k) {
  const int n = static_cast<int>(curvatures.size());
  if (k < 0 || k > n) {
    throw DomainError("mean curvature index " + std::to_string(k) + " outside [0, " +
                      std::to_string(n) + "]");
  }
  return elementary_symmetric(curvatures)[k];
}

double newton_maclaurin_margin(std::span<const double> curvatures, int k) {
  const int n = static_cast<int>(curvatures.size());
  if (k < 1 || k > n) throw DomainError("Newton-MacLaurin index must lie in [1, n]");
  if (std::any_of(curvatures.begin(), curvatures.end(), [](double c) { return c < 0.0; })) {
    throw DomainError("Newton-MacLaurin margin needs nonnegative curvatures");
  }
  const auto e = elementary_symmetric(curvatures);
  return e[1] / n - std::pow(e[k] / binomial(n, k), 1.0 / k);
}

}  // namespace convexlab
