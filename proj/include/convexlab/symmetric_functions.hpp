#pragma once

#include <span>
#include <vector>

namespace convexlab {

/// e_0..e_n of the given values; e_0 = 1.
std::vector<double> elementary_symmetric(std::span<const double> values);

/// Pointwise k-th mean curvature H_k = e_k(kappa_1, ..., kappa_n), unnormalized.
/// Throws DomainError unless 0 <= k <= n.
double mean_curvature(std::span<const double> curvatures, int k);

/// H_1/n - (H_k / C(n,k))^(1/k). Nonnegative for nonnegative curvatures;
/// throws DomainError on negative entries or k outside [1, n].
double newton_maclaurin_margin(std::span<const double> curvatures, int k);

}  // namespace convexlab
