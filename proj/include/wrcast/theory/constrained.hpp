#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wrcast::theory {

/// Range of sum_i w_i l_hat_i over the feasible set {sum w = N, w in box}.
struct ReachableSpan {
    double lo = 0.0;
    double hi = 0.0;
};
ReachableSpan reachable_span(std::span<const double> l_hat, double alpha);

/// Minimises (y - sum w_i l_hat_i)^2 subject to sum w = N and
/// w_i in [1 - alpha/N, 1 - alpha/N + alpha]. The feasible optimum is taken on
/// the segment from w = 1 towards the extreme vertex on y's side (all mass
/// alpha on the largest or smallest estimate); when y is out of reach that
/// vertex is returned. Throws DomainError if all estimates are equal and
/// ConfigError for alpha outside [0, N].
std::vector<double> constrained_optimal_weights(double y, std::span<const double> l_hat, double alpha);

/// A uniformly drawn member of the optimal set (hit-and-run on the polytope
/// {w in box : sum w = N, sum w l_hat = y*}, y* the closest reachable value),
/// started at constrained_optimal_weights. Equal to the start when the set is
/// a single point.
std::vector<double> random_optimal_weights(double y, std::span<const double> l_hat, double alpha, std::uint64_t seed,
                                           int steps = 25);

}  // namespace wrcast::theory
