#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace wrcast::wr {

/// Closed interval [1 - alpha/N, 1 - alpha/N + alpha] reachable by each weight.
std::pair<double, double> weight_interval(double alpha, std::size_t N);

/// w_i = alpha * softmax(logits)_i + 1 - alpha/N. Throws ConfigError when
/// N < 2 or alpha lies outside [0, N].
std::vector<double> normalize_weights(std::span<const double> logits, double alpha);

void check_alpha(double alpha, std::size_t N);

}  // namespace wrcast::wr
