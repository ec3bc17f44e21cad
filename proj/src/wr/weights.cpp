#include "wrcast/wr/weights.hpp"

#include "wrcast/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wrcast::wr {

void check_alpha(double alpha, std::size_t N) {
    if (N < 2) throw ConfigError("weighted combination needs at least two components");
    if (!(alpha >= 0.0 && alpha <= static_cast<double>(N)))
        throw ConfigError("alpha must lie in [0, " + std::to_string(N) + "]");
}

std::pair<double, double> weight_interval(double alpha, std::size_t N) {
    check_alpha(alpha, N);
    const double lo = 1.0 - alpha / static_cast<double>(N);
    return {lo, lo + alpha};
}

std::vector<double> normalize_weights(std::span<const double> logits, double alpha) {
    const auto N = logits.size();
    check_alpha(alpha, N);
    const double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> w(N);
    double z = 0.0;
    for (std::size_t i = 0; i < N; ++i) z += w[i] = std::exp(logits[i] - mx);
    const double lo = 1.0 - alpha / static_cast<double>(N);
    for (auto& v : w) v = alpha * (v / z) + lo;
    return w;
}

}  // namespace wrcast::wr
