#include "wrcast/classical/moving_average.hpp"

#include "wrcast/core/errors.hpp"

namespace wrcast::classical {

double ma_forecast(std::span<const double> history, std::size_t window) {
    if (window == 0 || window > history.size())
        throw DomainError("moving-average window must be in [1, history length]");
    double sum = 0.0;
    for (std::size_t j = 1; j <= window; ++j) sum += history[history.size() - j];
    return sum / static_cast<double>(window);
}

double wma_forecast(std::span<const double> history, std::size_t window, WmaScaling scaling) {
    if (window < 2) throw DomainError("weighted moving-average window must be at least 2");
    if (window > history.size()) throw DomainError("weighted moving-average window exceeds history length");
    const auto T = static_cast<double>(window);
    double acc = 0.0, wsum = 0.0;
    for (std::size_t j = 1; j <= window; ++j) {
        const double w = T - static_cast<double>(j) + 1.0;
        acc += w * history[history.size() - j];
        wsum += w;
    }
    if (scaling == WmaScaling::AsPublished) return 2.0 * acc / (T * T * (T - 1.0));
    return acc / wsum;
}

}  // namespace wrcast::classical
