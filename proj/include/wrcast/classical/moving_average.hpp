#pragma once

#include <cstddef>
#include <span>

namespace wrcast::classical {

/// Mean of the last `window` values.
double ma_forecast(std::span<const double> history, std::size_t window);

enum class WmaScaling {
    Normalized,   // weights (window - j + 1) on lag j, divided by their sum
    AsPublished,  // 2 * sum((T - j + 1) * y_{t-j}) / (T^2 (T - 1)); weights do not sum to 1
};

/// Recency-weighted mean over the last `window` values (window >= 2).
double wma_forecast(std::span<const double> history, std::size_t window,
                    WmaScaling scaling = WmaScaling::Normalized);

}  // namespace wrcast::classical
