#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wrcast::classical {

/// Smoothing weights of additive Holt-Winters, each in [0, 1].
struct EtsParams {
    double alpha = 0.5;  // level
    double beta = 0.1;   // trend
    double gamma = 0.1;  // seasonal
};

/// Filter state after the last observation.
struct EtsState {
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> seasonal;  // s_{t-m+1} .. s_t, oldest first
    EtsParams params;
    std::size_t m = 1;
};

/// Runs the level/trend/seasonal recursions over `series` (length >= 2m).
/// The first season initialises the state: level and trend from the first two
/// seasonal means, seasonal offsets from the first season after removing that line.
EtsState ets_fit(std::span<const double> series, std::size_t m, const EtsParams& params);

/// yhat_{t+h|t} = l_t + h b_t + s_{t+h-m*floor((h-1)/m+1)} for h = 1..horizon.
std::vector<double> ets_forecast(const EtsState& state, std::size_t horizon);

std::vector<double> ets_fit_forecast(std::span<const double> series, std::size_t m, const EtsParams& params,
                                     std::size_t horizon);

/// In-sample one-step-ahead sum of squared errors.
double ets_one_step_sse(std::span<const double> series, std::size_t m, const EtsParams& params);

/// Grid search over {0.1, ..., 0.9}^3 minimising the one-step SSE. Ties keep the first grid point.
EtsParams ets_select_params(std::span<const double> series, std::size_t m);

}  // namespace wrcast::classical
