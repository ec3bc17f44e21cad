#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wrcast::stl {

/// Spans for the three smoothers. A value below the minimal admissible odd
/// window for a local-linear fit (3) is read as a multiple of that window, so
/// a span of 1 means the narrowest smoother.
struct StlConfig {
    std::size_t period = 12;     // n_p
    std::size_t seasonal = 7;    // n_s
    std::size_t trend = 0;       // n_t; 0 selects the usual default from n_p and n_s
    std::size_t low_pass = 0;    // n_l; 0 selects the smallest odd value >= n_p
    std::size_t inner_iterations = 2;
    std::size_t outer_iterations = 1;
    double tolerance = 1e-6;     // relative to the series scale
};

struct StlResult {
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> remainder;           // input - trend - seasonal
    std::vector<double> robustness_weights;  // after the last outer pass, in [0, 1]
    std::size_t inner_iterations_used = 0;
    std::size_t outer_iterations_used = 0;
};

/// Neighbour count used for a configured span (see StlConfig).
std::size_t resolve_span(std::size_t span, int degree = 1);

/// Seasonal-trend decomposition by loess. Requires at least two full periods.
StlResult stl_decompose(std::span<const double> series, const StlConfig& cfg);

/// Projects the decomposition `horizon` steps ahead: the trend continues with
/// its last fitted slope and the seasonal component repeats its last cycle.
struct StlProjection {
    std::vector<double> trend;
    std::vector<double> seasonal;
};
StlProjection stl_project(const StlResult& fit, std::size_t period, std::size_t horizon);

}  // namespace wrcast::stl
