#pragma once

#include "wrcast/core/panel.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace wrcast {

/// A training/evaluation sample: T observations before `anchor` and H after.
struct ForecastWindow {
    std::size_t series_index = 0;
    std::size_t anchor = 0;  // index into the observed series of the first forecast day
    std::vector<double> history;
    std::vector<Date> history_dates;
    std::vector<CovariateRow> history_covariates;
    std::vector<Date> future_dates;
    std::vector<CovariateRow> future_covariates;
    std::vector<double> target;  // empty when the window is a forecast request

    std::size_t history_length() const noexcept { return history.size(); }
    std::size_t horizon() const noexcept { return future_dates.size(); }
};

/// Number of anchors a with T <= a <= n - H.
std::size_t admissible_anchor_count(std::size_t series_length, std::size_t T, std::size_t H);

/// Draws up to `samples_per_series` anchors per series uniformly without
/// replacement. Series shorter than T + H are skipped with a warning.
/// Output is ordered by series, then anchor.
std::vector<ForecastWindow> make_windows(const PanelDataset& ds, std::size_t T, std::size_t H,
                                         std::size_t samples_per_series, std::uint64_t seed);

/// Builds the window anchored at `anchor` (target filled from observations).
ForecastWindow window_at(const PanelDataset& ds, std::size_t series_index, std::size_t anchor,
                         std::size_t T, std::size_t H);

/// Window whose future block is the series' forecast plan (or, when absent,
/// H calendar days after the last observation with empty covariates).
ForecastWindow forecast_window(const PanelDataset& ds, std::size_t series_index, std::size_t T,
                               std::size_t H);

}  // namespace wrcast
