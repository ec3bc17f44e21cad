#include "wrcast/core/windows.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/log.hpp"
#include "wrcast/core/random.hpp"

#include <algorithm>
#include <numeric>

namespace wrcast {

std::size_t admissible_anchor_count(std::size_t n, std::size_t T, std::size_t H) {
    return n >= T + H ? n - T - H + 1 : 0;
}

ForecastWindow window_at(const PanelDataset& ds, std::size_t series_index, std::size_t anchor, std::size_t T,
                         std::size_t H) {
    const auto& s = ds.series.at(series_index);
    const auto n = s.observed.size();
    if (anchor < T || anchor + H > n) throw DomainError("window anchor out of range");
    ForecastWindow w;
    w.series_index = series_index;
    w.anchor = anchor;
    const auto hb = static_cast<std::ptrdiff_t>(anchor - T);
    const auto fa = static_cast<std::ptrdiff_t>(anchor);
    const auto fe = static_cast<std::ptrdiff_t>(anchor + H);
    w.history.assign(s.observed.values.begin() + hb, s.observed.values.begin() + fa);
    w.history_dates.assign(s.observed.dates.begin() + hb, s.observed.dates.begin() + fa);
    w.history_covariates.assign(s.covariates.begin() + hb, s.covariates.begin() + fa);
    w.future_dates.assign(s.observed.dates.begin() + fa, s.observed.dates.begin() + fe);
    w.future_covariates.assign(s.covariates.begin() + fa, s.covariates.begin() + fe);
    w.target.assign(s.observed.values.begin() + fa, s.observed.values.begin() + fe);
    return w;
}

ForecastWindow forecast_window(const PanelDataset& ds, std::size_t series_index, std::size_t T, std::size_t H) {
    const auto& s = ds.series.at(series_index);
    const auto n = s.observed.size();
    if (n < T) throw DomainError("series " + s.observed.series_id + " is shorter than the history length");
    ForecastWindow w;
    w.series_index = series_index;
    w.anchor = n;
    const auto hb = static_cast<std::ptrdiff_t>(n - T);
    w.history.assign(s.observed.values.begin() + hb, s.observed.values.end());
    w.history_dates.assign(s.observed.dates.begin() + hb, s.observed.dates.end());
    w.history_covariates.assign(s.covariates.begin() + hb, s.covariates.end());
    for (std::size_t j = 0; j < H; ++j) {
        if (j < s.future_dates.size()) {
            w.future_dates.push_back(s.future_dates[j]);
            w.future_covariates.push_back(s.future_covariates[j]);
        } else {
            w.future_dates.push_back(s.observed.dates.back() + std::chrono::days{static_cast<int>(j + 1)});
            w.future_covariates.emplace_back();
        }
    }
    return w;
}

std::vector<ForecastWindow> make_windows(const PanelDataset& ds, std::size_t T, std::size_t H,
                                         std::size_t samples_per_series, std::uint64_t seed) {
    if (T == 0 || H == 0) throw DomainError("window history and horizon must be positive");
    std::vector<ForecastWindow> out;
    for (std::size_t si = 0; si < ds.series.size(); ++si) {
        const auto n = ds.series[si].observed.size();
        const auto count = admissible_anchor_count(n, T, H);
        if (count == 0) {
            warn("series " + ds.series[si].observed.series_id + " has " + std::to_string(n) +
                 " points, fewer than T+H; skipped");
            continue;
        }
        std::vector<std::size_t> anchors(count);
        std::iota(anchors.begin(), anchors.end(), T);
        const auto take = std::min(samples_per_series, count);
        Rng rng(mix_seed(seed, si));
        for (std::size_t i = 0; i < take; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.below(count - i));
            std::swap(anchors[i], anchors[j]);
        }
        anchors.resize(take);
        std::sort(anchors.begin(), anchors.end());
        for (auto a : anchors) out.push_back(window_at(ds, si, a, T, H));
    }
    return out;
}

}  // namespace wrcast
