#pragma once

#include "wrcast/bench/experiments.hpp"

#include <filesystem>
#include <vector>

namespace wrcast::bench {

inline constexpr const char* kElectricityUrl =
    "https://archive.ics.uci.edu/dataset/321/electricityloaddiagrams20112014";

struct ElectricityConfig {
    std::filesystem::path data_path;
    std::size_t clients = 10;
    std::vector<Date> anchors{make_date(2014, 6, 1), make_date(2014, 7, 1), make_date(2014, 8, 1)};
    std::size_t period = 12;  // STL n_p
    std::size_t train_windows_per_series = 40;
    BenchConfig bench = [] {
        BenchConfig b;
        b.T = 60;
        b.H = 30;
        b.seeds = 3;
        b.alphas = {0.0, 0.5, 1.0, 1.5, 2.0};
        return b;
    }();
};

/// STL trend and seasonal components of each window, projected over its horizon.
wr::ComponentMatrix stl_components(const ForecastWindow& window, std::size_t period);

/// Train windows end before the first anchor; test windows start at each anchor.
/// Clients with zero readings in the last year before the final anchor are skipped.
ExperimentData electricity_data(const PanelDataset& daily, const ElectricityConfig& cfg, std::uint64_t seed);

struct ElectricityResult {
    ExperimentResult comparison;  // "additive" is the STL sum
    ExperimentResult sweep;
};

/// Throws DataError naming the download location when the file is missing.
ElectricityResult run_public_electricity(const ElectricityConfig& cfg);

}  // namespace wrcast::bench
