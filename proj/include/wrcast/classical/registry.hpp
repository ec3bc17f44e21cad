#pragma once

#include "wrcast/classical/arima.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wrcast::classical {

using ForecastFn = std::function<std::vector<double>(std::span<const double> history, std::size_t horizon)>;

/// A named point forecaster. Names are stable: `ma`, `wma`, `ets`, `arima`.
struct CandidateMethod {
    std::string name;
    ForecastFn forecast;
};

struct ClassicalConfig {
    std::size_t ma_window = 7;
    std::size_t wma_window = 7;
    std::size_t season = 7;
    ArimaSpec arima{};
};

std::vector<CandidateMethod> default_registry(const ClassicalConfig& cfg = {});

/// Looks up one method by name; throws ConfigError for unknown names.
CandidateMethod make_method(const std::string& name, const ClassicalConfig& cfg = {});

}  // namespace wrcast::classical
