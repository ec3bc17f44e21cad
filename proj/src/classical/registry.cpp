#include "wrcast/classical/registry.hpp"

#include "wrcast/classical/ets.hpp"
#include "wrcast/classical/moving_average.hpp"
#include "wrcast/core/errors.hpp"

namespace wrcast::classical {

CandidateMethod make_method(const std::string& name, const ClassicalConfig& cfg) {
    if (name == "ma")
        return {name, [w = cfg.ma_window](std::span<const double> y, std::size_t h) {
                    return std::vector<double>(h, ma_forecast(y, w));
                }};
    if (name == "wma")
        return {name, [w = cfg.wma_window](std::span<const double> y, std::size_t h) {
                    return std::vector<double>(h, wma_forecast(y, w));
                }};
    if (name == "ets")
        return {name, [m = cfg.season](std::span<const double> y, std::size_t h) {
                    return ets_fit_forecast(y, m, ets_select_params(y, m), h);
                }};
    if (name == "arima")
        return {name, [spec = cfg.arima](std::span<const double> y, std::size_t h) {
                    return arima_forecast(arima_fit(y, spec), y, h);
                }};
    throw ConfigError("unknown forecasting method '" + name + "'");
}

std::vector<CandidateMethod> default_registry(const ClassicalConfig& cfg) {
    return {make_method("ma", cfg), make_method("wma", cfg), make_method("ets", cfg), make_method("arima", cfg)};
}

}  // namespace wrcast::classical
