#include "wrcast/classical/ets.hpp"

#include "wrcast/core/errors.hpp"

#include <limits>

namespace wrcast::classical {

namespace {

void check(std::span<const double> series, std::size_t m, const EtsParams& p) {
    if (m == 0) throw DomainError("ETS season length must be positive");
    if (series.size() < 2 * m) throw DomainError("ETS needs at least two full seasons of history");
    for (double v : {p.alpha, p.beta, p.gamma})
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("ETS smoothing parameters must lie in [0, 1]");
}

// State at the end of the first season, built from the first two seasonal means.
EtsState initial_state(std::span<const double> y, std::size_t m, const EtsParams& p) {
    double mean1 = 0.0, mean2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mean1 += y[i];
        mean2 += y[m + i];
    }
    mean1 /= static_cast<double>(m);
    mean2 /= static_cast<double>(m);
    const double slope = (mean2 - mean1) / static_cast<double>(m);
    const double centre = (static_cast<double>(m) - 1.0) / 2.0;
    EtsState s;
    s.params = p;
    s.m = m;
    s.trend = slope;
    s.level = mean1 + centre * slope;
    s.seasonal.resize(m);
    for (std::size_t i = 0; i < m; ++i) s.seasonal[i] = y[i] - (mean1 + (static_cast<double>(i) - centre) * slope);
    return s;
}

// One recursion step; returns the one-step forecast made before seeing y.
double step(EtsState& s, double y) {
    const auto& p = s.params;
    const double s_old = s.seasonal.front();  // s_{t-m}
    const double forecast = s.level + s.trend + s_old;
    const double level = p.alpha * (y - s_old) + (1.0 - p.alpha) * (s.level + s.trend);
    const double trend = p.beta * (level - s.level) + (1.0 - p.beta) * s.trend;
    const double season = p.gamma * (y - s.level - s.trend) + (1.0 - p.gamma) * s_old;
    s.level = level;
    s.trend = trend;
    s.seasonal.erase(s.seasonal.begin());
    s.seasonal.push_back(season);
    return forecast;
}

}  // namespace

EtsState ets_fit(std::span<const double> series, std::size_t m, const EtsParams& params) {
    check(series, m, params);
    auto s = initial_state(series, m, params);
    for (std::size_t t = m; t < series.size(); ++t) step(s, series[t]);
    return s;
}

std::vector<double> ets_forecast(const EtsState& state, std::size_t horizon) {
    std::vector<double> out(horizon);
    for (std::size_t h = 1; h <= horizon; ++h)
        out[h - 1] = state.level + static_cast<double>(h) * state.trend + state.seasonal[(h - 1) % state.m];
    return out;
}

std::vector<double> ets_fit_forecast(std::span<const double> series, std::size_t m, const EtsParams& params,
                                     std::size_t horizon) {
    return ets_forecast(ets_fit(series, m, params), horizon);
}

double ets_one_step_sse(std::span<const double> series, std::size_t m, const EtsParams& params) {
    check(series, m, params);
    auto s = initial_state(series, m, params);
    double sse = 0.0;
    for (std::size_t t = m; t < series.size(); ++t) {
        const double e = series[t] - step(s, series[t]);
        sse += e * e;
    }
    return sse;
}

EtsParams ets_select_params(std::span<const double> series, std::size_t m) {
    EtsParams best{};
    double best_sse = std::numeric_limits<double>::infinity();
    for (int a = 1; a <= 9; ++a)
        for (int b = 1; b <= 9; ++b)
            for (int g = 1; g <= 9; ++g) {
                const EtsParams p{a / 10.0, b / 10.0, g / 10.0};
                const double sse = ets_one_step_sse(series, m, p);
                if (sse < best_sse) {
                    best_sse = sse;
                    best = p;
                }
            }
    return best;
}

}  // namespace wrcast::classical
