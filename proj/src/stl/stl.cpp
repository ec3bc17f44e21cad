#include "wrcast/stl/stl.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/stl/loess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wrcast::stl {

namespace {

std::size_t make_odd(std::size_t v) { return v % 2 ? v : v + 1; }

std::vector<double> moving_average(std::span<const double> x, std::size_t len) {
    std::vector<double> out;
    if (x.size() < len) return out;
    out.reserve(x.size() - len + 1);
    double sum = std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(len), 0.0);
    out.push_back(sum / static_cast<double>(len));
    for (std::size_t i = len; i < x.size(); ++i) {
        sum += x[i] - x[i - len];
        out.push_back(sum / static_cast<double>(len));
    }
    return out;
}

double median(std::vector<double> v) {
    const auto n = v.size();
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2), v.end());
    const double hi = v[n / 2];
    if (n % 2) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2));
    return 0.5 * (lo + hi);
}

double biweight(double u) {
    if (u < 0.0 || u >= 1.0) return 0.0;
    const double t = 1.0 - u * u;
    return t * t;
}

}  // namespace

std::size_t resolve_span(std::size_t span, int degree) {
    const std::size_t minimal = make_odd(static_cast<std::size_t>(degree) + 2);
    if (span == 0) throw DomainError("STL spans must be positive");
    if (span < minimal) return make_odd(span * minimal);
    return make_odd(span);
}

StlResult stl_decompose(std::span<const double> y, const StlConfig& cfg) {
    const auto n = y.size();
    const auto np = cfg.period;
    if (np < 2) throw DomainError("STL period must be at least 2");
    if (n < 2 * np) throw DomainError("STL needs at least two full periods");
    for (double v : y)
        if (!std::isfinite(v)) throw DomainError("STL input must be finite");

    const auto ns = resolve_span(cfg.seasonal);
    const auto nl = resolve_span(cfg.low_pass ? cfg.low_pass : np);
    std::size_t nt = cfg.trend;
    if (nt == 0) {
        const double v = 1.5 * static_cast<double>(np) / (1.0 - 1.5 / static_cast<double>(ns));
        nt = static_cast<std::size_t>(std::ceil(v));
    }
    nt = resolve_span(nt);

    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    const double eps = cfg.tolerance * std::max(scale, 1e-300);

    StlResult r;
    r.trend.assign(n, 0.0);
    r.seasonal.assign(n, 0.0);
    r.robustness_weights.assign(n, 1.0);

    std::vector<double> times(n);
    std::iota(times.begin(), times.end(), 0.0);
    std::vector<double> cycle(n + 2 * np), detrended(n), deseasoned(n);

    const std::size_t outer = std::max<std::size_t>(cfg.outer_iterations, 1);
    const std::size_t inner = std::max<std::size_t>(cfg.inner_iterations, 1);
    for (std::size_t o = 0; o < outer; ++o) {
        const auto prev_trend_outer = r.trend;
        const auto prev_seasonal_outer = r.seasonal;
        for (std::size_t k = 0; k < inner; ++k) {
            ++r.inner_iterations_used;
            for (std::size_t t = 0; t < n; ++t) detrended[t] = y[t] - r.trend[t];

            // Cycle-subseries smoothing, extended one period at each end.
            for (std::size_t phase = 0; phase < np; ++phase) {
                std::vector<double> sx, sy, sw;
                for (std::size_t t = phase; t < n; t += np) {
                    sx.push_back(static_cast<double>(sx.size()));
                    sy.push_back(detrended[t]);
                    sw.push_back(r.robustness_weights[t]);
                }
                const LoessConfig lc{ns, 1, sw};
                const auto len = static_cast<long>(sx.size());
                for (long j = -1; j <= len; ++j) {
                    const long time = static_cast<long>(phase) + j * static_cast<long>(np);
                    cycle[static_cast<std::size_t>(time + static_cast<long>(np))] =
                        loess_at(sx, sy, static_cast<double>(j), lc);
                }
            }

            // Low-pass filter of the cycle series: MA(n_p), MA(3), loess(n_l).
            const auto ma1 = moving_average(cycle, np);
            const auto ma2 = moving_average(ma1, 3);
            std::vector<double> centres(ma2.size());
            for (std::size_t i = 0; i < ma2.size(); ++i)
                centres[i] = static_cast<double>(i) + 1.0 - (static_cast<double>(np) + 1.0) / 2.0;
            const auto low = loess_eval(centres, ma2, times, LoessConfig{nl, 1, {}});

            std::vector<double> seasonal(n);
            for (std::size_t t = 0; t < n; ++t) seasonal[t] = cycle[t + np] - low[t];
            for (std::size_t t = 0; t < n; ++t) deseasoned[t] = y[t] - seasonal[t];
            auto trend = loess_eval(times, deseasoned, times, LoessConfig{nt, 1, r.robustness_weights});

            double dt = 0.0, ds = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                dt = std::max(dt, std::abs(trend[t] - r.trend[t]));
                ds = std::max(ds, std::abs(seasonal[t] - r.seasonal[t]));
            }
            r.trend = std::move(trend);
            r.seasonal = std::move(seasonal);
            if (k > 0 && dt + ds <= eps) break;
        }
        ++r.outer_iterations_used;

        r.remainder.resize(n);
        std::vector<double> abs_rem(n);
        for (std::size_t t = 0; t < n; ++t) {
            r.remainder[t] = y[t] - r.trend[t] - r.seasonal[t];
            abs_rem[t] = std::abs(r.remainder[t]);
        }
        const double h = 6.0 * median(abs_rem);
        for (std::size_t t = 0; t < n; ++t)
            r.robustness_weights[t] = h > 0.0 ? biweight(abs_rem[t] / h) : (abs_rem[t] == 0.0 ? 1.0 : 0.0);

        if (o > 0) {
            double dt = 0.0, ds = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                dt = std::max(dt, std::abs(r.trend[t] - prev_trend_outer[t]));
                ds = std::max(ds, std::abs(r.seasonal[t] - prev_seasonal_outer[t]));
            }
            if (dt + ds <= eps) break;
        }
    }
    return r;
}

StlProjection stl_project(const StlResult& fit, std::size_t period, std::size_t horizon) {
    const auto n = fit.trend.size();
    if (n < 2 || period == 0 || n < period) throw DomainError("STL projection needs a fitted decomposition");
    const double slope = fit.trend[n - 1] - fit.trend[n - 2];
    StlProjection p;
    for (std::size_t h = 1; h <= horizon; ++h) {
        p.trend.push_back(fit.trend[n - 1] + static_cast<double>(h) * slope);
        p.seasonal.push_back(fit.seasonal[n - period + (h - 1) % period]);
    }
    return p;
}

}  // namespace wrcast::stl
