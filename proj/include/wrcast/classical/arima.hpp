#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wrcast::classical {

/// ARIMA(p,d,q)(P,D,Q)_m. With m = 0 the seasonal part is disabled.
struct ArimaSpec {
    int p = 1, d = 1, q = 1;
    int P = 0, D = 1, Q = 1;
    int m = 7;

    // Filled by arima_fit.
    std::vector<double> phi;             // AR, lags 1..p
    std::vector<double> theta;           // MA, lags 1..q
    std::vector<double> seasonal_phi;    // lags m..Pm
    std::vector<double> seasonal_theta;  // lags m..Qm
    double mu = 0.0;                     // intercept of the differenced model
    bool fitted = false;
    std::vector<double> loss_history;    // CSS per optimizer iteration (mean squared residual)
    double sigma2 = 0.0;

    int seasonal_period() const noexcept { return m > 0 ? m : 0; }
};

struct ArimaFitOptions {
    std::size_t max_iterations = 10000;
    double gradient_tolerance = 1e-8;
};

/// Applies d lag-1 differences then D lag-m differences.
std::vector<double> arima_difference(std::span<const double> series, const ArimaSpec& spec);

/// Conditional-sum-of-squares loss (mean squared one-step residual) of the
/// differenced series under the spec's current coefficients.
double arima_css(std::span<const double> differenced, const ArimaSpec& spec);

/// Estimates mu, phi, theta (and seasonal terms) by minimising the CSS with
/// projected gradient descent on analytic gradients; every AR/MA coefficient
/// is kept in [-0.99, 0.99]. Throws ConvergenceError on iteration exhaustion
/// and DomainError when too few observations remain.
ArimaSpec arima_fit(std::span<const double> series, ArimaSpec spec, const ArimaFitOptions& opts = {});

/// Iterates the one-step recursion with future shocks at zero and integrates
/// the forecast back through the seasonal and regular differences.
std::vector<double> arima_forecast(const ArimaSpec& fitted, std::span<const double> series, std::size_t horizon);

}  // namespace wrcast::classical
