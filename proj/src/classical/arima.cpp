#include "wrcast/classical/arima.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/log.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wrcast::classical {

namespace {

constexpr double kBound = 0.99;

std::vector<int> difference_lags(const ArimaSpec& spec) {
    if (spec.p < 0 || spec.d < 0 || spec.q < 0 || spec.P < 0 || spec.D < 0 || spec.Q < 0 || spec.m < 0)
        throw DomainError("ARIMA orders must be nonnegative");
    std::vector<int> lags(static_cast<std::size_t>(spec.d), 1);
    if (spec.m > 0) lags.insert(lags.end(), static_cast<std::size_t>(spec.D), spec.m);
    return lags;
}

std::vector<double> difference(std::span<const double> x, int lag) {
    std::vector<double> out;
    const auto L = static_cast<std::size_t>(lag);
    if (x.size() <= L) return out;
    out.reserve(x.size() - L);
    for (std::size_t t = L; t < x.size(); ++t) out.push_back(x[t] - x[t - L]);
    return out;
}

// Parameter vector layout: [mu, phi_1..p, Phi_1..P, theta_1..q, Theta_1..Q].
struct Layout {
    int p, P, q, Q, m;
    std::size_t size() const { return static_cast<std::size_t>(1 + p + P + q + Q); }
    int phi(int i) const { return 1 + i; }
    int sphi(int j) const { return 1 + p + j; }
    int theta(int i) const { return 1 + p + P + i; }
    int stheta(int j) const { return 1 + p + P + q + j; }
    int ar_order() const { return p + m * P; }
    int ma_order() const { return q + m * Q; }
};

Layout layout_of(const ArimaSpec& s) {
    const int m = s.m > 0 ? s.m : 0;
    return {s.p, m > 0 ? s.P : 0, s.q, m > 0 ? s.Q : 0, m};
}

// Lag polynomial coefficients and their partial derivatives w.r.t. the parameters.
struct Expanded {
    std::vector<double> a, b;                    // a[k], b[k] for lag k (index 0 unused)
    std::vector<std::vector<double>> da, db;     // [lag][param]
};

Expanded expand(const Layout& L, std::span<const double> x) {
    const auto np = L.size();
    Expanded e;
    e.a.assign(static_cast<std::size_t>(L.ar_order()) + 1, 0.0);
    e.b.assign(static_cast<std::size_t>(L.ma_order()) + 1, 0.0);
    e.da.assign(e.a.size(), std::vector<double>(np, 0.0));
    e.db.assign(e.b.size(), std::vector<double>(np, 0.0));
    for (int i = 0; i < L.p; ++i) {
        e.a[i + 1] += x[L.phi(i)];
        e.da[i + 1][L.phi(i)] += 1.0;
    }
    for (int j = 0; j < L.P; ++j) {
        const int lag = L.m * (j + 1);
        e.a[lag] += x[L.sphi(j)];
        e.da[lag][L.sphi(j)] += 1.0;
        for (int i = 0; i < L.p; ++i) {
            e.a[lag + i + 1] -= x[L.phi(i)] * x[L.sphi(j)];
            e.da[lag + i + 1][L.phi(i)] -= x[L.sphi(j)];
            e.da[lag + i + 1][L.sphi(j)] -= x[L.phi(i)];
        }
    }
    for (int i = 0; i < L.q; ++i) {
        e.b[i + 1] += x[L.theta(i)];
        e.db[i + 1][L.theta(i)] += 1.0;
    }
    for (int j = 0; j < L.Q; ++j) {
        const int lag = L.m * (j + 1);
        e.b[lag] += x[L.stheta(j)];
        e.db[lag][L.stheta(j)] += 1.0;
        for (int i = 0; i < L.q; ++i) {
            e.b[lag + i + 1] += x[L.theta(i)] * x[L.stheta(j)];
            e.db[lag + i + 1][L.theta(i)] += x[L.stheta(j)];
            e.db[lag + i + 1][L.stheta(j)] += x[L.theta(i)];
        }
    }
    return e;
}

// One-step residuals conditioned on the first ar_order observations.
std::vector<double> residuals(std::span<const double> w, double mu, const Expanded& e) {
    const std::size_t K = e.a.size() - 1;
    std::vector<double> res(w.size(), 0.0);
    for (std::size_t t = K; t < w.size(); ++t) {
        double v = w[t] - mu;
        for (std::size_t k = 1; k < e.a.size(); ++k) v -= e.a[k] * w[t - k];
        for (std::size_t k = 1; k < e.b.size() && k <= t; ++k) v -= e.b[k] * res[t - k];
        res[t] = v;
    }
    return res;
}

// Mean squared residual and its gradient.
double loss_and_gradient(std::span<const double> w, const Layout& L, std::span<const double> x,
                         std::vector<double>* grad) {
    const auto e = expand(L, x);
    const std::size_t K = e.a.size() - 1;
    const auto n = w.size();
    const auto np = L.size();
    const double count = static_cast<double>(n - K);
    std::vector<double> res(n, 0.0);
    std::vector<std::vector<double>> dres;
    if (grad) {
        grad->assign(np, 0.0);
        dres.assign(n, std::vector<double>(np, 0.0));
    }
    double loss = 0.0;
    for (std::size_t t = K; t < n; ++t) {
        double v = w[t] - x[0];
        for (std::size_t k = 1; k < e.a.size(); ++k) v -= e.a[k] * w[t - k];
        for (std::size_t k = 1; k < e.b.size() && k <= t; ++k) v -= e.b[k] * res[t - k];
        res[t] = v;
        loss += v * v;
        if (grad) {
            auto& d = dres[t];
            d[0] = -1.0;
            for (std::size_t k = 1; k < e.a.size(); ++k)
                for (std::size_t j = 0; j < np; ++j) d[j] -= e.da[k][j] * w[t - k];
            for (std::size_t k = 1; k < e.b.size() && k <= t; ++k)
                for (std::size_t j = 0; j < np; ++j) d[j] -= e.db[k][j] * res[t - k] + e.b[k] * dres[t - k][j];
            for (std::size_t j = 0; j < np; ++j) (*grad)[j] += 2.0 * v * d[j];
        }
    }
    if (grad)
        for (auto& g : *grad) g /= count;
    return loss / count;
}

void warn_if_nonstationary(const Expanded& e) {
    const auto K = static_cast<Eigen::Index>(e.a.size()) - 1;
    if (K == 0) return;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(K, K);
    for (Eigen::Index k = 0; k < K; ++k) companion(0, k) = e.a[static_cast<std::size_t>(k) + 1];
    for (Eigen::Index k = 1; k < K; ++k) companion(k, k - 1) = 1.0;
    const Eigen::VectorXcd eig = companion.eigenvalues();
    for (Eigen::Index i = 0; i < eig.size(); ++i)
        if (std::abs(eig[i]) >= 1.0) {
            warn("fitted ARIMA AR polynomial has a root on or inside the unit circle (non-stationary)");
            return;
        }
}

}  // namespace

std::vector<double> arima_difference(std::span<const double> series, const ArimaSpec& spec) {
    std::vector<double> w(series.begin(), series.end());
    for (int lag : difference_lags(spec)) w = difference(w, lag);
    return w;
}

double arima_css(std::span<const double> differenced, const ArimaSpec& spec) {
    const auto L = layout_of(spec);
    std::vector<double> x(L.size(), 0.0);
    x[0] = spec.mu;
    for (int i = 0; i < L.p; ++i) x[L.phi(i)] = spec.phi.at(i);
    for (int j = 0; j < L.P; ++j) x[L.sphi(j)] = spec.seasonal_phi.at(j);
    for (int i = 0; i < L.q; ++i) x[L.theta(i)] = spec.theta.at(i);
    for (int j = 0; j < L.Q; ++j) x[L.stheta(j)] = spec.seasonal_theta.at(j);
    if (differenced.size() <= static_cast<std::size_t>(L.ar_order()))
        throw DomainError("ARIMA: not enough observations for the AR order");
    return loss_and_gradient(differenced, L, x, nullptr);
}

ArimaSpec arima_fit(std::span<const double> series, ArimaSpec spec, const ArimaFitOptions& opts) {
    const auto L = layout_of(spec);
    const auto w = arima_difference(series, spec);
    const auto need = static_cast<std::size_t>(std::max(L.ar_order(), L.ma_order())) + 1;
    if (w.size() < need || w.size() <= static_cast<std::size_t>(L.ar_order()))
        throw DomainError("ARIMA: differencing leaves " + std::to_string(w.size()) + " observations, need " +
                          std::to_string(need));

    // Fit on the standardised differenced series; mu is mapped back afterwards.
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    double var = 0.0;
    for (double v : w) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(w.size()));
    const double scale = sd > 1e-12 * (1.0 + std::abs(mean)) ? sd : 1.0;
    std::vector<double> z(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) z[t] = (w[t] - mean) / scale;

    const auto np = L.size();
    std::vector<double> x(np, 0.0), g(np), x_new(np), g_new(np);
    double loss = loss_and_gradient(z, L, x, &g);
    spec.loss_history.assign(1, loss * scale * scale);
    double step = 0.1;
    bool converged = false;
    // Projected descent: coefficients stay in [-kBound, kBound], mu is free.
    auto project = [&](std::vector<double>& v) {
        for (std::size_t j = 1; j < np; ++j) v[j] = std::clamp(v[j], -kBound, kBound);
    };
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        double pg = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            const double moved = j == 0 ? x[j] - g[j] : std::clamp(x[j] - g[j], -kBound, kBound);
            pg = std::max(pg, std::abs(moved - x[j]));
        }
        if (pg < opts.gradient_tolerance) {
            converged = true;
            break;
        }
        // Armijo backtracking from the current (Barzilai-Borwein) trial step.
        double new_loss = loss;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t j = 0; j < np; ++j) x_new[j] = x[j] - step * g[j];
            project(x_new);
            double decrease = 0.0;
            for (std::size_t j = 0; j < np; ++j) decrease += g[j] * (x[j] - x_new[j]);
            new_loss = loss_and_gradient(z, L, x_new, &g_new);
            if (std::isfinite(new_loss) && new_loss <= loss - 1e-4 * decrease) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            converged = true;  // no descent possible at machine precision
            break;
        }
        double sy = 0.0, ss = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            const double s = x_new[j] - x[j];
            sy += s * (g_new[j] - g[j]);
            ss += s * s;
        }
        const bool stalled = loss - new_loss <= 1e-12 * (1.0 + loss);
        x.swap(x_new);
        g.swap(g_new);
        loss = new_loss;
        spec.loss_history.push_back(loss * scale * scale);
        if (stalled) {
            converged = true;
            break;
        }
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-6, 1e3) : std::min(step * 2.0, 1e3);
    }
    if (!converged)
        throw ConvergenceError("ARIMA CSS optimisation did not converge after " + std::to_string(opts.max_iterations) +
                                   " iterations",
                               loss * scale * scale);

    spec.phi.assign(static_cast<std::size_t>(L.p), 0.0);
    spec.seasonal_phi.assign(static_cast<std::size_t>(L.P), 0.0);
    spec.theta.assign(static_cast<std::size_t>(L.q), 0.0);
    spec.seasonal_theta.assign(static_cast<std::size_t>(L.Q), 0.0);
    for (int i = 0; i < L.p; ++i) spec.phi[i] = x[L.phi(i)];
    for (int j = 0; j < L.P; ++j) spec.seasonal_phi[j] = x[L.sphi(j)];
    for (int i = 0; i < L.q; ++i) spec.theta[i] = x[L.theta(i)];
    for (int j = 0; j < L.Q; ++j) spec.seasonal_theta[j] = x[L.stheta(j)];
    const auto e = expand(L, x);
    const double ar_sum = std::accumulate(e.a.begin(), e.a.end(), 0.0);
    spec.mu = mean * (1.0 - ar_sum) + scale * x[0];
    spec.sigma2 = loss * scale * scale;
    spec.fitted = true;
    warn_if_nonstationary(e);
    return spec;
}

std::vector<double> arima_forecast(const ArimaSpec& fitted, std::span<const double> series, std::size_t horizon) {
    if (!fitted.fitted) throw StateError("ARIMA forecast requires fitted coefficients");
    const auto L = layout_of(fitted);
    if (static_cast<int>(fitted.phi.size()) != L.p || static_cast<int>(fitted.theta.size()) != L.q ||
        static_cast<int>(fitted.seasonal_phi.size()) != L.P || static_cast<int>(fitted.seasonal_theta.size()) != L.Q)
        throw DomainError("ARIMA coefficient vectors do not match the orders");
    std::vector<double> x(L.size(), 0.0);
    x[0] = fitted.mu;
    for (int i = 0; i < L.p; ++i) x[L.phi(i)] = fitted.phi[i];
    for (int j = 0; j < L.P; ++j) x[L.sphi(j)] = fitted.seasonal_phi[j];
    for (int i = 0; i < L.q; ++i) x[L.theta(i)] = fitted.theta[i];
    for (int j = 0; j < L.Q; ++j) x[L.stheta(j)] = fitted.seasonal_theta[j];
    const auto e = expand(L, x);

    const auto lags = difference_lags(fitted);
    std::vector<std::vector<double>> stages{std::vector<double>(series.begin(), series.end())};
    for (int lag : lags) stages.push_back(difference(stages.back(), lag));
    auto w = stages.back();
    if (w.size() < e.a.size()) throw DomainError("ARIMA: series too short to forecast");
    auto res = residuals(w, fitted.mu, e);

    const auto n = w.size();
    for (std::size_t h = 0; h < horizon; ++h) {
        const auto t = n + h;
        double v = fitted.mu;
        for (std::size_t k = 1; k < e.a.size(); ++k) v += e.a[k] * w[t - k];
        for (std::size_t k = 1; k < e.b.size(); ++k)
            if (k <= t) v += e.b[k] * res[t - k];
        w.push_back(v);
        res.push_back(0.0);
    }
    std::vector<double> fc(w.end() - static_cast<std::ptrdiff_t>(horizon), w.end());
    for (std::size_t s = lags.size(); s-- > 0;) {
        auto level = stages[s];
        const auto lag = static_cast<std::size_t>(lags[s]);
        for (std::size_t h = 0; h < horizon; ++h) level.push_back(fc[h] + level[level.size() - lag]);
        fc.assign(level.end() - static_cast<std::ptrdiff_t>(horizon), level.end());
    }
    return fc;
}

}  // namespace wrcast::classical
