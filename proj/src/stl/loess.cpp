#include "wrcast/stl/loess.hpp"

#include "wrcast/core/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wrcast::stl {

double tricube(double u) {
    if (u < 0.0 || u >= 1.0) return 0.0;
    const double t = 1.0 - u * u * u;
    return t * t * t;
}

double loess_at(std::span<const double> x, std::span<const double> y, double x0, const LoessConfig& cfg) {
    const auto n = x.size();
    if (n == 0 || y.size() != n) throw DomainError("loess: sample is empty or x/y lengths differ");
    if (cfg.degree < 0 || cfg.degree > 2) throw DomainError("loess: degree must be 0, 1 or 2");
    if (cfg.q < static_cast<std::size_t>(cfg.degree) + 1) throw DomainError("loess: q must be at least degree + 1");
    if (!cfg.robustness.empty() && cfg.robustness.size() != n)
        throw DomainError("loess: robustness weights do not match the sample size");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const auto k = std::min(cfg.q, n);
    auto closer = [&](std::size_t a, std::size_t b) {
        const double da = std::abs(x[a] - x0), db = std::abs(x[b] - x0);
        return da < db || (da == db && a < b);
    };
    if (k < n) std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k - 1), idx.end(), closer);
    idx.resize(k);
    double lambda = 0.0;
    for (auto i : idx) lambda = std::max(lambda, std::abs(x[i] - x0));
    if (cfg.q > n) lambda *= static_cast<double>(cfg.q) / static_cast<double>(n);

    std::vector<double> w(k), u(k), yy(k);
    std::size_t positive = 0;
    for (std::size_t j = 0; j < k; ++j) {
        const auto i = idx[j];
        const double dist = std::abs(x[i] - x0);
        const double delta = cfg.robustness.empty() ? 1.0 : cfg.robustness[i];
        if (delta < 0.0) throw DomainError("loess: robustness weights must be nonnegative");
        w[j] = lambda > 0.0 ? delta * tricube(dist / lambda) : delta;
        u[j] = lambda > 0.0 ? (x[i] - x0) / lambda : 0.0;
        yy[j] = y[i];
        if (w[j] > 0.0) ++positive;
    }
    if (positive == 0) throw DegenerateError("loess: all neighbour weights are zero");

    for (int deg = cfg.degree; deg >= 0; --deg) {
        const auto cols = static_cast<Eigen::Index>(deg + 1);
        Eigen::MatrixXd A(static_cast<Eigen::Index>(k), cols);
        Eigen::VectorXd b(static_cast<Eigen::Index>(k));
        for (std::size_t j = 0; j < k; ++j) {
            const double sw = std::sqrt(w[j]);
            double p = 1.0;
            for (Eigen::Index c = 0; c < cols; ++c) {
                A(static_cast<Eigen::Index>(j), c) = sw * p;
                p *= u[j];
            }
            b(static_cast<Eigen::Index>(j)) = sw * yy[j];
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        qr.setThreshold(1e-10);
        if (qr.rank() < cols) continue;
        const Eigen::VectorXd coef = qr.solve(b);
        return coef(0);
    }
    throw DegenerateError("loess: weighted design is singular");
}

double loess_at(std::span<const std::pair<double, double>> points, double x0, const LoessConfig& cfg) {
    std::vector<double> x, y;
    x.reserve(points.size());
    y.reserve(points.size());
    for (const auto& [a, b] : points) {
        x.push_back(a);
        y.push_back(b);
    }
    return loess_at(x, y, x0, cfg);
}

std::vector<double> loess_eval(std::span<const double> x, std::span<const double> y, std::span<const double> at,
                               const LoessConfig& cfg) {
    std::vector<double> out;
    out.reserve(at.size());
    for (double x0 : at) out.push_back(loess_at(x, y, x0, cfg));
    return out;
}

}  // namespace wrcast::stl
