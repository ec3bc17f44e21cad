#include "wrcast/theory/constrained.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/random.hpp"
#include "wrcast/wr/weights.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wrcast::theory {

ReachableSpan reachable_span(std::span<const double> l_hat, double alpha) {
    const auto [lo_w, hi_w] = wr::weight_interval(alpha, l_hat.size());
    (void)hi_w;
    const double base = lo_w * std::accumulate(l_hat.begin(), l_hat.end(), 0.0);
    const auto [mn, mx] = std::minmax_element(l_hat.begin(), l_hat.end());
    return {base + alpha * *mn, base + alpha * *mx};
}

std::vector<double> constrained_optimal_weights(double y, std::span<const double> l_hat, double alpha) {
    const auto N = l_hat.size();
    wr::check_alpha(alpha, N);
    const auto [mn, mx] = std::minmax_element(l_hat.begin(), l_hat.end());
    if (*mn == *mx) throw DomainError("constrained weights need estimates that are not all equal");

    const double sum = std::accumulate(l_hat.begin(), l_hat.end(), 0.0);
    std::vector<double> w(N, 1.0);
    if (y == sum || alpha == 0.0) return w;

    const double lo = 1.0 - alpha / static_cast<double>(N);
    const auto k = static_cast<std::size_t>((y > sum ? mx : mn) - l_hat.begin());
    std::vector<double> v(N, lo);
    v[k] = lo + alpha;
    double sv = 0.0;
    for (std::size_t i = 0; i < N; ++i) sv += v[i] * l_hat[i];
    const double t = std::clamp((y - sum) / (sv - sum), 0.0, 1.0);
    for (std::size_t i = 0; i < N; ++i) w[i] = 1.0 + t * (v[i] - 1.0);
    return w;
}

std::vector<double> random_optimal_weights(double y, std::span<const double> l_hat, double alpha, std::uint64_t seed,
                                           int steps) {
    const auto N = l_hat.size();
    auto w = constrained_optimal_weights(y, l_hat, alpha);
    if (alpha == 0.0 || N < 3) return w;
    const double lo = 1.0 - alpha / static_cast<double>(N), hi = lo + alpha;

    // Directions keeping both equality constraints: null space of [1; l_hat].
    Eigen::MatrixXd A(2, static_cast<Eigen::Index>(N));
    for (std::size_t i = 0; i < N; ++i) {
        A(0, static_cast<Eigen::Index>(i)) = 1.0;
        A(1, static_cast<Eigen::Index>(i)) = l_hat[i];
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::MatrixXd Z = lu.kernel();
    if (Z.cols() == 0 || Z.norm() == 0.0) return w;

    Rng rng(seed);
    Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(N));
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXd z(Z.cols());
        for (Eigen::Index c = 0; c < z.size(); ++c) z(c) = rng.normal();
        Eigen::VectorXd d = Z * z;
        const double norm = d.norm();
        if (norm == 0.0) continue;
        d /= norm;
        double tmin = -std::numeric_limits<double>::infinity(), tmax = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            if (std::abs(d(i)) < 1e-15) continue;
            const double a = (lo - x(i)) / d(i), b = (hi - x(i)) / d(i);
            tmin = std::max(tmin, std::min(a, b));
            tmax = std::min(tmax, std::max(a, b));
        }
        if (!(tmax > tmin)) continue;
        x += rng.uniform(tmin, tmax) * d;
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = std::clamp(x(i), lo, hi);
    }
    return {x.data(), x.data() + x.size()};
}

}  // namespace wrcast::theory
