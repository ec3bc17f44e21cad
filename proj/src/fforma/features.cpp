#include "wrcast/fforma/features.hpp"

#include "wrcast/stl/stl.hpp"

#include <cmath>
#include <numeric>

namespace wrcast::fforma {

namespace {

double mean_of(std::span<const double> x) {
    return x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance_of(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean_of(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

double autocorrelation(std::span<const double> x, std::size_t lag) {
    const auto n = x.size();
    if (lag == 0) return 1.0;
    if (n <= lag + 1) return 0.0;
    const double m = mean_of(x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) den += (x[i] - m) * (x[i] - m);
    if (den <= 1e-12 * std::max(1.0, m * m) * static_cast<double>(n)) return 0.0;
    for (std::size_t i = lag; i < n; ++i) num += (x[i] - m) * (x[i - lag] - m);
    return num / den;
}

MetaFeatures meta_features(std::span<const double> x) {
    MetaFeatures f{};
    const auto n = x.size();
    f[0] = static_cast<double>(n);
    if (n == 0) return f;
    const double m = mean_of(x);
    const double sd = std::sqrt(variance_of(x));
    f[1] = m;
    f[2] = sd;
    f[3] = autocorrelation(x, 1);
    f[4] = autocorrelation(x, 7);
    if (n >= 14 && sd > 0.0) {
        stl::StlConfig cfg;
        cfg.period = 7;
        const auto d = stl::stl_decompose(x, cfg);
        std::vector<double> tr(n), sr(n);
        for (std::size_t i = 0; i < n; ++i) {
            tr[i] = d.trend[i] + d.remainder[i];
            sr[i] = d.seasonal[i] + d.remainder[i];
        }
        const double vr = variance_of(d.remainder);
        const double vt = variance_of(tr), vs = variance_of(sr);
        f[5] = vt > 0.0 ? std::max(0.0, 1.0 - vr / vt) : 0.0;
        f[6] = vs > 0.0 ? std::max(0.0, 1.0 - vr / vs) : 0.0;
    }
    if (sd > 0.0 && n >= 3) {
        double s3 = 0.0;
        for (double v : x) s3 += std::pow((v - m) / sd, 3);
        f[7] = s3 / static_cast<double>(n);
    }
    f[8] = std::abs(m) > 0.0 ? sd / std::abs(m) : 0.0;
    for (auto& v : f) v = finite_or_zero(v);
    return f;
}

}  // namespace wrcast::fforma
