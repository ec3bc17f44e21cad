#include "wrcast/theory/conjecture.hpp"

#include "wrcast/core/csv.hpp"
#include "wrcast/core/errors.hpp"
#include "wrcast/core/random.hpp"
#include "wrcast/theory/constrained.hpp"
#include "wrcast/theory/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wrcast::theory {

std::vector<ConjectureRow> conjecture_monte_carlo(std::size_t N, std::size_t trials,
                                                  const std::vector<double>& alpha_grid, const NoiseSpec& noise,
                                                  std::uint64_t seed) {
    if (trials < 1000) throw DomainError("the Monte Carlo study needs at least 1000 trials");
    if (N < 2) throw DomainError("the Monte Carlo study needs at least two components");
    if (!noise.bias.empty() && noise.bias.size() != N) throw DomainError("bias vector does not match N");

    std::vector<ConjectureRow> rows;
    for (double a : alpha_grid) rows.push_back({a, 0.0, 0.0, 0.0});

    Rng rng(mix_seed(seed, 0xC0));
    std::vector<double> l(N), lh(N);
    std::size_t used = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t i = 0; i < N; ++i) {
            l[i] = rng.uniform(noise.truth_lo, noise.truth_hi);
            const double b = noise.bias.empty() ? 1.0 : noise.bias[i];
            lh[i] = l[i] * b * std::exp(noise.sigma * rng.normal());
        }
        if (std::all_of(lh.begin(), lh.end(), [&](double v) { return v == lh[0]; })) continue;
        ++used;
        const double y = std::accumulate(l.begin(), l.end(), 0.0);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto w = random_optimal_weights(y, lh, rows[k].alpha, mix_seed(seed, t * 131 + k));
            bool all = true;
            for (std::size_t i = 0; i < N; ++i) {
                const bool imp = strictly_improves(l[i], lh[i], w[i]);
                all = all && imp;
                rows[k].share_improved += imp;
                rows[k].mean_abs_deviation += std::abs(w[i] - 1.0);
            }
            rows[k].p_all_improve += all;
        }
    }
    for (auto& r : rows) {
        r.p_all_improve /= static_cast<double>(used);
        r.share_improved /= static_cast<double>(used * N);
        r.mean_abs_deviation /= static_cast<double>(used * N);
    }
    return rows;
}

void write_conjecture_csv(const std::vector<ConjectureRow>& rows, std::ostream& out) {
    out << "alpha,p_all_improve,share_improved,mean_abs_w_minus_1\n";
    for (const auto& r : rows)
        out << csv::format_number(r.alpha) << ',' << csv::format_number(r.p_all_improve) << ','
            << csv::format_number(r.share_improved) << ',' << csv::format_number(r.mean_abs_deviation) << '\n';
}

bool is_unimodal_interior(const std::vector<ConjectureRow>& rows, double tolerance) {
    if (rows.size() < 3) return false;
    std::size_t peak = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].p_all_improve > rows[peak].p_all_improve) peak = i;
    if (peak == 0 || peak == rows.size() - 1) return false;
    for (std::size_t i = 1; i <= peak; ++i)
        if (rows[i].p_all_improve < rows[i - 1].p_all_improve - tolerance) return false;
    for (std::size_t i = peak + 1; i < rows.size(); ++i)
        if (rows[i].p_all_improve > rows[i - 1].p_all_improve + tolerance) return false;
    return true;
}

double monte_carlo_tolerance(const std::vector<ConjectureRow>& rows, std::size_t trials) {
    double p = 0.0;
    for (const auto& r : rows) p = std::max(p, r.p_all_improve);
    return trials ? 2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
}

}  // namespace wrcast::theory
