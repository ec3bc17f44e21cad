#pragma once

#include "wrcast/causal/dml.hpp"
#include "wrcast/core/random.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace wrcast::testing {

// Partially linear design: Y = theta_k * Tr + g(W) + e, Tr = m(W) + v.
// Rows alternate between the categories; theta.size() categories.
inline causal::DmlData partially_linear(std::size_t rows, const std::vector<double>& theta, std::uint64_t seed,
                                        bool null_design = false) {
    Rng rng(seed);
    causal::DmlData d;
    const std::size_t K = theta.size();
    for (std::size_t k = 0; k < K; ++k) d.categories.push_back(k == 0 ? "none" : "arm" + std::to_string(k));
    d.X = gbdt::Matrix(rows, K);
    d.W = gbdt::Matrix(rows, 3);
    for (std::size_t i = 0; i < rows; ++i) {
        const double w0 = rng.uniform(-2, 2), w1 = rng.uniform(0, 1), w2 = rng.uniform(-1, 1);
        d.W(i, 0) = w0, d.W(i, 1) = w1, d.W(i, 2) = w2;
        const std::size_t k = i % K;
        d.X(i, k) = 1.0;
        const double tr = 0.3 * std::sin(w0) + 0.4 * w1 + 0.2 * rng.normal();
        const double g = 0.5 * w0 * w0 + std::cos(2 * w2) + 3.0;
        const double y = null_design ? g + 0.2 * rng.normal() : theta[k] * tr + g + 0.1 * rng.normal();
        d.Tr.push_back(tr);
        d.Y.push_back(y);
    }
    return d;
}

}  // namespace wrcast::testing
