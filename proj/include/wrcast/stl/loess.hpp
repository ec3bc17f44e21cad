#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace wrcast::stl {

struct LoessConfig {
    std::size_t q = 3;               // neighbour count, q >= degree + 1
    int degree = 1;                  // 0, 1 or 2
    std::vector<double> robustness;  // optional per-point weights >= 0, same length as the sample
};

/// Tricube W(u) = (1 - u^3)^3 for 0 <= u < 1, else 0.
double tricube(double u);

/// Local polynomial fit at `x0` over the q nearest points, weighted by
/// robustness * W(|x_i - x0| / lambda). lambda is the largest neighbour
/// distance, scaled by q/n when q exceeds the sample size. When fewer than
/// degree+1 distinct points carry weight, the degree is lowered until the
/// weighted design has full rank. Throws DegenerateError if every weight is 0.
double loess_at(std::span<const double> x, std::span<const double> y, double x0, const LoessConfig& cfg);

double loess_at(std::span<const std::pair<double, double>> points, double x0, const LoessConfig& cfg);

/// Evaluates the fit at several locations.
std::vector<double> loess_eval(std::span<const double> x, std::span<const double> y, std::span<const double> at,
                               const LoessConfig& cfg);

}  // namespace wrcast::stl
