#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

namespace wrcast::theory {

/// True components are uniform on [truth_lo, truth_hi]; estimates are
/// l_i * bias_i * exp(sigma * z_i) with z standard normal.
struct NoiseSpec {
    double truth_lo = 1.0;
    double truth_hi = 10.0;
    std::vector<double> bias;  // per component; empty means all 1
    double sigma = 0.2;
};

struct ConjectureRow {
    double alpha = 0.0;
    double p_all_improve = 0.0;       // share of trials where every component's error shrinks
    double share_improved = 0.0;      // share of (trial, component) pairs that improve
    double mean_abs_deviation = 0.0;  // mean |w - 1|
};

/// For each alpha, draws `trials` instances (same draws for every alpha) and
/// a random member of the constrained optimal weight set. Throws DomainError
/// when trials < 1000.
std::vector<ConjectureRow> conjecture_monte_carlo(std::size_t N, std::size_t trials,
                                                  const std::vector<double>& alpha_grid, const NoiseSpec& noise,
                                                  std::uint64_t seed);

void write_conjecture_csv(const std::vector<ConjectureRow>& rows, std::ostream& out);

/// Rises to an interior maximum and then does not rise again; steps smaller
/// than `tolerance` in the wrong direction are ignored (Monte Carlo noise).
bool is_unimodal_interior(const std::vector<ConjectureRow>& rows, double tolerance = 0.0);

/// Two binomial standard errors at the curve's peak for `trials` draws.
double monte_carlo_tolerance(const std::vector<ConjectureRow>& rows, std::size_t trials);

}  // namespace wrcast::theory
