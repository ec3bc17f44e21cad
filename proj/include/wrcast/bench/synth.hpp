#pragma once

#include "wrcast/core/panel.hpp"
#include "wrcast/core/windows.hpp"
#include "wrcast/wr/combiner.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wrcast::bench {

/// Multiplicative bias and lognormal noise applied to each true component.
struct PerturbSpec {
    std::vector<double> bias{1.2, 0.8, 1.0};
    std::vector<double> sigma{0.05, 0.05, 0.05};
};

struct SynthSpec {
    std::size_t n_series = 50;
    std::size_t length = 400;
    std::uint64_t seed = 0;
    Date start = make_date(2020, 1, 1);
    // Baseline: level * (1 + weekly sin) + AR(1) deviation.
    double level = 100.0;
    double level_spread = 0.5;  // per-series level factor uniform in [1 - s, 1 + s]
    double weekly_amplitude = 0.15;
    double phi = 0.7;
    double baseline_sigma = 4.0;
    // Promotions: price = reference * (1 - discount).
    double promo_frequency = 0.08;
    double discount_lo = 0.1;
    double discount_hi = 0.4;
    double theta = -2.0;
    // Festivals: level -> (true beta, period in days, offset).
    std::map<std::string, double> festival_beta{{"S", 0.8}, {"A", 0.4}};
    std::size_t festival_period = 60;
    double noise_sigma = 3.0;
    PerturbSpec perturb{};
};

inline const std::vector<std::string> kComponentNames{"baseline", "promotion", "festival"};

/// Generated panel and its known components (per series, per day).
struct SynthPanel {
    PanelDataset panel;
    std::vector<std::vector<double>> baseline;
    std::vector<std::vector<double>> promotion;
    std::vector<std::vector<double>> festival;
    std::size_t clip_count = 0;  // observations clipped at 0
};

/// y = baseline + promotion uplift + festival uplift + noise, clipped at 0.
/// Deterministic in spec.seed. Throws ConfigError for invalid specs.
SynthPanel generate_panel(const SynthSpec& spec);

/// True components over the window's forecast block.
wr::ComponentMatrix true_components(const SynthPanel& synth, const ForecastWindow& window);

/// l_hat = truth * bias_i * exp(sigma_i z). Throws ConfigError when the spec
/// length differs from the component count.
wr::ComponentMatrix perturb_components(const wr::ComponentMatrix& truth, const PerturbSpec& spec, std::uint64_t seed);

}  // namespace wrcast::bench
