#pragma once

#include "wrcast/wr/combiner.hpp"

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace wrcast::wr {

/// Equal-width histogram; a single degenerate bin [v, v] when all values agree.
struct Histogram {
    std::vector<double> edges;  // bins + 1
    std::vector<std::size_t> counts;
};

Histogram make_histogram(std::span<const double> values, std::size_t bins);

struct DistributionSummary {
    std::string name;
    Histogram histogram;
    double mean = 0.0;
    double share_below_one = 0.0;
    double share_above_one = 0.0;
    std::size_t count = 0;
};

struct WeightReport {
    std::vector<DistributionSummary> weights;  // one per component
    DistributionSummary residual;
};

/// Pools every (window, horizon) weight per component plus all residuals.
/// Throws DomainError on an empty set or inconsistent component counts.
WeightReport report_weight_distributions(std::span<const WrOutput> outputs, std::span<const std::string> names,
                                         std::size_t bins = 20);

/// Rows `series,bin_lo,bin_hi,count` for every histogram.
void write_histograms_csv(const WeightReport& report, std::ostream& out);
/// Rows `series,count,mean,share_below_1,share_above_1`.
void write_summary_csv(const WeightReport& report, std::ostream& out);

}  // namespace wrcast::wr
