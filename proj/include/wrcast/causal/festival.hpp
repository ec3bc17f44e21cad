#pragma once

#include "wrcast/core/panel.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace wrcast::causal {

/// One past festival day: realised sales and the baseline forecast for it.
struct FestivalObservation {
    std::string level;
    double actual = 0.0;
    double baseline = 0.0;
};

struct FestivalFactor {
    std::map<std::string, double> beta;
    std::map<std::string, std::size_t> source_count;

    /// 0 with a warning for levels without history.
    double beta_for(const std::string& level) const;
};

/// beta(level) = mean over past festivals of (actual - baseline) / baseline.
/// Levels listed in `levels` without any observation get beta = 0 and a
/// warning. Throws DomainError for a nonpositive baseline and DataError when
/// a level's beta is <= -1.
FestivalFactor festival_factor_fit(std::span<const FestivalObservation> history,
                                   std::span<const std::string> levels = {});

/// beta * baseline on festival dates of the calendar, 0 elsewhere.
std::vector<double> festival_component(const FestivalFactor& factor, std::span<const double> baseline,
                                       std::span<const CovariateRow> calendar);

}  // namespace wrcast::causal
