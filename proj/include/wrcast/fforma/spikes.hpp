#pragma once

#include "wrcast/core/panel.hpp"

#include <span>
#include <vector>

namespace wrcast::fforma {

/// Replaces values on promotion or festival dates by linear interpolation
/// between the nearest unflagged neighbours; flagged runs at either end take
/// the nearest unflagged value. Throws DomainError when every date is flagged.
std::vector<double> remove_promo_spikes(std::span<const double> values, std::span<const CovariateRow> covariates);

/// Same, with an explicit flag mask.
std::vector<double> interpolate_flagged(std::span<const double> values, const std::vector<bool>& flagged);

}  // namespace wrcast::fforma
