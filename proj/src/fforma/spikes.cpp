#include "wrcast/fforma/spikes.hpp"

#include "wrcast/core/errors.hpp"

namespace wrcast::fforma {

std::vector<double> interpolate_flagged(std::span<const double> values, const std::vector<bool>& flagged) {
    const auto n = values.size();
    if (flagged.size() != n) throw DomainError("flag mask is not aligned with the series");
    std::vector<std::size_t> anchors;
    for (std::size_t i = 0; i < n; ++i)
        if (!flagged[i]) anchors.push_back(i);
    if (n > 0 && anchors.empty()) throw DomainError("every date is flagged; nothing to interpolate from");

    std::vector<double> out(values.begin(), values.end());
    std::size_t k = 0;  // first anchor at or after i
    for (std::size_t i = 0; i < n; ++i) {
        while (k < anchors.size() && anchors[k] < i) ++k;
        if (!flagged[i]) continue;
        if (k == 0) {
            out[i] = values[anchors.front()];
        } else if (k == anchors.size()) {
            out[i] = values[anchors.back()];
        } else {
            const auto a = anchors[k - 1], b = anchors[k];
            const double t = static_cast<double>(i - a) / static_cast<double>(b - a);
            out[i] = values[a] + t * (values[b] - values[a]);
        }
    }
    return out;
}

std::vector<double> remove_promo_spikes(std::span<const double> values, std::span<const CovariateRow> covariates) {
    if (covariates.size() != values.size()) throw DomainError("covariates are not aligned with the series");
    std::vector<bool> flagged(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        flagged[i] = covariates[i].on_promotion() || covariates[i].on_festival();
    return interpolate_flagged(values, flagged);
}

}  // namespace wrcast::fforma
