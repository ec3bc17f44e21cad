#include "wrcast/causal/festival.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/log.hpp"

namespace wrcast::causal {

double FestivalFactor::beta_for(const std::string& level) const {
    const auto it = beta.find(level);
    if (it != beta.end()) return it->second;
    warn("no festival history for level '" + level + "'; using factor 0");
    return 0.0;
}

FestivalFactor festival_factor_fit(std::span<const FestivalObservation> history, std::span<const std::string> levels) {
    std::map<std::string, double> sum;
    FestivalFactor f;
    for (const auto& o : history) {
        if (!(o.baseline > 0.0)) throw DomainError("festival baseline must be positive (level " + o.level + ")");
        sum[o.level] += (o.actual - o.baseline) / o.baseline;
        ++f.source_count[o.level];
    }
    for (const auto& [level, s] : sum) {
        const double b = s / static_cast<double>(f.source_count[level]);
        if (!(b > -1.0)) throw DataError("festival factor for level " + level + " is not above -1");
        f.beta[level] = b;
    }
    for (const auto& level : levels) {
        if (f.beta.count(level)) continue;
        warn("no past festivals for level '" + level + "'; using factor 0");
        f.beta[level] = 0.0;
        f.source_count[level] = 0;
    }
    return f;
}

std::vector<double> festival_component(const FestivalFactor& factor, std::span<const double> baseline,
                                       std::span<const CovariateRow> calendar) {
    if (baseline.size() != calendar.size()) throw DomainError("festival calendar is not aligned with the baseline");
    std::vector<double> out(baseline.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (calendar[i].on_festival()) out[i] = factor.beta_for(calendar[i].festival_level) * baseline[i];
    return out;
}

}  // namespace wrcast::causal
