#include "wrcast/core/metrics.hpp"

#include "wrcast/core/csv.hpp"
#include "wrcast/core/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace wrcast {

double quantile_loss(double y, double yhat, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile must lie in (0, 1)");
    return p * std::max(0.0, y - yhat) + (1.0 - p) * std::max(0.0, yhat - y);
}

double rmse(std::span<const std::pair<double, double>> pairs, RmseVariant variant) {
    if (pairs.empty()) throw DomainError("rmse of an empty list");
    std::vector<double> sq;
    sq.reserve(pairs.size());
    for (const auto& [y, yhat] : pairs) sq.push_back((y - yhat) * (y - yhat));
    if (variant == RmseVariant::Mean) {
        double sum = 0.0;
        for (double v : sq) sum += v;
        return std::sqrt(sum / static_cast<double>(sq.size()));
    }
    std::sort(sq.begin(), sq.end());
    const auto n = sq.size();
    const double med = n % 2 ? sq[n / 2] : 0.5 * (sq[n / 2 - 1] + sq[n / 2]);
    return std::sqrt(med);
}

double p50_ql(std::span<const std::pair<double, double>> per_sample, P50Variant variant) {
    double num = 0.0, den = 0.0;
    for (const auto& [sum_hat, sum_y] : per_sample) {
        num += std::abs(sum_hat - sum_y);
        den += variant == P50Variant::AsPublished ? std::abs(sum_hat) : std::abs(sum_y);
    }
    if (variant == P50Variant::AsPublished) den *= 2.0;
    if (!(den > 0.0)) throw DomainError("p50_ql denominator is zero");
    return num / den;
}

void write_metric_reports_json(std::span<const MetricReport> reports, std::ostream& out) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back({{"metric", r.metric_name}, {"value", r.value}, {"groups", r.group_keys}});
    out << arr.dump(2) << '\n';
}

void write_metric_reports_csv(std::span<const MetricReport> reports, std::ostream& out) {
    std::set<std::string> keys;
    for (const auto& r : reports)
        for (const auto& [k, v] : r.group_keys) keys.insert(k);
    std::vector<std::string> header{"metric", "value"};
    header.insert(header.end(), keys.begin(), keys.end());
    csv::write_row(out, header);
    for (const auto& r : reports) {
        std::vector<std::string> row{r.metric_name, csv::format_number(r.value)};
        for (const auto& k : keys) {
            auto it = r.group_keys.find(k);
            row.push_back(it == r.group_keys.end() ? "" : it->second);
        }
        csv::write_row(out, row);
    }
}

}  // namespace wrcast
