#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wrcast {

/// Pinball loss p*(y - yhat)_+ + (1 - p)*(yhat - y)_+.
double quantile_loss(double y, double yhat, double p);

enum class RmseVariant {
    Mean,    // sqrt(mean of squared errors)
    Median,  // sqrt(median of squared errors)
};

/// Pairs are (y, yhat).
double rmse(std::span<const std::pair<double, double>> pairs, RmseVariant variant = RmseVariant::Mean);

enum class P50Variant {
    AsPublished,   // sum|sum_yhat - sum_y| / (2 * sum|sum_yhat|)
    Conventional,  // sum|sum_yhat - sum_y| / sum|sum_y|
};

/// Each entry is (sum of yhat over the horizon, sum of y over the horizon).
double p50_ql(std::span<const std::pair<double, double>> per_sample,
              P50Variant variant = P50Variant::AsPublished);

struct MetricReport {
    std::string metric_name;  // quantile_loss | rmse | p50_ql
    double value = 0.0;
    std::map<std::string, std::string> group_keys;
};

void write_metric_reports_json(std::span<const MetricReport> reports, std::ostream& out);
void write_metric_reports_csv(std::span<const MetricReport> reports, std::ostream& out);

}  // namespace wrcast
