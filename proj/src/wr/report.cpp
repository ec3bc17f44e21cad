#include "wrcast/wr/report.hpp"

#include "wrcast/core/csv.hpp"
#include "wrcast/core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wrcast::wr {

Histogram make_histogram(std::span<const double> values, std::size_t bins) {
    Histogram h;
    if (values.empty()) return h;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(lo))) {
        h.edges = {lo, hi};
        h.counts = {values.size()};
        return h;
    }
    bins = std::max<std::size_t>(bins, 1);
    h.counts.assign(bins, 0);
    for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins));
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        ++h.counts[std::min(b, bins - 1)];
    }
    return h;
}

namespace {

DistributionSummary summarise(std::string name, const std::vector<double>& v, std::size_t bins) {
    DistributionSummary s;
    s.name = std::move(name);
    s.count = v.size();
    s.histogram = make_histogram(v, bins);
    if (v.empty()) return s;
    std::size_t below = 0, above = 0;
    double sum = 0.0;
    for (double x : v) {
        sum += x;
        below += x < 1.0;
        above += x > 1.0;
    }
    const double n = static_cast<double>(v.size());
    s.mean = sum / n;
    s.share_below_one = static_cast<double>(below) / n;
    s.share_above_one = static_cast<double>(above) / n;
    return s;
}

}  // namespace

WeightReport report_weight_distributions(std::span<const WrOutput> outputs, std::span<const std::string> names,
                                         std::size_t bins) {
    if (outputs.empty()) throw DomainError("no outputs to report");
    const auto N = names.size();
    std::vector<std::vector<double>> w(N);
    std::vector<double> eps;
    for (const auto& o : outputs) {
        if (o.weights.size() != N) throw DomainError("output component count does not match the names");
        for (std::size_t i = 0; i < N; ++i) w[i].insert(w[i].end(), o.weights[i].begin(), o.weights[i].end());
        eps.insert(eps.end(), o.residuals.begin(), o.residuals.end());
    }
    WeightReport r;
    for (std::size_t i = 0; i < N; ++i) r.weights.push_back(summarise("weight_" + names[i], w[i], bins));
    r.residual = summarise("residual", eps, bins);
    return r;
}

void write_histograms_csv(const WeightReport& report, std::ostream& out) {
    out << "series,bin_lo,bin_hi,count\n";
    auto emit = [&](const DistributionSummary& s) {
        for (std::size_t b = 0; b < s.histogram.counts.size(); ++b)
            out << s.name << ',' << csv::format_number(s.histogram.edges[b]) << ','
                << csv::format_number(s.histogram.edges[b + 1]) << ',' << s.histogram.counts[b] << '\n';
    };
    for (const auto& s : report.weights) emit(s);
    emit(report.residual);
}

void write_summary_csv(const WeightReport& report, std::ostream& out) {
    out << "series,count,mean,share_below_1,share_above_1\n";
    auto emit = [&](const DistributionSummary& s) {
        out << s.name << ',' << s.count << ',' << csv::format_number(s.mean) << ','
            << csv::format_number(s.share_below_one) << ',' << csv::format_number(s.share_above_one) << '\n';
    };
    for (const auto& s : report.weights) emit(s);
    emit(report.residual);
}

}  // namespace wrcast::wr
