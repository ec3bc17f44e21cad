#include "wrcast/core/csv.hpp"
#include "wrcast/core/errors.hpp"
#include "wrcast/core/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace wrcast {

namespace {

double parse_reading(std::string value, std::size_t line) {
    std::replace(value.begin(), value.end(), ',', '.');
    if (value.empty()) return 0.0;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(v))
        throw DataError("electricity file: unparseable reading at line " + std::to_string(line));
    return v;
}

}  // namespace

PanelDataset load_electricity_wide(const std::filesystem::path& path, const ElectricityOptions& opts) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open electricity file: " + path.string() +
                        " (download LD2011_2014.txt from the UCI repository, dataset "
                        "'ElectricityLoadDiagrams20112014')");
    return parse_electricity_wide(in, opts);
}

PanelDataset parse_electricity_wide(std::istream& in, const ElectricityOptions& opts) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("electricity file is empty");
    const char sep = line.find(';') != std::string::npos ? ';' : ',';
    const auto header = csv::split_line(line, sep);
    if (header.size() < 2) throw SchemaError("electricity file needs a timestamp column and client columns");
    std::size_t clients = header.size() - 1;
    if (opts.max_clients > 0) clients = std::min(clients, opts.max_clients);

    std::map<Date, std::vector<double>> daily;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = csv::split_line(line, sep);
        if (f.size() < clients + 1) throw DataError("electricity file: short row at line " + std::to_string(line_no));
        auto date = parse_date(f[0]);
        if (!date) throw DataError("electricity file: bad timestamp at line " + std::to_string(line_no));
        if (f[0].size() >= 19 && f[0].compare(11, 8, "00:00:00") == 0) *date -= std::chrono::days{1};
        auto& acc = daily[*date];
        acc.resize(clients, 0.0);
        for (std::size_t c = 0; c < clients; ++c) acc[c] += parse_reading(f[c + 1], line_no);
    }

    PanelDataset panel;
    panel.series.resize(clients);
    for (std::size_t c = 0; c < clients; ++c) panel.series[c].observed.series_id = header[c + 1];
    Date prev{};
    bool first = true;
    for (const auto& [date, sums] : daily) {
        if (!first && date - prev != std::chrono::days{1})
            throw DataError("electricity file: missing day " + format_date(prev + std::chrono::days{1}));
        first = false;
        prev = date;
        for (std::size_t c = 0; c < clients; ++c) {
            auto& s = panel.series[c];
            s.observed.dates.push_back(date);
            s.observed.values.push_back(sums[c]);
            s.covariates.emplace_back();
        }
    }
    return panel;
}

}  // namespace wrcast
