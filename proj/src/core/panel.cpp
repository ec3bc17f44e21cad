#include "wrcast/core/panel.hpp"

#include "wrcast/core/csv.hpp"
#include "wrcast/core/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace wrcast {

namespace {

std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

bool is_blank(std::string_view s) { return s.find_first_not_of(" \t") == std::string_view::npos; }

std::string row_list(const std::vector<std::size_t>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows.size() && i < 10; ++i) os << (i ? ", " : "") << rows[i];
    if (rows.size() > 10) os << ", ... (" << rows.size() << " rows)";
    return os.str();
}

struct RawRow {
    std::size_t line;
    Date date;
    double value;  // NaN = planned (future) row
    CovariateRow cov;
};

void check_vocabulary(const std::vector<std::string>& vocab, const std::string& label, std::size_t line,
                      const char* column) {
    if (vocab.empty() || label.empty() || label == "none") return;
    if (std::find(vocab.begin(), vocab.end(), label) == vocab.end())
        throw DataError("row " + std::to_string(line) + ": " + column + " '" + label +
                        "' is not in the declared vocabulary");
}

}  // namespace

std::size_t PanelDataset::point_count() const noexcept {
    std::size_t n = 0;
    for (const auto& s : series) n += s.observed.size();
    return n;
}

const SeriesData* PanelDataset::find(const std::string& series_id) const {
    for (const auto& s : series)
        if (s.observed.series_id == series_id) return &s;
    return nullptr;
}

std::vector<std::string> PanelDataset::promo_types() const {
    std::set<std::string> out;
    for (const auto& s : series) {
        for (const auto& c : s.covariates)
            if (c.on_promotion()) out.insert(c.promo_type);
        for (const auto& c : s.future_covariates)
            if (c.on_promotion()) out.insert(c.promo_type);
    }
    return {out.begin(), out.end()};
}

std::vector<std::string> PanelDataset::festival_levels() const {
    std::set<std::string> out;
    for (const auto& s : series) {
        for (const auto& c : s.covariates)
            if (c.on_festival()) out.insert(c.festival_level);
        for (const auto& c : s.future_covariates)
            if (c.on_festival()) out.insert(c.festival_level);
    }
    return {out.begin(), out.end()};
}

PanelDataset load_panel_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open panel file: " + path.string());
    return parse_panel_csv(in, schema);
}

PanelDataset parse_panel_csv(std::istream& in, const CsvSchema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("panel file is empty");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
    const auto header = csv::split_line(line);
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    };
    const auto id_col = column(schema.series_id);
    const auto date_col = column(schema.date);
    const auto value_col = column(schema.value);
    if (!id_col) throw SchemaError("missing required column '" + schema.series_id + "'");
    if (!date_col) throw SchemaError("missing required column '" + schema.date + "'");
    if (!value_col) throw SchemaError("missing required column '" + schema.value + "'");
    const auto price_col = column(schema.price);
    const auto ref_col = column(schema.reference_price);
    const auto promo_col = column(schema.promo_type);
    const auto fest_col = column(schema.festival_level);

    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<RawRow>> rows_by_id;
    std::vector<std::size_t> bad_rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const auto f = csv::split_line(line);
        auto field = [&](std::optional<std::size_t> col) -> std::string_view {
            if (!col || *col >= f.size()) return {};
            return f[*col];
        };
        const std::string id{field(id_col)};
        const auto date = parse_date(field(date_col));
        std::optional<double> value;
        bool ok = !id.empty() && date.has_value();
        if (!is_blank(field(value_col))) {
            value = parse_double(field(value_col));
            ok = ok && value.has_value();
        }
        RawRow row{line_no, date.value_or(Date{}), value.value_or(kNaN), {}};
        for (auto [col, target] : {std::pair{price_col, &row.cov.price}, std::pair{ref_col, &row.cov.reference_price}}) {
            if (!is_blank(field(col))) {
                const auto v = parse_double(field(col));
                ok = ok && v.has_value();
                *target = v.value_or(kNaN);
            }
        }
        row.cov.promo_type = std::string{field(promo_col)};
        row.cov.festival_level = std::string{field(fest_col)};
        if (!ok) {
            bad_rows.push_back(line_no);
            continue;
        }
        check_vocabulary(schema.promo_vocabulary, row.cov.promo_type, line_no, "promo_type");
        check_vocabulary(schema.festival_vocabulary, row.cov.festival_level, line_no, "festival_level");
        auto [it, inserted] = rows_by_id.try_emplace(id);
        if (inserted) order.push_back(id);
        it->second.push_back(std::move(row));
    }
    if (!bad_rows.empty()) throw DataError("unparseable values in rows " + row_list(bad_rows));

    PanelDataset panel;
    panel.has_price = price_col.has_value();
    panel.has_promo = promo_col.has_value();
    panel.has_festival = fest_col.has_value();
    for (const auto& id : order) {
        auto& rows = rows_by_id[id];
        std::stable_sort(rows.begin(), rows.end(), [](const RawRow& a, const RawRow& b) { return a.date < b.date; });
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].date == rows[i - 1].date)
                throw IntegrityError("duplicate (series_id, date) = (" + id + ", " + format_date(rows[i].date) +
                                     ") at row " + std::to_string(std::max(rows[i].line, rows[i - 1].line)));
        }
        SeriesData s;
        s.observed.series_id = id;
        bool in_future = false;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (i > 0 && r.date - rows[i - 1].date != std::chrono::days{1})
                throw DataError("series " + id + " has a date gap before row " + std::to_string(r.line) +
                                " (" + format_date(r.date) + "); missing observations are not imputed");
            if (std::isnan(r.value)) {
                in_future = true;
                s.future_dates.push_back(r.date);
                s.future_covariates.push_back(r.cov);
            } else {
                if (in_future)
                    throw DataError("series " + id + " has a missing value inside the series (row " +
                                    std::to_string(r.line) + " follows a blank value)");
                s.observed.dates.push_back(r.date);
                s.observed.values.push_back(r.value);
                s.covariates.push_back(r.cov);
            }
        }
        panel.series.push_back(std::move(s));
    }
    return panel;
}

void write_panel_csv(const PanelDataset& panel, std::ostream& out) {
    csv::write_row(out, {"series_id", "date", "value", "price", "reference_price", "promo_type", "festival_level"});
    for (const auto& s : panel.series) {
        auto emit = [&](Date d, double v, const CovariateRow& c) {
            csv::write_row(out, {s.observed.series_id, format_date(d), csv::format_number(v),
                                 csv::format_number(c.price), csv::format_number(c.reference_price), c.promo_type,
                                 c.festival_level});
        };
        for (std::size_t i = 0; i < s.observed.size(); ++i) emit(s.observed.dates[i], s.observed.values[i], s.covariates[i]);
        for (std::size_t i = 0; i < s.future_dates.size(); ++i) emit(s.future_dates[i], kNaN, s.future_covariates[i]);
    }
}

void validate_panel(const PanelDataset& panel) {
    std::set<std::string> ids;
    for (const auto& s : panel.series) {
        const auto& ts = s.observed;
        if (!ids.insert(ts.series_id).second) throw IntegrityError("duplicate series id " + ts.series_id);
        if (ts.dates.size() != ts.values.size() || s.covariates.size() != ts.values.size())
            throw IntegrityError("series " + ts.series_id + ": covariates do not align with observations");
        if (s.future_dates.size() != s.future_covariates.size())
            throw IntegrityError("series " + ts.series_id + ": future covariates do not align with dates");
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (!std::isfinite(ts.values[i]))
                throw DataError("series " + ts.series_id + ": non-finite value on " + format_date(ts.dates[i]));
            if (i > 0 && ts.dates[i] <= ts.dates[i - 1])
                throw IntegrityError("series " + ts.series_id + ": dates not strictly increasing");
        }
    }
}

}  // namespace wrcast
