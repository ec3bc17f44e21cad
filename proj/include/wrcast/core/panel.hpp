#pragma once

#include "wrcast/core/date.hpp"

#include <cstddef>
#include <filesystem>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace wrcast {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Per-date covariates. Calendar fields are derived from the date and not stored.
struct CovariateRow {
    double price = kNaN;
    double reference_price = kNaN;
    std::string promo_type;      // empty or "none" means no promotion
    std::string festival_level;  // empty or "none" means a regular day

    bool on_promotion() const noexcept { return !promo_type.empty() && promo_type != "none"; }
    bool on_festival() const noexcept { return !festival_level.empty() && festival_level != "none"; }
};

struct TimeSeries {
    std::string series_id;
    std::vector<Date> dates;     // strictly increasing, contiguous days
    std::vector<double> values;  // finite

    std::size_t size() const noexcept { return values.size(); }
};

/// One series with its covariates. Rows whose value is blank at the tail of a
/// series are the forecast plan: covariates known, target not yet observed.
struct SeriesData {
    TimeSeries observed;
    std::vector<CovariateRow> covariates;  // aligned with observed.dates
    std::vector<Date> future_dates;
    std::vector<CovariateRow> future_covariates;
};

struct PanelDataset {
    std::vector<SeriesData> series;
    bool has_price = false;
    bool has_promo = false;
    bool has_festival = false;

    std::size_t point_count() const noexcept;
    const SeriesData* find(const std::string& series_id) const;
    /// Sorted distinct promotion types (excluding "none") across all rows.
    std::vector<std::string> promo_types() const;
    std::vector<std::string> festival_levels() const;
};

/// Column names for panel CSV ingestion. `series_id`, `date`, `value` are
/// required; the covariate columns are used when present.
struct CsvSchema {
    std::string series_id = "series_id";
    std::string date = "date";
    std::string value = "value";
    std::string price = "price";
    std::string reference_price = "reference_price";
    std::string promo_type = "promo_type";
    std::string festival_level = "festival_level";
    /// Declared vocabularies; empty means "accept any label".
    std::vector<std::string> promo_vocabulary;
    std::vector<std::string> festival_vocabulary;
};

PanelDataset load_panel_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
PanelDataset parse_panel_csv(std::istream& in, const CsvSchema& schema = {});

/// Writes the canonical `series_id,date,value,price,reference_price,promo_type,festival_level` form.
void write_panel_csv(const PanelDataset& panel, std::ostream& out);

/// Throws IntegrityError / DataError when an invariant of the data model is broken.
void validate_panel(const PanelDataset& panel);

/// Options for the wide 15-minute electricity export (one column per client).
struct ElectricityOptions {
    std::size_t max_clients = 0;  // 0 keeps every client column
};

/// Loads the semicolon-separated, decimal-comma electricity export and sums
/// readings into daily totals. A reading stamped exactly at midnight closes
/// the previous day's last interval and is attributed to that day.
PanelDataset load_electricity_wide(const std::filesystem::path& path, const ElectricityOptions& opts = {});
PanelDataset parse_electricity_wide(std::istream& in, const ElectricityOptions& opts = {});

}  // namespace wrcast
