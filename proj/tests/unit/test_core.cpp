#include "doctest.h"

#include "wrcast/core/config.hpp"
#include "wrcast/core/errors.hpp"
#include "wrcast/core/metrics.hpp"
#include "wrcast/core/panel.hpp"
#include "wrcast/core/random.hpp"
#include "wrcast/core/windows.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace wrcast;

namespace {

PanelDataset ramp_panel(std::size_t n, std::size_t series = 1) {
    std::ostringstream csv;
    csv << "series_id,date,value\n";
    for (std::size_t s = 0; s < series; ++s) {
        Date d = make_date(2021, 1, 1);
        for (std::size_t i = 0; i < n; ++i, d += std::chrono::days{1})
            csv << "s" << s << "," << format_date(d) << "," << double(i) << "\n";
    }
    std::istringstream in(csv.str());
    return parse_panel_csv(in);
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("quantile loss examples") {
    CHECK(quantile_loss(10, 8, 0.5) == doctest::Approx(1.0));
    CHECK(quantile_loss(8, 10, 0.9) == doctest::Approx(0.2));
    CHECK(quantile_loss(7, 7, 0.3) == 0.0);
}

TEST_CASE("quantile loss at the median is half the absolute error") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double y = rng.normal(0, 50), yhat = rng.normal(0, 50);
        CHECK(quantile_loss(y, yhat, 0.5) == doctest::Approx(0.5 * std::abs(y - yhat)));
        CHECK(quantile_loss(y, yhat, rng.uniform(0.01, 0.99)) > 0.0);
    }
}

TEST_CASE("rmse examples") {
    const std::vector<std::pair<double, double>> a{{3, 0}, {0, 4}};
    CHECK(rmse(a) == doctest::Approx(3.53553).epsilon(1e-5));
    const std::vector<std::pair<double, double>> b{{1, 1}, {2, 2}};
    CHECK(rmse(b) == 0.0);
    const std::vector<std::pair<double, double>> c{{5, 5}, {2, 0}};
    CHECK(rmse(c) == doctest::Approx(std::sqrt(2.0)));
    // median variant: errors {1, 2, 10} -> sqrt(4)
    const std::vector<std::pair<double, double>> d{{1, 0}, {2, 0}, {10, 0}};
    CHECK(rmse(d, RmseVariant::Median) == doctest::Approx(2.0));
}

TEST_CASE("rmse is permutation invariant") {
    std::vector<std::pair<double, double>> v{{1, 2}, {3, 7}, {-1, 0}, {4, 4.5}};
    const double r = rmse(v);
    std::reverse(v.begin(), v.end());
    CHECK(rmse(v) == doctest::Approx(r));
}

TEST_CASE("p50_ql examples") {
    const std::vector<std::pair<double, double>> one{{10, 8}};
    CHECK(p50_ql(one) == doctest::Approx(0.1));
    const std::vector<std::pair<double, double>> two{{10, 8}, {5, 5}};
    CHECK(p50_ql(two) == doctest::Approx(2.0 / 30.0));
    const std::vector<std::pair<double, double>> perfect{{3, 3}, {4, 4}};
    CHECK(p50_ql(perfect) == 0.0);
    CHECK(p50_ql(one, P50Variant::Conventional) == doctest::Approx(0.25));
}

TEST_CASE("p50_ql is scale invariant") {
    std::vector<std::pair<double, double>> v{{10, 8}, {5, 7}, {12, 11}};
    const double base = p50_ql(v);
    for (auto& [a, b] : v) a *= 3.7, b *= 3.7;
    CHECK(p50_ql(v) == doctest::Approx(base));
}

TEST_CASE("metric reports serialize") {
    std::vector<MetricReport> r{{"p50_ql", 0.25, {{"model", "wr"}}}};
    std::ostringstream js, cs;
    write_metric_reports_json(r, js);
    write_metric_reports_csv(r, cs);
    CHECK(js.str().find("\"p50_ql\"") != std::string::npos);
    CHECK(cs.str().find("wr") != std::string::npos);
}

TEST_CASE("panel csv: three rows, one series") {
    std::istringstream in("series_id,date,value\na,2021-01-01,1\na,2021-01-02,2\na,2021-01-03,3\n");
    const auto p = parse_panel_csv(in);
    REQUIRE(p.series.size() == 1);
    CHECK(p.point_count() == 3);
    CHECK(p.series[0].observed.values[2] == 3.0);
    CHECK_FALSE(p.has_price);
}

TEST_CASE("panel csv: duplicated date names the row") {
    std::istringstream in("series_id,date,value\na,2021-01-01,1\na,2021-01-02,2\na,2021-01-02,3\n");
    try {
        parse_panel_csv(in);
        FAIL("expected IntegrityError");
    } catch (const IntegrityError& e) {
        CHECK(std::string(e.what()).find("row 4") != std::string::npos);
    }
}

TEST_CASE("panel csv: gaps and missing columns are rejected") {
    std::istringstream gap("series_id,date,value\na,2021-01-01,1\na,2021-01-03,2\n");
    CHECK_THROWS_AS(parse_panel_csv(gap), DataError);
    std::istringstream nocol("series_id,date\na,2021-01-01\n");
    CHECK_THROWS_AS(parse_panel_csv(nocol), SchemaError);
}

TEST_CASE("panel csv: blank tail values form the forecast plan") {
    std::istringstream in(
        "series_id,date,value,price,reference_price,promo_type,festival_level\n"
        "a,2021-01-01,1,10,10,none,none\n"
        "a,2021-01-02,2,9,10,coupon,none\n"
        "a,2021-01-03,,8,10,coupon,S\n");
    const auto p = parse_panel_csv(in);
    REQUIRE(p.series.size() == 1);
    CHECK(p.series[0].observed.size() == 2);
    REQUIRE(p.series[0].future_dates.size() == 1);
    CHECK(p.series[0].future_covariates[0].on_festival());
    CHECK(p.promo_types() == std::vector<std::string>{"coupon"});
}

TEST_CASE("panel csv round trip") {
    auto p = ramp_panel(10, 2);
    std::ostringstream out;
    write_panel_csv(p, out);
    std::istringstream in(out.str());
    const auto q = parse_panel_csv(in);
    REQUIRE(q.series.size() == 2);
    CHECK(q.series[1].observed.values == p.series[1].observed.values);
}

TEST_CASE("electricity export is summed per day") {
    // midnight reading belongs to the previous day
    std::istringstream in(
        "\"\";\"MT_001\";\"MT_002\"\n"
        "\"2014-01-01 00:15:00\";1,5;2\n"
        "\"2014-01-01 12:00:00\";1;2\n"
        "\"2014-01-02 00:00:00\";0,5;1\n"
        "\"2014-01-02 00:15:00\";4;4\n");
    const auto p = parse_electricity_wide(in);
    REQUIRE(p.series.size() == 2);
    REQUIRE(p.series[0].observed.size() == 2);
    CHECK(p.series[0].observed.values[0] == doctest::Approx(3.0));
    CHECK(p.series[1].observed.values[0] == doctest::Approx(5.0));
    CHECK(p.series[0].observed.values[1] == doctest::Approx(4.0));
}

TEST_CASE("admissible anchors") {
    CHECK(admissible_anchor_count(100, 72, 24) == 5);
    CHECK(admissible_anchor_count(90, 72, 24) == 0);
    const auto p = ramp_panel(100);
    const auto w = make_windows(p, 72, 24, 72, 1);
    CHECK(w.size() == 5);
    for (const auto& x : w) {
        CHECK(x.history.size() == 72);
        CHECK(x.target.size() == 24);
        CHECK(x.target[0] == double(x.anchor));
        CHECK(x.history.back() == double(x.anchor - 1));
    }
}

TEST_CASE("make_windows is deterministic and samples without replacement") {
    const auto p = ramp_panel(300, 3);
    const auto a = make_windows(p, 28, 7, 20, 9);
    const auto b = make_windows(p, 28, 7, 20, 9);
    REQUIRE(a.size() == 60);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].series_index == b[i].series_index);
        CHECK(a[i].anchor == b[i].anchor);
        CHECK(a[i].history == b[i].history);
        if (i > 0 && a[i].series_index == a[i - 1].series_index) CHECK(a[i].anchor > a[i - 1].anchor);
    }
}

TEST_CASE("config parsing") {
    std::istringstream in("# comment\nT = 28\nalpha=1.5\nalphas = 0, 0.5 ,1\nflag = true\n");
    const auto c = Config::parse(in);
    CHECK(c.get_int("T", 0) == 28);
    CHECK(c.get_double("alpha", 0) == 1.5);
    CHECK(c.get_doubles("alphas", {}) == std::vector<double>{0, 0.5, 1});
    CHECK(c.get_bool("flag", false));
    CHECK(c.get_string("missing", "x") == "x");
    std::istringstream bad("T = abc\n");
    CHECK_THROWS_AS(Config::parse(bad).get_int("T", 0), ConfigError);
}

TEST_CASE("dates") {
    CHECK(format_date(*parse_date("2014-06-01 00:15:00")) == "2014-06-01");
    CHECK_FALSE(parse_date("2014-13-01").has_value());
    CHECK(calendar_fields(make_date(2024, 1, 1)).weekday == 0);
}

}
