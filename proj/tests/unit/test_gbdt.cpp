#include "doctest.h"

#include "wrcast/core/errors.hpp"
#include "wrcast/gbdt/boosting.hpp"
#include "wrcast/gbdt/tree.hpp"

#include <cmath>
#include <sstream>
#include <vector>

using namespace wrcast;
using namespace wrcast::gbdt;

namespace {

Matrix column(const std::vector<double>& x) {
    Matrix m(x.size(), 1);
    for (std::size_t i = 0; i < x.size(); ++i) m(i, 0) = x[i];
    return m;
}

std::vector<double> grid(std::size_t n, double lo, double hi) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return x;
}

}  // namespace

TEST_SUITE("gbdt") {

TEST_CASE("constant targets give a single leaf") {
    const auto X = column(grid(20, 0, 1));
    const std::vector<double> y(20, 3.5), h(20, 1.0);
    const auto t = fit_tree(X, y, h, {3, 1});
    CHECK(t.leaf_count() == 1);
    const double x0 = 0.3;
    CHECK(t.predict(std::span<const double>(&x0, 1)) == doctest::Approx(3.5));
}

TEST_CASE("step function split") {
    const auto xs = grid(21, 0, 1);
    std::vector<double> y(xs.size()), h(xs.size(), 1.0);
    for (std::size_t i = 0; i < xs.size(); ++i) y[i] = xs[i] > 0.5 ? 1.0 : 0.0;
    const auto t = fit_tree(column(xs), y, h, {1, 1});
    REQUIRE(t.nodes().size() == 3);
    // exact oracle: best cut between 0.50 and 0.55
    CHECK(t.nodes()[0].threshold == doctest::Approx(0.525));
    const double lo = 0.2, hi = 0.8;
    CHECK(t.predict(std::span<const double>(&lo, 1)) == doctest::Approx(0.0));
    CHECK(t.predict(std::span<const double>(&hi, 1)) == doctest::Approx(1.0));
}

TEST_CASE("two points fit perfectly") {
    const auto X = column({0.0, 1.0});
    const std::vector<double> y{-2.0, 5.0}, h{1, 1};
    const auto t = fit_tree(X, y, h, {1, 1});
    for (std::size_t i = 0; i < 2; ++i) CHECK(t.predict(X.row(i)) == doctest::Approx(y[i]));
}

TEST_CASE("leaf value uses hessians") {
    const auto X = column({0.0, 0.0});
    const std::vector<double> g{2.0, 4.0}, h{1.0, 3.0};
    const auto t = fit_tree(X, g, h, {2, 1});
    const double x0 = 0.0;
    CHECK(t.predict(std::span<const double>(&x0, 1)) == doctest::Approx(6.0 / 4.0));
}

TEST_CASE("constant y: base is the constant, trees vanish") {
    const auto X = column(grid(30, 0, 1));
    const std::vector<double> y(30, -1.25);
    const auto m = gbdt_fit(X, y, {10, 0.1, {3, 1}});
    CHECK(m.base[0] == doctest::Approx(-1.25));
    for (std::size_t i = 0; i < 30; ++i) CHECK(m.predict_scalar(X.row(i)) == doctest::Approx(-1.25));
}

TEST_CASE("sin fit and monotone loss") {
    const auto xs = grid(200, 0, 2 * 3.141592653589793);
    std::vector<double> y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) y[i] = std::sin(xs[i]);
    const auto X = column(xs);
    const auto m = gbdt_fit(X, y, {200, 0.1, {3, 1}});
    double se = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) se += std::pow(m.predict_scalar(X.row(i)) - y[i], 2);
    CHECK(std::sqrt(se / double(xs.size())) < 0.05);
    REQUIRE(m.loss_history.size() == 201);
    for (std::size_t i = 1; i < m.loss_history.size(); ++i) CHECK(m.loss_history[i] <= m.loss_history[i - 1] + 1e-12);
}

TEST_CASE("zero trees predict the base") {
    const auto X = column(grid(10, 0, 1));
    std::vector<double> y(10);
    for (std::size_t i = 0; i < 10; ++i) y[i] = double(i);
    const auto m = gbdt_fit(X, y, {0, 0.1, {3, 1}});
    CHECK(m.predict_scalar(X.row(3)) == doctest::Approx(4.5));
}

TEST_CASE("single round with unit rate adds the leaf") {
    const auto X = column({0.0, 1.0, 2.0, 3.0});
    const std::vector<double> y{0, 0, 4, 4};
    const auto m = gbdt_fit(X, y, {1, 1.0, {1, 1}});
    REQUIRE(m.rounds.size() == 1);
    CHECK(m.rounds[0].step == doctest::Approx(1.0));
    CHECK(m.predict_scalar(X.row(0)) == doctest::Approx(0.0));
    CHECK(m.predict_scalar(X.row(3)) == doctest::Approx(4.0));
}

TEST_CASE("linear target probe") {
    const auto xs = grid(101, 0, 1);
    std::vector<double> y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) y[i] = 2.0 * xs[i];
    const auto m = gbdt_fit(column(xs), y, {100, 0.1, {3, 1}});
    const double x0 = 0.5;
    CHECK(std::abs(m.predict_scalar(std::span<const double>(&x0, 1)) - 1.0) < 0.1);
}

TEST_CASE("tiny learning rate stays at the base") {
    const auto xs = grid(50, 0, 1);
    std::vector<double> y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) y[i] = xs[i] * xs[i];
    const auto X = column(xs);
    const auto m = gbdt_fit(X, y, {20, 1e-12, {3, 1}});
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(m.predict_scalar(X.row(i)) == doctest::Approx(m.base[0]));
}

TEST_CASE("monotone feature transform leaves predictions unchanged") {
    const auto xs = grid(60, 0.1, 3.0);
    std::vector<double> y(xs.size()), ex(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        y[i] = std::cos(3 * xs[i]);
        ex[i] = std::exp(xs[i]);
    }
    const auto a = gbdt_fit(column(xs), y, {30, 0.1, {3, 2}});
    const auto b = gbdt_fit(column(ex), y, {30, 0.1, {3, 2}});
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(a.predict_scalar(std::span<const double>(&xs[i], 1)) ==
              doctest::Approx(b.predict_scalar(std::span<const double>(&ex[i], 1))));
}

TEST_CASE("fit is reproducible and json round trips") {
    Matrix X(40, 2);
    std::vector<double> y(40);
    for (std::size_t i = 0; i < 40; ++i) {
        X(i, 0) = double(i % 7);
        X(i, 1) = double(i) / 3.0;
        y[i] = X(i, 0) * 0.5 - X(i, 1);
    }
    const auto a = gbdt_fit(X, y, {25, 0.1, {3, 1}});
    const auto b = gbdt_fit(X, y, {25, 0.1, {3, 1}});
    std::stringstream ss;
    a.save_json(ss);
    const auto c = GbdtModel::load_json(ss);
    for (std::size_t i = 0; i < 40; ++i) {
        CHECK(a.predict_scalar(X.row(i)) == b.predict_scalar(X.row(i)));
        CHECK(a.predict_scalar(X.row(i)) == doctest::Approx(c.predict_scalar(X.row(i))).epsilon(1e-12));
    }
    const std::vector<double> wrong{1.0};
    CHECK_THROWS_AS(a.predict(wrong), DomainError);
}

TEST_CASE("custom objective with multiple outputs") {
    // independent squared losses towards targets 2 and -1
    const auto X = column(grid(10, 0, 1));
    CustomObjective obj;
    obj.outputs = 2;
    obj.evaluate = [](const Matrix& s, Matrix* g, Matrix* h) {
        double f = 0;
        for (std::size_t r = 0; r < s.rows; ++r) {
            const double t[2] = {2.0, -1.0};
            for (std::size_t k = 0; k < 2; ++k) {
                const double d = s(r, k) - t[k];
                f += 0.5 * d * d;
                if (g) (*g)(r, k) = d;
                if (h) (*h)(r, k) = 1.0;
            }
        }
        return f;
    };
    const std::vector<double> base{0.0, 0.0};
    const auto m = gbdt_fit_custom(X, obj, base, {50, 0.3, {2, 1}});
    const auto p = m.predict(X.row(4));
    CHECK(p[0] == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(p[1] == doctest::Approx(-1.0).epsilon(1e-3));
    for (std::size_t i = 1; i < m.loss_history.size(); ++i) CHECK(m.loss_history[i] <= m.loss_history[i - 1] + 1e-12);
}

TEST_CASE("non-finite gradient is a training error") {
    const auto X = column(grid(5, 0, 1));
    CustomObjective obj;
    obj.evaluate = [](const Matrix& s, Matrix* g, Matrix* h) {
        if (g) std::fill(g->data.begin(), g->data.end(), std::nan(""));
        if (h) std::fill(h->data.begin(), h->data.end(), 1.0);
        return double(s.rows);
    };
    const std::vector<double> base{0.0};
    CHECK_THROWS_AS(gbdt_fit_custom(X, obj, base, {3, 0.1, {2, 1}}), TrainingError);
}

}
