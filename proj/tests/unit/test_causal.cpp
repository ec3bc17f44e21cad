#include "doctest.h"

#include "../support/dml_synth.hpp"

#include "wrcast/causal/dml.hpp"
#include "wrcast/causal/festival.hpp"
#include "wrcast/core/errors.hpp"

#include <cmath>
#include <sstream>

using namespace wrcast;
using namespace wrcast::causal;

TEST_SUITE("causal") {

TEST_CASE("dml recovers a constant elasticity") {
    const auto d = testing::partially_linear(2000, {-2.0}, 42);
    const auto m = dml_fit(d);
    CHECK(m.theta[0] >= -2.3);
    CHECK(m.theta[0] <= -1.7);
    CHECK(m.pooled_theta == doctest::Approx(m.theta[0]).epsilon(0.2));
}

TEST_CASE("dml null design") {
    const auto d = testing::partially_linear(2000, {-2.0}, 43, true);
    const auto m = dml_fit(d);
    CHECK(std::abs(m.theta[0]) < 0.2);
}

TEST_CASE("dml two arms keep their ordering") {
    const auto d = testing::partially_linear(2000, {-1.0, -3.0}, 44);
    const auto m = dml_fit(d);
    REQUIRE(m.theta.size() == 2);
    CHECK(m.theta[1] < m.theta[0]);
    CHECK(m.theta_for("arm1") == m.theta[1]);
    CHECK(m.theta_for("none") == m.theta[0]);
    CHECK(m.theta_for("unknown") == m.pooled_theta);
}

TEST_CASE("dml cross-fitting never predicts a row with its own fold") {
    const auto d = testing::partially_linear(400, {-2.0}, 45);
    const auto m = dml_fit(d);
    REQUIRE(m.fold.size() == 400);
    for (std::size_t i = 0; i < 400; ++i) CHECK(m.fold[i] != m.predicted_by[i]);
}

TEST_CASE("dml input errors") {
    const auto small = testing::partially_linear(50, {-2.0}, 46);
    CHECK_THROWS_AS(dml_fit(small), DataError);
    auto flat = testing::partially_linear(300, {-2.0}, 47);
    std::fill(flat.Tr.begin(), flat.Tr.end(), 0.5);
    CHECK_THROWS_AS(dml_fit(flat), IdentifiabilityError);
}

TEST_CASE("promotion uplift") {
    CHECK(promotion_uplift(100, 9, 10, -2.0) == doctest::Approx(23.4568).epsilon(1e-4));
    CHECK(promotion_uplift(100, 10, 10, -2.0) == 0.0);
}

TEST_CASE("promotion component") {
    ElasticityModel m;
    m.categories = {"none", "coupon"};
    m.theta = {-1.0, -2.0};
    m.pooled_theta = -1.5;
    std::vector<CovariateRow> plan(3);
    for (auto& r : plan) r.price = r.reference_price = 10.0;
    const std::vector<double> base{100, 100, 100};
    for (double v : promotion_component(m, base, plan)) CHECK(v == 0.0);
    plan[1].promo_type = "coupon";
    plan[1].price = 9.0;
    const auto c = promotion_component(m, base, plan);
    CHECK(c[0] == 0.0);
    CHECK(c[1] == doctest::Approx(23.4568).epsilon(1e-4));
    plan[1].price = 0.0;
    CHECK_THROWS_AS(promotion_component(m, base, plan), DomainError);
}

TEST_CASE("festival factor") {
    const std::vector<FestivalObservation> one{{"S", 30, 20}};
    CHECK(festival_factor_fit(one).beta_for("S") == doctest::Approx(0.5));
    const std::vector<FestivalObservation> two{{"S", 14, 10}, {"S", 16, 10}};
    CHECK(festival_factor_fit(two).beta_for("S") == doctest::Approx(0.5));
    const std::vector<FestivalObservation> same{{"A", 7, 7}};
    CHECK(festival_factor_fit(same).beta_for("A") == 0.0);
    const std::vector<std::string> levels{"S", "B"};
    const auto f = festival_factor_fit(one, levels);
    CHECK(f.beta_for("B") == 0.0);
    const std::vector<FestivalObservation> bad{{"S", 1, 0}};
    CHECK_THROWS_AS(festival_factor_fit(bad), DomainError);
}

TEST_CASE("festival component") {
    FestivalFactor f;
    f.beta["S"] = 0.5;
    std::vector<CovariateRow> cal(3);
    const std::vector<double> base{10, 10, 10};
    for (double v : festival_component(f, base, cal)) CHECK(v == 0.0);
    cal[1].festival_level = "S";
    const auto c = festival_component(f, base, cal);
    CHECK(c[1] == doctest::Approx(5.0));
    CHECK(c[0] == 0.0);
    f.beta["S"] = 0.0;
    for (double v : festival_component(f, base, cal)) CHECK(v == 0.0);
}

}
