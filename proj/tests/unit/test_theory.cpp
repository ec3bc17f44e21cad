#include "doctest.h"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/random.hpp"
#include "wrcast/theory/conjecture.hpp"
#include "wrcast/theory/constrained.hpp"
#include "wrcast/theory/optimal.hpp"
#include "wrcast/theory/region_map.hpp"
#include "wrcast/theory/suite.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

using namespace wrcast;
using namespace wrcast::theory;

TEST_SUITE("theory") {

TEST_CASE("optimal weight, two components") {
    CHECK(optimal_weight_n2(8, 6, 2) == doctest::Approx(1.0));
    const double w = optimal_weight_n2(10, 6, 2);
    CHECK(w == doctest::Approx(1.5));
    CHECK(w * 6 + (2 - w) * 2 == doctest::Approx(10.0));
    CHECK_THROWS_AS(optimal_weight_n2(5, 3, 3), DegenerateError);
}

TEST_CASE("bias predicate") {
    const auto inst = TheoryInstance::from_components({6, 4}, {5, 2});
    CHECK(bias_predicate_g(inst, 0) == doctest::Approx(9.0));
    CHECK_FALSE(sign_rule_improves(inst, 0));
    const auto v = improvement_verdict(inst);
    CHECK_FALSE(v.improved[0]);
    CHECK(v.predicted[0] == v.improved[0]);
    CHECK(v.predicted[1] == v.improved[1]);
    const auto three = TheoryInstance::from_components({1, 2, 3}, {1, 2, 3});
    CHECK_THROWS_AS(bias_predicate_g(three, 0), DomainError);
}

TEST_CASE("perfect estimates do not improve") {
    CHECK_FALSE(strictly_improves(5, 5, 1.0));
    CHECK_FALSE(strictly_improves(5, 5, 1.3));
    const auto s = improvement_interval(5, 5);
    CHECK(s.empty);
}

TEST_CASE("improvement intervals") {
    const auto a = improvement_interval(4, 2);
    CHECK_FALSE(a.empty);
    CHECK(a.lo == doctest::Approx(1.0));
    CHECK(a.hi == doctest::Approx(3.0));
    const auto b = improvement_interval(2, 4);
    CHECK(b.lo == doctest::Approx(0.0));
    CHECK(b.hi == doctest::Approx(1.0));
    CHECK_FALSE(b.contains(0.0));
    CHECK(b.contains(0.5));
    CHECK_THROWS_AS(improvement_interval(2, 0), DegenerateError);
}

TEST_CASE("negative estimate: improving weights are still the interval") {
    // A complement-of-interval rule for l_hat < 0 would exclude w = 0, yet
    // |0 * -1 - 2| = 2 < |-1 - 2| = 3.
    CHECK(strictly_improves(2, -1, 0.0));
    const auto s = improvement_interval(2, -1);
    CHECK(s.lo == doctest::Approx(-5.0));
    CHECK(s.hi == doctest::Approx(1.0));
    CHECK(s.contains(0.0));
    CHECK_FALSE(s.contains(-6.0));
    CHECK_FALSE(s.contains(2.0));
}

TEST_CASE("interval membership equals the lemma and brute force") {
    Rng rng(31);
    for (int i = 0; i < 5000; ++i) {
        const double l = rng.uniform(-10, 10), lh = rng.uniform(-10, 10), w = rng.uniform(-4, 6);
        if (std::abs(lh) < 1e-6) continue;
        const auto s = improvement_interval(l, lh);
        CHECK(s.contains(w) == lemma_predicate(l, lh, w));
        CHECK(s.contains(w) == strictly_improves(l, lh, w));
    }
}

TEST_CASE("corollary root lies in the named interval") {
    const auto r = corollary_root(6, 4, 5.5);
    REQUIRE(r.has_value());
    CHECK(*r > 4.0);
    CHECK(*r < 5.0);
    const auto inst = TheoryInstance::from_components({6, 4}, {5.5, *r});
    CHECK(std::abs(bias_predicate_g(inst, 1)) < 1e-9);
    const auto q = corollary_root(6, 4, 7.0);
    REQUIRE(q.has_value());
    CHECK(*q > 0.0);
    CHECK(*q < 4.0);
}

TEST_CASE("region map for one truth") {
    const auto m = joint_improvement_map_n2(6, 4);
    CHECK(m.sign_mismatches == 0);
    CHECK(m.corollary_mismatches == 0);
    CHECK(m.observation_violations == 0);
    CHECK(m.both_same_sign == 0);
    CHECK(m.both_count > 0);
    bool saw_exact = false;
    for (const auto& c : m.cells)
        if (c.l1_hat == 6 && c.l2_hat == 4) {
            saw_exact = true;
            CHECK(c.region == Region::Neither);
        }
    CHECK(saw_exact);
    std::ostringstream out;
    write_region_csv(m, out);
    CHECK(out.str().rfind("l1,l2,l1_hat", 0) == 0);
}

TEST_CASE("sign rule sweep") {
    const auto s = sign_rule_sweep(3, 7);
    CHECK(s.cells > 0);
    CHECK(s.mismatches == 0);
}

TEST_CASE("constrained optimum: equality case") {
    const std::vector<double> lh{3, 5, 2};
    for (double w : constrained_optimal_weights(10, lh, 1.0)) CHECK(w == doctest::Approx(1.0));
}

TEST_CASE("constrained optimum agrees with the closed form") {
    const std::vector<double> lh{6, 2};
    const auto w = constrained_optimal_weights(10, lh, 2.0);
    CHECK(w[0] == doctest::Approx(1.5));
    CHECK(w[1] == doctest::Approx(0.5));
}

TEST_CASE("constrained optimum out of reach matches a grid oracle") {
    const std::vector<double> lh{6, 2, 4};
    const double y = 30.0, alpha = 1.0;
    const auto w = constrained_optimal_weights(y, lh, alpha);
    auto err = [&](double a, double b, double c) { return std::pow(y - a * lh[0] - b * lh[1] - c * lh[2], 2); };
    const double lo = 1 - alpha / 3, hi = lo + alpha;
    double best = 1e300;
    for (double a = lo; a <= hi + 1e-12; a += 1e-3)
        for (double b = lo; b <= hi + 1e-12; b += 1e-3) {
            const double c = 3 - a - b;
            if (c < lo - 1e-12 || c > hi + 1e-12) continue;
            best = std::min(best, err(a, b, c));
        }
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(3.0));
    CHECK(err(w[0], w[1], w[2]) <= best + 1e-9);
    CHECK(err(w[0], w[1], w[2]) >= best - 0.05);
    const auto span = reachable_span(lh, alpha);
    CHECK(span.hi < y);
}

TEST_CASE("random optimal member stays optimal and feasible") {
    const std::vector<double> lh{6, 2, 4, 3};
    const double y = 16.5, alpha = 1.5;
    const auto w0 = constrained_optimal_weights(y, lh, alpha);
    const auto w = random_optimal_weights(y, lh, alpha, 9);
    double s0 = 0, s = 0, sum = 0;
    for (std::size_t i = 0; i < lh.size(); ++i) {
        s0 += w0[i] * lh[i];
        s += w[i] * lh[i];
        sum += w[i];
        CHECK(w[i] >= 1 - alpha / 4 - 1e-9);
        CHECK(w[i] <= 1 - alpha / 4 + alpha + 1e-9);
    }
    CHECK(s == doctest::Approx(s0));
    CHECK(sum == doctest::Approx(4.0));
}

TEST_CASE("monte carlo: alpha zero never improves") {
    NoiseSpec n;
    n.bias = {1.2, 0.8, 1.0};
    const auto rows = conjecture_monte_carlo(3, 1000, {0.0, 1.0}, n, 3);
    CHECK(rows[0].p_all_improve == 0.0);
    CHECK(rows[0].share_improved == 0.0);
    CHECK(rows[0].mean_abs_deviation == 0.0);
    CHECK_THROWS_AS(conjecture_monte_carlo(3, 10, {0.0}, n, 3), DomainError);
}

TEST_CASE("monte carlo: opposite-sign biases improve more often than not") {
    NoiseSpec n;
    n.bias = {1.3, 0.8};
    n.sigma = 0.05;
    const auto rows = conjecture_monte_carlo(2, 2000, {1.0}, n, 4);
    CHECK(rows[0].p_all_improve > 0.5);
}

TEST_CASE("monte carlo: unimodal in alpha") {
    NoiseSpec n;
    const auto rows = conjecture_monte_carlo(3, 2000, {0, 0.25, 0.5, 1, 1.5, 2, 2.5, 3}, n, 5);
    CHECK(is_unimodal_interior(rows, monte_carlo_tolerance(rows, 2000)));
    CHECK(rows[1].p_all_improve > rows.back().p_all_improve);
}

TEST_CASE("suite passes and is deterministic") {
    const auto a = run_theory_suite(1);
    for (const auto& c : a.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.passed);
    }
    const auto b = run_theory_suite(1);
    std::ostringstream ja, jb;
    write_suite_json(a, ja);
    write_suite_json(b, jb);
    CHECK(ja.str() == jb.str());
}

}
