#include "wrcast/theory/suite.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/random.hpp"
#include "wrcast/theory/optimal.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace wrcast::theory {

bool TheorySuiteReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

namespace {

SuiteCheck optimal_weight_check(std::uint64_t seed) {
    Rng rng(seed);
    std::size_t bad = 0, n = 0;
    while (n < 10000) {
        const double y = rng.uniform(-20.0, 20.0), a = rng.uniform(-10.0, 10.0), b = rng.uniform(-10.0, 10.0);
        if (std::abs(a - b) < 1e-3) continue;
        ++n;
        const double w = optimal_weight_n2(y, a, b);
        const double e_star = std::pow(y - (w * a + (2.0 - w) * b), 2);
        const double e_one = std::pow(y - a - b, 2);
        const bool ok = e_star <= 1e-9 && e_star <= e_one && (std::abs(y - a - b) <= 1e-9 || e_star < e_one);
        bad += !ok;
    }
    return {"optimal_weight_n2", bad == 0, std::to_string(bad) + " failures in " + std::to_string(n)};
}

SuiteCheck interval_check(std::uint64_t seed) {
    Rng rng(seed);
    std::size_t bad = 0, n = 0;
    while (n < 10000) {
        const double l = rng.uniform(-10.0, 10.0), lh = rng.uniform(-10.0, 10.0), w = rng.uniform(-3.0, 4.0);
        if (std::abs(lh) < 1e-6) continue;
        ++n;
        const auto set = improvement_interval(l, lh);
        const bool in = set.contains(w);
        bad += (in != lemma_predicate(l, lh, w)) || (in != strictly_improves(l, lh, w));
    }
    return {"improvement_interval", bad == 0, std::to_string(bad) + " disagreements in " + std::to_string(n)};
}

}  // namespace

TheorySuiteReport run_theory_suite(std::uint64_t seed) {
    TheorySuiteReport rep;
    rep.checks.push_back(optimal_weight_check(mix_seed(seed, 1)));
    rep.checks.push_back(interval_check(mix_seed(seed, 2)));

    SignRuleSweep sweep;
    std::size_t sm = 0, cc = 0, cm = 0, oc = 0, ov = 0, both_same = 0, both = 0;
    for (int l1 = 1; l1 <= 10; ++l1)
        for (int l2 = 1; l2 <= 10; ++l2) {
            const auto s = sign_rule_sweep(l1, l2);
            sweep.cells += s.cells;
            sweep.degenerate += s.degenerate;
            sweep.mismatches += s.mismatches;
            if (l1 <= l2) continue;
            auto m = joint_improvement_map_n2(l1, l2);
            sm += m.sign_mismatches;
            cc += m.corollary_checked;
            cm += m.corollary_mismatches;
            oc += m.observation_checked;
            ov += m.observation_violations;
            both += m.both_count;
            both_same += m.both_same_sign;
            rep.maps.push_back(std::move(m));
        }
    rep.checks.push_back({"sign_rule", sweep.mismatches == 0 && sm == 0,
                          std::to_string(sweep.mismatches + sm) + " mismatches in " + std::to_string(sweep.cells) +
                              " cells (" + std::to_string(sweep.degenerate) + " boundary cells excluded)"});
    rep.checks.push_back({"corollary_thresholds", cm == 0 && cc > 0,
                          std::to_string(cm) + " mismatches in " + std::to_string(cc) + " cells"});
    rep.checks.push_back({"observation_ranges", ov == 0 && oc > 0,
                          std::to_string(ov) + " violations in " + std::to_string(oc) + " cells"});
    rep.checks.push_back({"same_sign_never_both", both_same == 0 && both > 0,
                          std::to_string(both_same) + " same-sign cells among " + std::to_string(both) + " 'both' cells"});

    NoiseSpec noise;
    rep.conjecture = conjecture_monte_carlo(3, 2000, {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}, noise, mix_seed(seed, 3));
    rep.checks.push_back({"alpha0_no_improvement", rep.conjecture.front().p_all_improve == 0.0,
                          "p = " + std::to_string(rep.conjecture.front().p_all_improve)});
    const double tol = monte_carlo_tolerance(rep.conjecture, 2000);
    rep.checks.push_back({"conjecture_unimodal", is_unimodal_interior(rep.conjecture, tol),
                          "N = 3, sigma = 0.2, noise tolerance " + std::to_string(tol)});

    NoiseSpec opposite;
    opposite.bias = {1.3, 0.8};
    opposite.sigma = 0.05;
    const auto opp = conjecture_monte_carlo(2, 2000, {1.0}, opposite, mix_seed(seed, 4));
    rep.checks.push_back({"opposite_sign_improves", opp.front().p_all_improve > 0.5,
                          "p = " + std::to_string(opp.front().p_all_improve)});
    return rep;
}

void write_suite_json(const TheorySuiteReport& rep, std::ostream& out) {
    nlohmann::json j;
    j["passed"] = rep.passed();
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = checks;
    nlohmann::json conj = nlohmann::json::array();
    for (const auto& r : rep.conjecture)
        conj.push_back({{"alpha", r.alpha},
                        {"p_all_improve", r.p_all_improve},
                        {"share_improved", r.share_improved},
                        {"mean_abs_deviation", r.mean_abs_deviation}});
    j["conjecture"] = conj;
    out << j.dump(2) << '\n';
}

}  // namespace wrcast::theory
