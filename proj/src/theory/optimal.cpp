#include "wrcast/theory/optimal.hpp"

#include "wrcast/core/errors.hpp"

#include <cmath>
#include <numeric>

namespace wrcast::theory {

TheoryInstance TheoryInstance::from_components(std::vector<double> l, std::vector<double> l_hat) {
    if (l.size() != l_hat.size() || l.size() < 2) throw DomainError("instance needs matching vectors of length >= 2");
    TheoryInstance t;
    t.y = std::accumulate(l.begin(), l.end(), 0.0);
    t.l = std::move(l);
    t.l_hat = std::move(l_hat);
    return t;
}

double optimal_weight_n2(double y, double l1_hat, double l2_hat) {
    if (l1_hat == l2_hat) throw DegenerateError("optimal weight undefined for equal estimates");
    return (y - 2.0 * l2_hat) / (l1_hat - l2_hat);
}

double bias_predicate_g(const TheoryInstance& inst, std::size_t i) {
    if (inst.N() != 2 || inst.l.size() != 2) throw DomainError("the bias predicate is defined for two components");
    if (i > 1) throw DomainError("component index must be 0 or 1");
    const double a = inst.l_hat[i], b = inst.l_hat[1 - i], li = inst.l[i];
    return a * a + a * (inst.y - 3.0 * b - 2.0 * li) + 2.0 * li * b;
}

bool sign_rule_improves(const TheoryInstance& inst, std::size_t i) {
    const double g = bias_predicate_g(inst, i);
    const double s = inst.l_hat[0] + inst.l_hat[1];
    return (inst.y > s && g < 0.0) || (inst.y < s && g > 0.0);
}

bool strictly_improves(double l, double l_hat, double w) { return std::abs(w * l_hat - l) < std::abs(l_hat - l); }

bool lemma_predicate(double l, double l_hat, double w) {
    return l_hat * (w - 1.0) * ((w + 1.0) * l_hat - 2.0 * l) < 0.0;
}

ImprovementVerdict improvement_verdict(const TheoryInstance& inst) {
    if (inst.N() != 2 || inst.l.size() != 2) throw DomainError("verdicts are defined for two components");
    const double w = optimal_weight_n2(inst.y, inst.l_hat[0], inst.l_hat[1]);
    ImprovementVerdict v;
    v.w_star = {w, 2.0 - w};
    for (std::size_t i = 0; i < 2; ++i) {
        v.improved.push_back(strictly_improves(inst.l[i], inst.l_hat[i], v.w_star[i]));
        v.predicted.push_back(sign_rule_improves(inst, i));
    }
    return v;
}

bool ImprovementSet::contains(double w) const noexcept {
    if (empty) return false;
    return w > lo && w < hi;
}

ImprovementSet improvement_interval(double l, double l_hat) {
    if (l_hat == 0.0) throw DegenerateError("a zero estimate is unaffected by its weight");
    ImprovementSet s;
    if (l_hat == l) return s;
    const double r = 2.0 * l / l_hat - 1.0;
    s.empty = false;
    s.lo = std::min(1.0, r);
    s.hi = std::max(1.0, r);
    return s;
}

}  // namespace wrcast::theory
