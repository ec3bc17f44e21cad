#pragma once

#include <cstddef>
#include <vector>

namespace wrcast::theory {

/// Actual total y, true components l and their estimates l_hat.
struct TheoryInstance {
    double y = 0.0;
    std::vector<double> l;
    std::vector<double> l_hat;

    std::size_t N() const noexcept { return l_hat.size(); }
    /// Residual-free instance, y = sum(l).
    static TheoryInstance from_components(std::vector<double> l, std::vector<double> l_hat);
};

/// w* = (y - 2 l2_hat) / (l1_hat - l2_hat); the second weight is 2 - w*.
/// Throws DegenerateError when the estimates are equal.
double optimal_weight_n2(double y, double l1_hat, double l2_hat);

/// g(l_hat_i) = l_hat_i^2 + l_hat_i (y - 3 l_hat_{-i} - 2 l_i) + 2 l_i l_hat_{-i}
/// for component i in {0, 1}. Throws DomainError unless N = 2.
double bias_predicate_g(const TheoryInstance& inst, std::size_t i);

/// Sign rule: (y > sum l_hat and g < 0) or (y < sum l_hat and g > 0).
bool sign_rule_improves(const TheoryInstance& inst, std::size_t i);

/// |w l_hat - l| < |l_hat - l|, evaluated directly.
bool strictly_improves(double l, double l_hat, double w);

/// l_hat (w - 1) ((w + 1) l_hat - 2 l) < 0.
bool lemma_predicate(double l, double l_hat, double w);

struct ImprovementVerdict {
    std::vector<bool> improved;         // brute force at w*
    std::vector<bool> predicted;        // sign rule
    std::vector<double> w_star;         // (w*, 2 - w*)
};

/// Both flags for an N = 2 instance.
ImprovementVerdict improvement_verdict(const TheoryInstance& inst);

/// Set of weights that strictly reduce |w l_hat - l|: the open interval
/// between 1 and 2l/l_hat - 1, for either sign of l_hat. Empty when l_hat = l.
struct ImprovementSet {
    bool empty = true;
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double w) const noexcept;
};

/// Throws DegenerateError for l_hat = 0 (the weight has no effect).
ImprovementSet improvement_interval(double l, double l_hat);

}  // namespace wrcast::theory
