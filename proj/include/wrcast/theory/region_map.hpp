#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

namespace wrcast::theory {

enum class Region { Both, OnlyFirst, OnlySecond, Neither };
std::string_view region_name(Region r);

/// Estimate grid lo, lo + step, ..., <= hi (both axes).
struct GridSpec {
    double step = 0.5;
    double lo = 0.5;
    double hi = 20.0;
};

/// Cells closer than this to a predicate boundary are excluded.
inline constexpr double kBoundaryTolerance = 1e-9;

struct RegionCell {
    double l1_hat = 0.0;
    double l2_hat = 0.0;
    double w_star = 0.0;
    Region region = Region::Neither;  // brute force at w*
    bool degenerate = false;
    bool sign_rule_agrees = true;
    bool corollary_applicable = false;
    bool corollary_both = false;  // threshold characterisation
    std::optional<double> root;   // l*_20 or l*_21
    bool observation_applicable = false;
    bool observation_holds = true;
};

struct RegionMap {
    double l1 = 0.0;
    double l2 = 0.0;
    std::vector<RegionCell> cells;
    std::size_t degenerate = 0;
    std::size_t sign_mismatches = 0;
    std::size_t corollary_checked = 0;
    std::size_t corollary_mismatches = 0;
    std::size_t observation_checked = 0;
    std::size_t observation_violations = 0;
    std::size_t both_count = 0;
    std::size_t both_same_sign = 0;  // "both" cells where the two biases share a sign
};

/// Root of g(l2_hat) = 0 inside the interval the threshold characterisation
/// names: (l2, (l1 + l2)/2) when (l1 + l2)/2 < l1_hat < l1, (0, l2) when l1_hat > l1.
std::optional<double> corollary_root(double l1, double l2, double l1_hat);

/// Classifies every non-degenerate grid cell with l1_hat > l2_hat (y = l1 + l2)
/// by brute force and checks the sign rule, the threshold characterisation
/// (where l1_hat > (l1 + l2)/2) and the feasible range of w*.
/// Requires l1 > l2 > 0.
RegionMap joint_improvement_map_n2(double l1, double l2, const GridSpec& grid = {});

/// Sign-rule check over every ordered estimate pair with distinct values
/// (either order) for one (l1, l2).
struct SignRuleSweep {
    std::size_t cells = 0;
    std::size_t degenerate = 0;
    std::size_t mismatches = 0;
};
SignRuleSweep sign_rule_sweep(double l1, double l2, const GridSpec& grid = {});

/// CSV `l1,l2,l1_hat,l2_hat,w_star,region,degenerate,sign_rule_agrees,corollary_applicable,corollary_both,root`.
void write_region_csv(const RegionMap& map, std::ostream& out, bool header = true);

}  // namespace wrcast::theory
