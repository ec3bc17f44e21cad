#include "wrcast/theory/region_map.hpp"

#include "wrcast/core/csv.hpp"
#include "wrcast/core/errors.hpp"
#include "wrcast/theory/optimal.hpp"

#include <cmath>

namespace wrcast::theory {

std::string_view region_name(Region r) {
    switch (r) {
    case Region::Both: return "both";
    case Region::OnlyFirst: return "only-1";
    case Region::OnlySecond: return "only-2";
    case Region::Neither: return "neither";
    }
    return "neither";
}

namespace {

std::vector<double> axis(const GridSpec& g) {
    if (!(g.step > 0.0) || g.hi < g.lo) throw DomainError("invalid grid specification");
    std::vector<double> v;
    const auto n = static_cast<long>(std::floor((g.hi - g.lo) / g.step + 1e-9));
    for (long k = 0; k <= n; ++k) v.push_back(g.lo + static_cast<double>(k) * g.step);
    return v;
}

/// Brute-force flags with a boundary flag when any comparison is within tolerance.
struct Brute {
    bool improved[2];
    bool boundary;
};

Brute brute_force(const TheoryInstance& t, double w) {
    Brute b{};
    const double ws[2] = {w, 2.0 - w};
    for (std::size_t i = 0; i < 2; ++i) {
        const double before = std::abs(t.l_hat[i] - t.l[i]);
        const double after = std::abs(ws[i] * t.l_hat[i] - t.l[i]);
        b.improved[i] = after < before;
        if (std::abs(after - before) < kBoundaryTolerance) b.boundary = true;
    }
    return b;
}

bool near_boundary(const TheoryInstance& t) {
    const double s = t.l_hat[0] + t.l_hat[1];
    return std::abs(t.l_hat[0] - t.l_hat[1]) < kBoundaryTolerance || std::abs(t.y - s) < kBoundaryTolerance ||
           std::abs(bias_predicate_g(t, 0)) < kBoundaryTolerance ||
           std::abs(bias_predicate_g(t, 1)) < kBoundaryTolerance;
}

}  // namespace

std::optional<double> corollary_root(double l1, double l2, double l1_hat) {
    const double y = l1 + l2, mid = 0.5 * (l1 + l2);
    double lo, hi;
    if (l1_hat > mid && l1_hat < l1) {
        lo = l2;
        hi = mid;
    } else if (l1_hat > l1) {
        lo = 0.0;
        hi = l2;
    } else {
        return std::nullopt;
    }
    const double b = y - 3.0 * l1_hat - 2.0 * l2;
    const double c = 2.0 * l2 * l1_hat;
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    std::optional<double> found;
    for (double r : {(-b - s) / 2.0, (-b + s) / 2.0}) {
        if (r > lo && r < hi) {
            if (found) return std::nullopt;  // not unique
            found = r;
        }
    }
    return found;
}

RegionMap joint_improvement_map_n2(double l1, double l2, const GridSpec& grid) {
    if (!(l1 > l2 && l2 > 0.0)) throw DomainError("the region map requires l1 > l2 > 0");
    RegionMap m;
    m.l1 = l1;
    m.l2 = l2;
    const auto ax = axis(grid);
    const double mid = 0.5 * (l1 + l2), y = l1 + l2;
    for (double a : ax)
        for (double b : ax) {
            if (!(a > b)) continue;
            RegionCell c;
            c.l1_hat = a;
            c.l2_hat = b;
            const auto t = TheoryInstance::from_components({l1, l2}, {a, b});
            c.w_star = optimal_weight_n2(t.y, a, b);
            const auto bf = brute_force(t, c.w_star);
            c.region = bf.improved[0] ? (bf.improved[1] ? Region::Both : Region::OnlyFirst)
                                      : (bf.improved[1] ? Region::OnlySecond : Region::Neither);
            c.degenerate = bf.boundary || near_boundary(t);
            if (c.degenerate) {
                ++m.degenerate;
                m.cells.push_back(c);
                continue;
            }
            c.sign_rule_agrees = sign_rule_improves(t, 0) == bf.improved[0] && sign_rule_improves(t, 1) == bf.improved[1];
            if (!c.sign_rule_agrees) ++m.sign_mismatches;
            const bool both = c.region == Region::Both;
            if (both) {
                ++m.both_count;
                if ((a - l1) * (b - l2) > 0.0) ++m.both_same_sign;
            }

            if (a > mid && std::abs(a - l1) >= kBoundaryTolerance) {
                c.corollary_applicable = true;
                c.root = corollary_root(l1, l2, a);
                ++m.corollary_checked;
                if (!c.root) {
                    ++m.corollary_mismatches;
                } else if (std::abs(b - *c.root) < kBoundaryTolerance) {
                    c.corollary_applicable = false;
                    --m.corollary_checked;
                } else {
                    c.corollary_both = a < l1 ? (*c.root < b && b < y - a) : (y - a < b && b < *c.root);
                    if (c.corollary_both != both) ++m.corollary_mismatches;
                }
                if (both) {
                    c.observation_applicable = true;
                    ++m.observation_checked;
                    const double w = c.w_star;
                    c.observation_holds = w > 0.0 && w < 2.0 && (a < l1 ? w > 1.0 : w < 1.0);
                    if (!c.observation_holds) ++m.observation_violations;
                }
            }
            m.cells.push_back(c);
        }
    return m;
}

SignRuleSweep sign_rule_sweep(double l1, double l2, const GridSpec& grid) {
    SignRuleSweep s;
    const auto ax = axis(grid);
    for (double a : ax)
        for (double b : ax) {
            if (a == b) continue;
            ++s.cells;
            const auto t = TheoryInstance::from_components({l1, l2}, {a, b});
            const auto bf = brute_force(t, optimal_weight_n2(t.y, a, b));
            if (bf.boundary || near_boundary(t)) {
                ++s.degenerate;
                continue;
            }
            if (sign_rule_improves(t, 0) != bf.improved[0] || sign_rule_improves(t, 1) != bf.improved[1])
                ++s.mismatches;
        }
    return s;
}

void write_region_csv(const RegionMap& map, std::ostream& out, bool header) {
    if (header)
        out << "l1,l2,l1_hat,l2_hat,w_star,region,degenerate,sign_rule_agrees,corollary_applicable,corollary_both,root\n";
    for (const auto& c : map.cells) {
        out << csv::format_number(map.l1) << ',' << csv::format_number(map.l2) << ',' << csv::format_number(c.l1_hat)
            << ',' << csv::format_number(c.l2_hat) << ',' << csv::format_number(c.w_star) << ','
            << region_name(c.region) << ',' << c.degenerate << ',' << c.sign_rule_agrees << ','
            << c.corollary_applicable << ',' << c.corollary_both << ','
            << (c.root ? csv::format_number(*c.root) : std::string()) << '\n';
    }
}

}  // namespace wrcast::theory
