#include "wrcast/gbdt/tree.hpp"

#include "wrcast/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wrcast::gbdt {

RegressionTree::RegressionTree(std::vector<TreeNode> nodes, int max_depth)
    : nodes_(std::move(nodes)), max_depth_(max_depth) {
    if (nodes_.empty()) throw DomainError("a tree needs at least one node");
    for (const auto& n : nodes_) {
        if (n.is_leaf()) {
            if (!std::isfinite(n.value)) throw DomainError("tree leaf is not finite");
            continue;
        }
        const auto sz = static_cast<int>(nodes_.size());
        if (n.left <= 0 || n.right <= 0 || n.left >= sz || n.right >= sz)
            throw DomainError("tree node has invalid children");
    }
}

double RegressionTree::predict(std::span<const double> x) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
        const auto& n = nodes_[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
    }
    return nodes_[i].value;
}

int RegressionTree::depth() const {
    std::vector<int> d(nodes_.size(), 0);
    int best = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        best = std::max(best, d[i]);
        if (!nodes_[i].is_leaf()) {
            d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
        }
    }
    return best;
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

SortedColumns sort_columns(const Matrix& X) {
    SortedColumns s;
    s.order.resize(X.cols);
    for (std::size_t f = 0; f < X.cols; ++f) {
        auto& o = s.order[f];
        o.resize(X.rows);
        std::iota(o.begin(), o.end(), std::size_t{0});
        std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return X(a, f) < X(b, f); });
    }
    return s;
}

RegressionTree fit_tree(const Matrix& X, std::span<const double> targets, std::span<const double> hessians,
                        const TreeParams& params) {
    return fit_tree(X, targets, hessians, params, sort_columns(X));
}

namespace {

struct Pending {
    std::size_t node;
    int depth;
};

}  // namespace

RegressionTree fit_tree(const Matrix& X, std::span<const double> targets, std::span<const double> hessians,
                        const TreeParams& params, const SortedColumns& sorted) {
    const std::size_t n = X.rows;
    if (n == 0) throw DomainError("cannot fit a tree on empty data");
    if (targets.size() != n) throw DomainError("targets length does not match feature rows");
    if (!hessians.empty() && hessians.size() != n) throw DomainError("hessians length does not match feature rows");
    if (params.min_leaf < 1) throw DomainError("min_leaf must be at least 1");
    if (params.max_depth < 0) throw DomainError("max_depth must be nonnegative");

    auto hess = [&](std::size_t r) { return hessians.empty() ? 1.0 : hessians[r]; };

    std::vector<int> node_of(n, 0);
    std::vector<TreeNode> nodes(1);
    std::vector<Pending> stack{{0, 0}};
    // Breadth-first so node ids grow with depth.
    for (std::size_t head = 0; head < stack.size(); ++head) {
        const auto [id, depth] = stack[head];
        double g = 0.0, h = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (node_of[r] != static_cast<int>(id)) continue;
            g += targets[r];
            h += hess(r);
            ++count;
        }
        if (h <= 0.0) throw DomainError("leaf hessian sum must be positive");
        nodes[id].value = g / h;
        if (depth >= params.max_depth || count < 2 * params.min_leaf) continue;

        const double parent = g * g / h;
        double best_gain = 1e-12 * std::max(1.0, std::abs(parent));
        int best_feature = -1;
        double best_threshold = 0.0;
        for (std::size_t f = 0; f < X.cols; ++f) {
            double gl = 0.0, hl = 0.0;
            std::size_t cl = 0;
            double prev = 0.0;
            for (std::size_t r : sorted.order[f]) {
                if (node_of[r] != static_cast<int>(id)) continue;
                const double v = X(r, f);
                if (cl >= params.min_leaf && count - cl >= params.min_leaf && v > prev) {
                    const double hr = h - hl;
                    if (hl > 0.0 && hr > 0.0) {
                        const double gr = g - gl;
                        const double gain = gl * gl / hl + gr * gr / hr - parent;
                        if (gain > best_gain) {
                            best_gain = gain;
                            best_feature = static_cast<int>(f);
                            best_threshold = prev + 0.5 * (v - prev);
                        }
                    }
                }
                gl += targets[r];
                hl += hess(r);
                ++cl;
                prev = v;
            }
        }
        if (best_feature < 0) continue;

        const auto left = nodes.size();
        nodes.resize(left + 2);
        nodes[id].feature = best_feature;
        nodes[id].threshold = best_threshold;
        nodes[id].left = static_cast<int>(left);
        nodes[id].right = static_cast<int>(left + 1);
        for (std::size_t r = 0; r < n; ++r) {
            if (node_of[r] != static_cast<int>(id)) continue;
            node_of[r] = static_cast<int>(X(r, static_cast<std::size_t>(best_feature)) < best_threshold ? left : left + 1);
        }
        stack.push_back({left, depth + 1});
        stack.push_back({left + 1, depth + 1});
    }
    for (auto& nd : nodes)
        if (!nd.is_leaf()) nd.value = 0.0;
    return RegressionTree(std::move(nodes), params.max_depth);
}

}  // namespace wrcast::gbdt
