#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wrcast::gbdt {

/// Dense row-major feature matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
};

/// Internal nodes have feature >= 0; rows with x[feature] < threshold go left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const noexcept { return feature < 0; }
};

class RegressionTree {
public:
    RegressionTree() = default;
    RegressionTree(std::vector<TreeNode> nodes, int max_depth);

    double predict(std::span<const double> x) const;
    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    int max_depth() const noexcept { return max_depth_; }
    int depth() const;
    std::size_t leaf_count() const;

private:
    std::vector<TreeNode> nodes_;
    int max_depth_ = 0;
};

struct TreeParams {
    int max_depth = 3;
    std::size_t min_leaf = 1;
};

/// Per-feature row orderings, reusable across trees fitted on the same X.
struct SortedColumns {
    std::vector<std::vector<std::size_t>> order;
};
SortedColumns sort_columns(const Matrix& X);

/// Greedy exact-split regression tree. Leaf value = sum(targets) / sum(hessians)
/// (hessians default to 1, giving the mean). Split gain is the Newton score
/// G_L^2/H_L + G_R^2/H_R - G^2/H; candidate thresholds are midpoints between
/// consecutive distinct values; ties keep the lowest feature, then threshold.
RegressionTree fit_tree(const Matrix& X, std::span<const double> targets, std::span<const double> hessians,
                        const TreeParams& params);
RegressionTree fit_tree(const Matrix& X, std::span<const double> targets, std::span<const double> hessians,
                        const TreeParams& params, const SortedColumns& sorted);

}  // namespace wrcast::gbdt
