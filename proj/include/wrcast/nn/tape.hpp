#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace wrcast::nn {

/// Row-major 2-D fp64 array.
struct Tensor {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const noexcept { return data.size(); }
    bool same_shape(const Tensor& o) const noexcept { return rows == o.rows && cols == o.cols; }
};

/// Trainable array with its accumulated gradient.
struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;

    Parameter() = default;
    Parameter(std::string n, std::size_t r, std::size_t c) : name(std::move(n)), value(r, c), grad(r, c) {}
    void zero_grad() { std::fill(grad.data.begin(), grad.data.end(), 0.0); }
};

using Var = std::size_t;

/// Reverse-mode tape. Nodes are appended in evaluation order, so the node
/// list is already topologically sorted.
class Tape {
public:
    Var constant(Tensor value);
    /// Leaf bound to a parameter; backward() adds the adjoint into p.grad.
    Var param(Parameter& p);

    Var add(Var a, Var b);
    Var mul(Var a, Var b);  // elementwise
    Var matmul(Var a, Var b);
    Var add_row(Var a, Var bias);  // bias is 1 x cols, added to every row
    Var scale_shift(Var a, double scale, double shift);
    Var relu(Var a);
    Var softmax_rows(Var a);
    /// Kernel-2 causal convolution: out[t] = x[t] W_0 + x[t-d] W_1 + b, with
    /// x[t-d] = 0 before the start. w stacks W_0 over W_1 (2*cin x cout).
    Var conv1d_causal(Var x, Var w, Var b, std::size_t dilation);
    Var concat_cols(const std::vector<Var>& parts);
    Var slice_rows(Var a, std::size_t begin, std::size_t count);
    Var broadcast_rows(Var a, std::size_t rows);  // 1 x c -> rows x c
    Var flatten(Var a);                           // r x c -> 1 x rc
    Var sum_cols(Var a);                          // r x c -> r x 1
    Var sum(Var a);                               // -> 1 x 1
    /// Sum of pinball losses between pred and target (same shape). At a tie
    /// (within 1e-12 relative) the subgradient is 0.
    Var quantile_loss(Var pred, Var target, double p);

    const Tensor& value(Var v) const;
    const Tensor& grad(Var v) const;

    /// Seeds d(loss)/d(loss) = 1 and propagates. `loss` must be 1 x 1.
    /// Throws StateError if the tape is empty or `loss` is not a node.
    void backward(Var loss);

    std::size_t size() const noexcept { return nodes_.size(); }
    void clear() { nodes_.clear(); }

private:
    enum class Op {
        Leaf, Param, Add, Mul, MatMul, AddRow, ScaleShift, Relu, Softmax, Conv, Concat, Slice,
        Broadcast, Flatten, SumCols, Sum, QuantileLoss
    };
    struct Node {
        Op op = Op::Leaf;
        std::vector<Var> in;
        Tensor value;
        Tensor grad;
        Parameter* param = nullptr;
        double a = 0.0, b = 0.0;  // op constants
        std::size_t k = 0;        // dilation / slice start
    };
    Var push(Node n);
    const Node& at(Var v) const;

    std::vector<Node> nodes_;
};

}  // namespace wrcast::nn
