#include "wrcast/nn/tape.hpp"

#include "wrcast/core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wrcast::nn {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("tensor shape mismatch in ") + what);
}

}  // namespace

Var Tape::push(Node n) {
    n.grad = Tensor(n.value.rows, n.value.cols);
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

const Tape::Node& Tape::at(Var v) const {
    if (v >= nodes_.size()) throw StateError("variable is not on the tape");
    return nodes_[v];
}

const Tensor& Tape::value(Var v) const { return at(v).value; }
const Tensor& Tape::grad(Var v) const { return at(v).grad; }

Var Tape::constant(Tensor value) {
    Node n;
    n.value = std::move(value);
    return push(std::move(n));
}

Var Tape::param(Parameter& p) {
    Node n;
    n.op = Op::Param;
    n.value = p.value;
    n.param = &p;
    return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
    const auto& A = at(a).value;
    const auto& B = at(b).value;
    require(A.same_shape(B), "add");
    Node n;
    n.op = Op::Add;
    n.in = {a, b};
    n.value = A;
    for (std::size_t i = 0; i < B.size(); ++i) n.value.data[i] += B.data[i];
    return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
    const auto& A = at(a).value;
    const auto& B = at(b).value;
    require(A.same_shape(B), "mul");
    Node n;
    n.op = Op::Mul;
    n.in = {a, b};
    n.value = A;
    for (std::size_t i = 0; i < B.size(); ++i) n.value.data[i] *= B.data[i];
    return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
    const auto& A = at(a).value;
    const auto& B = at(b).value;
    require(A.cols == B.rows, "matmul");
    Node n;
    n.op = Op::MatMul;
    n.in = {a, b};
    n.value = Tensor(A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            const double aik = A(i, k);
            if (aik == 0.0) continue;
            const double* brow = &B.data[k * B.cols];
            double* crow = &n.value.data[i * B.cols];
            for (std::size_t j = 0; j < B.cols; ++j) crow[j] += aik * brow[j];
        }
    return push(std::move(n));
}

Var Tape::add_row(Var a, Var bias) {
    const auto& A = at(a).value;
    const auto& b = at(bias).value;
    require(b.rows == 1 && b.cols == A.cols, "add_row");
    Node n;
    n.op = Op::AddRow;
    n.in = {a, bias};
    n.value = A;
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) n.value(i, j) += b.data[j];
    return push(std::move(n));
}

Var Tape::scale_shift(Var a, double scale, double shift) {
    Node n;
    n.op = Op::ScaleShift;
    n.in = {a};
    n.a = scale;
    n.b = shift;
    n.value = at(a).value;
    for (auto& v : n.value.data) v = scale * v + shift;
    return push(std::move(n));
}

Var Tape::relu(Var a) {
    Node n;
    n.op = Op::Relu;
    n.in = {a};
    n.value = at(a).value;
    for (auto& v : n.value.data) v = v > 0.0 ? v : 0.0;
    return push(std::move(n));
}

Var Tape::softmax_rows(Var a) {
    const auto& A = at(a).value;
    Node n;
    n.op = Op::Softmax;
    n.in = {a};
    n.value = Tensor(A.rows, A.cols);
    for (std::size_t i = 0; i < A.rows; ++i) {
        double mx = -INFINITY;
        for (std::size_t j = 0; j < A.cols; ++j) mx = std::max(mx, A(i, j));
        double z = 0.0;
        for (std::size_t j = 0; j < A.cols; ++j) z += n.value(i, j) = std::exp(A(i, j) - mx);
        for (std::size_t j = 0; j < A.cols; ++j) n.value(i, j) /= z;
    }
    return push(std::move(n));
}

Var Tape::conv1d_causal(Var x, Var w, Var b, std::size_t dilation) {
    const auto& X = at(x).value;
    const auto& W = at(w).value;
    const auto& B = at(b).value;
    require(W.rows == 2 * X.cols && B.rows == 1 && B.cols == W.cols, "conv1d_causal");
    const auto cin = X.cols, cout = W.cols;
    Node n;
    n.op = Op::Conv;
    n.in = {x, w, b};
    n.k = dilation;
    n.value = Tensor(X.rows, cout);
    for (std::size_t t = 0; t < X.rows; ++t) {
        double* o = &n.value.data[t * cout];
        for (std::size_t j = 0; j < cout; ++j) o[j] = B.data[j];
        for (std::size_t c = 0; c < cin; ++c) {
            const double v = X(t, c);
            const double* wr = &W.data[c * cout];
            for (std::size_t j = 0; j < cout; ++j) o[j] += v * wr[j];
        }
        if (t >= dilation)
            for (std::size_t c = 0; c < cin; ++c) {
                const double v = X(t - dilation, c);
                const double* wr = &W.data[(cin + c) * cout];
                for (std::size_t j = 0; j < cout; ++j) o[j] += v * wr[j];
            }
    }
    return push(std::move(n));
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
    require(!parts.empty(), "concat_cols");
    const auto rows = at(parts[0]).value.rows;
    std::size_t cols = 0;
    for (auto p : parts) {
        require(at(p).value.rows == rows, "concat_cols");
        cols += at(p).value.cols;
    }
    Node n;
    n.op = Op::Concat;
    n.in = parts;
    n.value = Tensor(rows, cols);
    std::size_t off = 0;
    for (auto p : parts) {
        const auto& P = at(p).value;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < P.cols; ++j) n.value(i, off + j) = P(i, j);
        off += P.cols;
    }
    return push(std::move(n));
}

Var Tape::slice_rows(Var a, std::size_t begin, std::size_t count) {
    const auto& A = at(a).value;
    require(begin + count <= A.rows, "slice_rows");
    Node n;
    n.op = Op::Slice;
    n.in = {a};
    n.k = begin;
    n.value = Tensor(count, A.cols);
    std::copy(A.data.begin() + static_cast<std::ptrdiff_t>(begin * A.cols),
              A.data.begin() + static_cast<std::ptrdiff_t>((begin + count) * A.cols), n.value.data.begin());
    return push(std::move(n));
}

Var Tape::broadcast_rows(Var a, std::size_t rows) {
    const auto& A = at(a).value;
    require(A.rows == 1, "broadcast_rows");
    Node n;
    n.op = Op::Broadcast;
    n.in = {a};
    n.value = Tensor(rows, A.cols);
    for (std::size_t i = 0; i < rows; ++i)
        std::copy(A.data.begin(), A.data.end(), n.value.data.begin() + static_cast<std::ptrdiff_t>(i * A.cols));
    return push(std::move(n));
}

Var Tape::flatten(Var a) {
    Node n;
    n.op = Op::Flatten;
    n.in = {a};
    n.value = at(a).value;
    n.value.cols = n.value.size();
    n.value.rows = 1;
    return push(std::move(n));
}

Var Tape::sum_cols(Var a) {
    const auto& A = at(a).value;
    Node n;
    n.op = Op::SumCols;
    n.in = {a};
    n.value = Tensor(A.rows, 1);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) n.value.data[i] += A(i, j);
    return push(std::move(n));
}

Var Tape::sum(Var a) {
    Node n;
    n.op = Op::Sum;
    n.in = {a};
    n.value = Tensor(1, 1);
    for (double v : at(a).value.data) n.value.data[0] += v;
    return push(std::move(n));
}

Var Tape::quantile_loss(Var pred, Var target, double p) {
    const auto& P = at(pred).value;
    const auto& Y = at(target).value;
    require(P.same_shape(Y), "quantile_loss");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
    Node n;
    n.op = Op::QuantileLoss;
    n.in = {pred, target};
    n.a = p;
    n.value = Tensor(1, 1);
    for (std::size_t i = 0; i < P.size(); ++i) {
        const double d = Y.data[i] - P.data[i];
        n.value.data[0] += d > 0.0 ? p * d : (p - 1.0) * d;
    }
    return push(std::move(n));
}

void Tape::backward(Var loss) {
    if (nodes_.empty()) throw StateError("backward called before any forward computation");
    if (loss >= nodes_.size()) throw StateError("loss variable is not on the tape");
    if (nodes_[loss].value.size() != 1) throw StateError("backward needs a scalar loss");
    for (auto& n : nodes_) std::fill(n.grad.data.begin(), n.grad.data.end(), 0.0);
    nodes_[loss].grad.data[0] = 1.0;

    for (std::size_t idx = loss + 1; idx-- > 0;) {
        Node& n = nodes_[idx];
        const Tensor& g = n.grad;
        switch (n.op) {
        case Op::Leaf:
            break;
        case Op::Param:
            for (std::size_t i = 0; i < g.size(); ++i) n.param->grad.data[i] += g.data[i];
            break;
        case Op::Add:
            for (auto in : n.in) {
                auto& d = nodes_[in].grad.data;
                for (std::size_t i = 0; i < g.size(); ++i) d[i] += g.data[i];
            }
            break;
        case Op::Mul: {
            auto& A = nodes_[n.in[0]];
            auto& B = nodes_[n.in[1]];
            for (std::size_t i = 0; i < g.size(); ++i) {
                A.grad.data[i] += g.data[i] * B.value.data[i];
                B.grad.data[i] += g.data[i] * A.value.data[i];
            }
            break;
        }
        case Op::MatMul: {
            auto& A = nodes_[n.in[0]];
            auto& B = nodes_[n.in[1]];
            const auto m = A.value.rows, kk = A.value.cols, c = B.value.cols;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < kk; ++k) {
                    const double* grow = &g.data[i * c];
                    const double* brow = &B.value.data[k * c];
                    double* gbrow = &B.grad.data[k * c];
                    const double aik = A.value.data[i * kk + k];
                    double acc = 0.0;
                    for (std::size_t j = 0; j < c; ++j) {
                        acc += grow[j] * brow[j];
                        gbrow[j] += aik * grow[j];
                    }
                    A.grad.data[i * kk + k] += acc;
                }
            break;
        }
        case Op::AddRow: {
            auto& A = nodes_[n.in[0]];
            auto& B = nodes_[n.in[1]];
            for (std::size_t i = 0; i < g.rows; ++i)
                for (std::size_t j = 0; j < g.cols; ++j) {
                    A.grad(i, j) += g(i, j);
                    B.grad.data[j] += g(i, j);
                }
            break;
        }
        case Op::ScaleShift: {
            auto& d = nodes_[n.in[0]].grad.data;
            for (std::size_t i = 0; i < g.size(); ++i) d[i] += n.a * g.data[i];
            break;
        }
        case Op::Relu: {
            auto& A = nodes_[n.in[0]];
            for (std::size_t i = 0; i < g.size(); ++i)
                if (A.value.data[i] > 0.0) A.grad.data[i] += g.data[i];
            break;
        }
        case Op::Softmax: {
            auto& A = nodes_[n.in[0]];
            for (std::size_t i = 0; i < g.rows; ++i) {
                double dot = 0.0;
                for (std::size_t j = 0; j < g.cols; ++j) dot += g(i, j) * n.value(i, j);
                for (std::size_t j = 0; j < g.cols; ++j) A.grad(i, j) += n.value(i, j) * (g(i, j) - dot);
            }
            break;
        }
        case Op::Conv: {
            auto& X = nodes_[n.in[0]];
            auto& W = nodes_[n.in[1]];
            auto& B = nodes_[n.in[2]];
            const auto cin = X.value.cols, cout = W.value.cols, d = n.k;
            for (std::size_t t = 0; t < g.rows; ++t) {
                const double* gr = &g.data[t * cout];
                for (std::size_t j = 0; j < cout; ++j) B.grad.data[j] += gr[j];
                for (std::size_t c = 0; c < cin; ++c) {
                    const double* wr = &W.value.data[c * cout];
                    double* gwr = &W.grad.data[c * cout];
                    const double v = X.value(t, c);
                    double acc = 0.0;
                    for (std::size_t j = 0; j < cout; ++j) {
                        acc += gr[j] * wr[j];
                        gwr[j] += v * gr[j];
                    }
                    X.grad(t, c) += acc;
                }
                if (t >= d)
                    for (std::size_t c = 0; c < cin; ++c) {
                        const double* wr = &W.value.data[(cin + c) * cout];
                        double* gwr = &W.grad.data[(cin + c) * cout];
                        const double v = X.value(t - d, c);
                        double acc = 0.0;
                        for (std::size_t j = 0; j < cout; ++j) {
                            acc += gr[j] * wr[j];
                            gwr[j] += v * gr[j];
                        }
                        X.grad(t - d, c) += acc;
                    }
            }
            break;
        }
        case Op::Concat: {
            std::size_t off = 0;
            for (auto in : n.in) {
                auto& P = nodes_[in];
                for (std::size_t i = 0; i < g.rows; ++i)
                    for (std::size_t j = 0; j < P.value.cols; ++j) P.grad(i, j) += g(i, off + j);
                off += P.value.cols;
            }
            break;
        }
        case Op::Slice: {
            auto& d = nodes_[n.in[0]].grad.data;
            const auto base = n.k * g.cols;
            for (std::size_t i = 0; i < g.size(); ++i) d[base + i] += g.data[i];
            break;
        }
        case Op::Broadcast: {
            auto& d = nodes_[n.in[0]].grad.data;
            for (std::size_t i = 0; i < g.rows; ++i)
                for (std::size_t j = 0; j < g.cols; ++j) d[j] += g(i, j);
            break;
        }
        case Op::Flatten: {
            auto& d = nodes_[n.in[0]].grad.data;
            for (std::size_t i = 0; i < g.size(); ++i) d[i] += g.data[i];
            break;
        }
        case Op::SumCols: {
            auto& A = nodes_[n.in[0]];
            for (std::size_t i = 0; i < A.value.rows; ++i)
                for (std::size_t j = 0; j < A.value.cols; ++j) A.grad(i, j) += g.data[i];
            break;
        }
        case Op::Sum: {
            auto& d = nodes_[n.in[0]].grad.data;
            for (auto& v : d) v += g.data[0];
            break;
        }
        case Op::QuantileLoss: {
            auto& P = nodes_[n.in[0]];
            auto& Y = nodes_[n.in[1]];
            const double p = n.a;
            for (std::size_t i = 0; i < P.value.size(); ++i) {
                const double d = Y.value.data[i] - P.value.data[i];
                // ties up to rounding
                const double tol = 1e-12 * std::max({1.0, std::abs(Y.value.data[i]), std::abs(P.value.data[i])});
                const double dp = d > tol ? -p : (d < -tol ? 1.0 - p : 0.0);
                P.grad.data[i] += g.data[0] * dp;
                Y.grad.data[i] -= g.data[0] * dp;
            }
            break;
        }
        }
    }
}

}  // namespace wrcast::nn
