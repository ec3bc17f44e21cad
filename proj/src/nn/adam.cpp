#include "wrcast/nn/adam.hpp"

#include "wrcast/core/errors.hpp"

#include <cmath>

namespace wrcast::nn {

void Adam::step(std::vector<Parameter>& params) {
    if (m_.empty()) {
        for (const auto& p : params) {
            m_.emplace_back(p.value.rows, p.value.cols);
            v_.emplace_back(p.value.rows, p.value.cols);
        }
    }
    if (m_.size() != params.size()) throw StateError("optimizer bound to a different parameter set");
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& p = params[k];
        auto& m = m_[k].data;
        auto& v = v_[k].data;
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double g = p.grad.data[i];
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
            p.value.data[i] -= cfg_.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.epsilon);
        }
    }
}

}  // namespace wrcast::nn
