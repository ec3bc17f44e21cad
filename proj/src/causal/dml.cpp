#include "wrcast/causal/dml.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wrcast::causal {

using gbdt::Matrix;

namespace {

double variance(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

Matrix stack_features(const DmlData& d, std::span<const std::size_t> rows) {
    Matrix Z(rows.size(), d.X.cols + d.W.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < d.X.cols; ++c) Z(i, c) = d.X(rows[i], c);
        for (std::size_t c = 0; c < d.W.cols; ++c) Z(i, d.X.cols + c) = d.W(rows[i], c);
    }
    return Z;
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < A.cols()) throw IdentifiabilityError("final-stage design is rank deficient");
    return qr.solve(b);
}

}  // namespace

DmlData dml_data_from_panel(const PanelDataset& panel) {
    DmlData d;
    d.categories.push_back("none");
    for (const auto& t : panel.promo_types()) d.categories.push_back(t);

    std::vector<std::vector<double>> w_rows;
    std::vector<std::size_t> cat;
    for (const auto& s : panel.series) {
        double level = 0.0;
        std::size_t regular = 0;
        for (std::size_t i = 0; i < s.observed.size(); ++i)
            if (!s.covariates[i].on_promotion() && !s.covariates[i].on_festival()) {
                level += std::log1p(std::max(0.0, s.observed.values[i]));
                ++regular;
            }
        level = regular ? level / static_cast<double>(regular) : 0.0;
        for (std::size_t i = 0; i < s.observed.size(); ++i) {
            const auto& c = s.covariates[i];
            if (!(c.price > 0.0) || !std::isfinite(c.price)) continue;
            const double y = s.observed.values[i];
            if (y < 0.0) throw DataError("sales must be nonnegative for the log outcome");
            const double ref = c.reference_price > 0.0 ? c.reference_price : c.price;
            const auto cf = calendar_fields(s.observed.dates[i]);
            d.Y.push_back(std::log1p(y));
            d.Tr.push_back(std::log(c.price));
            w_rows.push_back({static_cast<double>(cf.year), static_cast<double>(cf.month),
                              static_cast<double>(cf.day), static_cast<double>(cf.weekday), std::log(ref), level});
            std::size_t k = 0;
            if (c.on_promotion())
                k = static_cast<std::size_t>(
                    std::find(d.categories.begin(), d.categories.end(), c.promo_type) - d.categories.begin());
            cat.push_back(k);
        }
    }
    const auto n = d.Y.size();
    d.X = Matrix(n, d.categories.size());
    d.W = Matrix(n, 6);
    for (std::size_t i = 0; i < n; ++i) {
        d.X(i, cat[i]) = 1.0;
        for (std::size_t c = 0; c < 6; ++c) d.W(i, c) = w_rows[i][c];
    }
    return d;
}

double ElasticityModel::theta_for(const std::string& promo_type) const {
    const std::string key = promo_type.empty() ? "none" : promo_type;
    const auto it = std::find(categories.begin(), categories.end(), key);
    if (it == categories.end()) return pooled_theta;
    return theta[static_cast<std::size_t>(it - categories.begin())];
}

ElasticityModel dml_fit(const DmlData& data, const DmlParams& params) {
    const auto n = data.rows();
    if (data.Tr.size() != n || data.X.rows != n || data.W.rows != n)
        throw DomainError("DML inputs have inconsistent row counts");
    if (data.X.cols != data.categories.size()) throw DomainError("category names do not match X columns");
    if (n < params.min_rows)
        throw DataError("DML needs at least " + std::to_string(params.min_rows) + " rows, got " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(data.Y[i]) || !std::isfinite(data.Tr[i])) throw DataError("DML inputs must be finite");
    if (variance(data.Tr) <= 1e-14) throw IdentifiabilityError("treatment (log price) has no variation");

    ElasticityModel m;
    m.categories = data.categories;
    m.fold.assign(n, 0);
    m.predicted_by.assign(n, 0);
    m.y_residual.assign(n, 0.0);
    m.t_residual.assign(n, 0.0);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(mix_seed(params.seed, 0xD31));
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<std::size_t> folds[2];
    for (std::size_t i = 0; i < n; ++i) {
        const int f = i < n / 2 ? 0 : 1;
        m.fold[perm[i]] = f;
    }
    for (std::size_t i = 0; i < n; ++i) folds[m.fold[i]].push_back(i);

    for (int k = 0; k < 2; ++k) {
        const auto& train = folds[k];
        const auto Z = stack_features(data, train);
        std::vector<double> y, t;
        for (auto r : train) {
            y.push_back(data.Y[r]);
            t.push_back(data.Tr[r]);
        }
        m.outcome_models[k] = gbdt::gbdt_fit(Z, y, params.nuisance);
        m.treatment_models[k] = gbdt::gbdt_fit(Z, t, params.nuisance);
    }
    for (int k = 0; k < 2; ++k) {
        const int other = 1 - k;
        const auto Z = stack_features(data, folds[k]);
        for (std::size_t i = 0; i < folds[k].size(); ++i) {
            const auto r = folds[k][i];
            m.predicted_by[r] = other;
            m.y_residual[r] = data.Y[r] - m.outcome_models[other].predict_scalar(Z.row(i));
            m.t_residual[r] = data.Tr[r] - m.treatment_models[other].predict_scalar(Z.row(i));
        }
    }
    if (variance(m.t_residual) <= 1e-14)
        throw IdentifiabilityError("treatment residuals have no variation after conditioning on X and W");

    {
        Eigen::MatrixXd A(static_cast<Eigen::Index>(n), 2);
        Eigen::VectorXd b(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            A(r, 0) = 1.0;
            A(r, 1) = m.t_residual[i];
            b(r) = m.y_residual[i];
        }
        const auto coef = least_squares(A, b);
        m.pooled_theta = coef(1);
        m.intercept = coef(0);
    }

    // Interacted final stage over the categories with enough treatment variation.
    const auto K = data.categories.size();
    std::vector<std::size_t> eligible;
    for (std::size_t c = 0; c < K; ++c) {
        std::vector<double> tc;
        for (std::size_t i = 0; i < n; ++i)
            if (data.X(i, c) > 0.5) tc.push_back(m.t_residual[i]);
        if (tc.size() >= params.min_category_rows && variance(tc) > 1e-10) eligible.push_back(c);
    }
    m.theta.assign(K, m.pooled_theta);
    m.pooled_fallback.assign(K, true);
    if (!eligible.empty()) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i)
            for (auto c : eligible)
                if (data.X(i, c) > 0.5) rows.push_back(i);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                                  static_cast<Eigen::Index>(eligible.size() + 1));
        Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            A(r, 0) = 1.0;
            for (std::size_t e = 0; e < eligible.size(); ++e)
                A(r, static_cast<Eigen::Index>(e + 1)) = m.t_residual[rows[i]] * data.X(rows[i], eligible[e]);
            b(r) = m.y_residual[rows[i]];
        }
        const auto coef = least_squares(A, b);
        m.intercept = coef(0);
        for (std::size_t e = 0; e < eligible.size(); ++e) {
            m.theta[eligible[e]] = coef(static_cast<Eigen::Index>(e + 1));
            m.pooled_fallback[eligible[e]] = false;
        }
    }
    for (double t : m.theta)
        if (!std::isfinite(t)) throw TrainingError("final-stage elasticity is not finite");
    return m;
}

double promotion_uplift(double baseline, double price, double reference_price, double theta) {
    if (!(price > 0.0) || !(reference_price > 0.0)) throw DomainError("prices must be positive");
    return baseline * (std::pow(price / reference_price, theta) - 1.0);
}

std::vector<double> promotion_component(const ElasticityModel& model, std::span<const double> baseline,
                                        std::span<const CovariateRow> plan) {
    if (baseline.size() != plan.size()) throw DomainError("price plan is not aligned with the baseline");
    std::vector<double> out(baseline.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& c = plan[i];
        if (!c.on_promotion()) continue;
        const double ref = std::isfinite(c.reference_price) ? c.reference_price : c.price;
        out[i] = promotion_uplift(baseline[i], c.price, ref, model.theta_for(c.promo_type));
    }
    return out;
}

}  // namespace wrcast::causal
