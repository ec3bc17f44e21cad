#include "wrcast/bench/experiments.hpp"

#include "wrcast/core/config.hpp"
#include "wrcast/core/errors.hpp"
#include "wrcast/core/log.hpp"
#include "wrcast/core/metrics.hpp"
#include "wrcast/core/random.hpp"
#include "wrcast/wr/mlp_combiner.hpp"
#include "wrcast/wr/weights.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

namespace wrcast::bench {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Scores {
    double p50 = 0.0, rmse = 0.0;
};

Scores score(const std::vector<ForecastWindow>& test, const std::vector<std::vector<double>>& yhat) {
    std::vector<std::pair<double, double>> sums, pairs;
    for (std::size_t i = 0; i < test.size(); ++i) {
        double sy = 0.0, sf = 0.0;
        for (std::size_t j = 0; j < test[i].target.size(); ++j) {
            sy += test[i].target[j];
            sf += yhat[i][j];
            pairs.emplace_back(test[i].target[j], yhat[i][j]);
        }
        sums.emplace_back(sf, sy);
    }
    return {p50_ql(sums), rmse(pairs)};
}

std::vector<double> additive(const wr::ComponentMatrix& c) {
    std::vector<double> out(c.horizon(), 0.0);
    for (const auto& row : c.values)
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += row[j];
    return out;
}

nn::NetConfig net_for(const BenchConfig& cfg, std::size_t N) {
    nn::NetConfig n = cfg.net;
    n.T = cfg.T;
    n.H = cfg.H;
    n.N = N;
    return n;
}

struct BiasAccumulator {
    std::vector<std::string> names;
    std::vector<double> est, mod;
    std::vector<std::size_t> improved, count;

    void add(const wr::ComponentMatrix& truth, const wr::ComponentMatrix& hat, const wr::WrOutput& out) {
        if (names.empty()) {
            names = hat.names;
            est.assign(names.size(), 0.0);
            mod.assign(names.size(), 0.0);
            improved.assign(names.size(), 0);
            count.assign(names.size(), 0);
        }
        for (std::size_t k = 0; k < names.size(); ++k)
            for (std::size_t j = 0; j < hat.horizon(); ++j) {
                const double l = truth.values[k][j];
                const double e0 = std::abs(hat.values[k][j] - l);
                if (e0 <= 1e-12) continue;
                const double e1 = std::abs(out.modified[k][j] - l);
                est[k] += e0;
                mod[k] += e1;
                improved[k] += e1 < e0;
                ++count[k];
            }
    }

    void emit(const std::string& model, std::vector<ComponentBias>& into) const {
        for (std::size_t k = 0; k < names.size(); ++k) {
            ComponentBias b;
            b.model = model;
            b.component = names[k];
            b.count = count[k];
            if (count[k]) {
                const double n = static_cast<double>(count[k]);
                b.mean_abs_estimate_error = est[k] / n;
                b.mean_abs_modified_error = mod[k] / n;
                b.share_improved = static_cast<double>(improved[k]) / n;
            }
            into.push_back(b);
        }
    }
};

/// One model trained and scored on one replicate.
using Runner = std::function<std::vector<std::vector<double>>(const ExperimentData&, std::uint64_t seed)>;

RunRecord run_one(const std::string& model, double alpha, const ExperimentData& d, std::uint64_t seed,
                  const Runner& fn) {
    RunRecord r;
    r.model = model;
    r.alpha = alpha;
    r.seed = d.seed;
    const auto t0 = Clock::now();
    try {
        const auto yhat = fn(d, seed);
        const auto s = score(d.test, yhat);
        r.p50_ql = s.p50;
        r.rmse = s.rmse;
        if (!std::isfinite(r.p50_ql) || !std::isfinite(r.rmse)) throw TrainingError("non-finite forecast metrics");
    } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
        warn(model + " run failed (seed " + std::to_string(d.seed) + "): " + e.what());
    }
    r.seconds = since(t0);
    return r;
}

void summarise(ExperimentResult& res, std::size_t N) {
    std::vector<std::pair<std::string, double>> keys;
    for (const auto& r : res.runs)
        if (std::find(keys.begin(), keys.end(), std::pair{r.model, r.alpha}) == keys.end())
            keys.emplace_back(r.model, r.alpha);
    for (const auto& [model, alpha] : keys) {
        CellSummary c;
        c.model = model;
        c.alpha = alpha;
        if (alpha >= 0.0 && N >= 2) std::tie(c.weight_lo, c.weight_hi) = wr::weight_interval(alpha, N);
        std::vector<double> p, q;
        for (const auto& r : res.runs) {
            if (r.model != model || r.alpha != alpha) continue;
            ++c.runs;
            if (r.failed) {
                ++c.failures;
                continue;
            }
            p.push_back(r.p50_ql);
            q.push_back(r.rmse);
        }
        c.median_p50_ql = median(p);
        c.median_rmse = median(q);
        c.best_p50_ql = p.empty() ? std::nan("") : *std::min_element(p.begin(), p.end());
        c.best_rmse = q.empty() ? std::nan("") : *std::min_element(q.begin(), q.end());
        res.cells.push_back(c);
    }
}

std::vector<std::vector<double>> wr_forecasts(const wr::WrModel& m, const ExperimentData& d,
                                              std::vector<wr::WrOutput>* outs) {
    std::vector<std::vector<double>> yhat;
    for (std::size_t i = 0; i < d.test.size(); ++i) {
        auto o = wr::wr_predict(m, d.test[i], d.test_components[i]);
        yhat.push_back(o.yhat);
        if (outs) outs->push_back(std::move(o));
    }
    return yhat;
}

std::size_t component_count(std::span<const ExperimentData> data) {
    if (data.empty() || data.front().train_components.empty()) throw DataError("experiment has no data");
    const auto N = data.front().train_components.front().count();
    for (const auto& d : data) {
        if (d.test.empty() || d.train.empty()) throw DataError("experiment replicate has no train or test windows");
        for (const auto& c : d.train_components)
            if (c.count() != N) throw ConfigError("inconsistent component counts across windows");
        for (const auto& c : d.test_components)
            if (c.count() != N) throw ConfigError("inconsistent component counts across windows");
    }
    return N;
}

}  // namespace

BenchConfig bench_config_from(const Config& c, BenchConfig b) {
    auto size = [&](const char* key, std::size_t fallback) {
        const long v = c.get_int(key, static_cast<long>(fallback));
        if (v < 0) throw ConfigError(std::string(key) + " must be nonnegative");
        return static_cast<std::size_t>(v);
    };
    b.T = size("T", b.T);
    b.H = size("H", b.H);
    if (b.T == 0 || b.H == 0) throw ConfigError("T and H must be positive");
    b.net.T = b.T;
    b.net.H = b.H;
    b.train_windows_per_series = size("train_windows", b.train_windows_per_series);
    b.test_windows_per_series = size("test_windows", b.test_windows_per_series);
    b.net.channels = size("channels", b.net.channels);
    b.net.head_hidden = size("head_hidden", b.net.head_hidden);
    b.train.learning_rate = c.get_double("learning_rate", b.train.learning_rate);
    b.train.batch_size = size("batch_size", b.train.batch_size);
    b.train.epochs = size("epochs", b.train.epochs);
    b.wr_alpha = c.get_double("alpha", b.wr_alpha);
    b.alphas = c.get_doubles("alphas", b.alphas);
    b.seeds = size("seeds", b.seeds);
    b.seed = static_cast<std::uint64_t>(size("seed", b.seed));
    b.synth.n_series = size("n_series", b.synth.n_series);
    b.synth.length = size("length", b.synth.length);
    b.synth.theta = c.get_double("theta", b.synth.theta);
    b.synth.noise_sigma = c.get_double("noise_sigma", b.synth.noise_sigma);
    b.synth.perturb.bias = c.get_doubles("bias", b.synth.perturb.bias);
    b.synth.perturb.sigma = c.get_doubles("sigma", b.synth.perturb.sigma);
    return b;
}

ExperimentData build_synthetic_data(const BenchConfig& cfg, std::size_t replicate) {
    SynthSpec spec = cfg.synth;
    spec.seed = mix_seed(cfg.seed, replicate);
    const auto test_span = cfg.test_windows_per_series * cfg.H;
    if (spec.length < cfg.T + cfg.H + test_span) throw ConfigError("synthetic series too short for T, H and test blocks");
    const auto synth = generate_panel(spec);

    ExperimentData d;
    d.seed = spec.seed;
    d.clip_count = synth.clip_count;
    const auto split = spec.length - test_span;
    PanelDataset head = synth.panel;
    for (auto& s : head.series) {
        s.observed.dates.resize(split);
        s.observed.values.resize(split);
        s.covariates.resize(split);
    }
    d.train = make_windows(head, cfg.T, cfg.H, cfg.train_windows_per_series, mix_seed(spec.seed, 1));
    for (std::size_t s = 0; s < synth.panel.series.size(); ++s)
        for (std::size_t k = 0; k < cfg.test_windows_per_series; ++k)
            d.test.push_back(window_at(synth.panel, s, split + k * cfg.H, cfg.T, cfg.H));

    std::uint64_t tag = 0;
    for (const auto& w : d.train)
        d.train_components.push_back(perturb_components(true_components(synth, w), spec.perturb,
                                                        mix_seed(spec.seed, 100000 + tag++)));
    for (const auto& w : d.test) {
        d.test_truth.push_back(true_components(synth, w));
        d.test_components.push_back(perturb_components(d.test_truth.back(), spec.perturb,
                                                       mix_seed(spec.seed, 100000 + tag++)));
    }
    return d;
}

std::vector<ExperimentData> build_synthetic_replicates(const BenchConfig& cfg) {
    std::vector<ExperimentData> out;
    for (std::size_t r = 0; r < cfg.seeds; ++r) out.push_back(build_synthetic_data(cfg, r));
    return out;
}

const CellSummary* ExperimentResult::cell(const std::string& model, double alpha) const {
    for (const auto& c : cells)
        if (c.model == model && c.alpha == alpha) return &c;
    return nullptr;
}

double ExperimentResult::improved_share(const std::string& model) const {
    double hit = 0.0, n = 0.0;
    for (const auto& b : bias)
        if (b.model == model) {
            hit += b.share_improved * static_cast<double>(b.count);
            n += static_cast<double>(b.count);
        }
    return n > 0.0 ? hit / n : std::nan("");
}

ExperimentResult run_alpha_sweep(std::span<const ExperimentData> data, const BenchConfig& cfg) {
    const auto t0 = Clock::now();
    const auto N = component_count(data);
    for (double a : cfg.alphas) wr::check_alpha(a, N);
    ExperimentResult res;
    res.name = "alpha_sweep";
    for (const auto& d : data) res.seeds.push_back(d.seed);
    for (double alpha : cfg.alphas) {
        for (const auto& d : data) {
            res.runs.push_back(run_one("wr", alpha, d, d.seed, [&](const ExperimentData& x, std::uint64_t seed) {
                wr::TrainConfig tc = cfg.train;
                tc.seed = mix_seed(seed, 7);
                const auto m = wr::wr_train(x.train, x.train_components, alpha, net_for(cfg, N), tc);
                std::vector<wr::WrOutput> outs;
                auto yhat = wr_forecasts(m, x, alpha == 0.0 ? &outs : nullptr);
                for (std::size_t i = 0; i < outs.size(); ++i) {
                    const auto plain = additive(x.test_components[i]);
                    for (std::size_t j = 0; j < plain.size(); ++j) {
                        const double weighted = outs[i].yhat[j] - outs[i].residuals[j];
                        res.alpha0_weighted_deviation =
                            std::max(res.alpha0_weighted_deviation, std::abs(weighted - plain[j]));
                    }
                }
                return yhat;
            }));
        }
    }
    summarise(res, N);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : res.cells)
        if (c.failures < c.runs && c.median_p50_ql < best) {
            best = c.median_p50_ql;
            res.argmin_alpha = c.alpha;
        }
    res.seconds = since(t0);
    return res;
}

ExperimentResult run_model_comparison(std::span<const ExperimentData> data, const BenchConfig& cfg) {
    const auto t0 = Clock::now();
    const auto N = component_count(data);
    ExperimentResult res;
    res.name = "model_comparison";
    for (const auto& d : data) res.seeds.push_back(d.seed);
    const bool truth = std::all_of(data.begin(), data.end(),
                                   [](const ExperimentData& d) { return d.test_truth.size() == d.test.size(); });
    BiasAccumulator wr_bias, mlp_bias;
    std::vector<wr::WrOutput> pooled;

    for (const auto& d : data) {
        res.runs.push_back(run_one("wr", cfg.wr_alpha, d, d.seed, [&](const ExperimentData& x, std::uint64_t seed) {
            wr::TrainConfig tc = cfg.train;
            tc.seed = mix_seed(seed, 7);
            const auto m = wr::wr_train(x.train, x.train_components, cfg.wr_alpha, net_for(cfg, N), tc);
            std::vector<wr::WrOutput> outs;
            auto yhat = wr_forecasts(m, x, &outs);
            if (truth)
                for (std::size_t i = 0; i < outs.size(); ++i) wr_bias.add(x.test_truth[i], x.test_components[i], outs[i]);
            pooled.insert(pooled.end(), outs.begin(), outs.end());
            return yhat;
        }));
        res.runs.push_back(run_one("additive", -1.0, d, d.seed, [&](const ExperimentData& x, std::uint64_t) {
            std::vector<std::vector<double>> yhat;
            for (const auto& c : x.test_components) yhat.push_back(additive(c));
            return yhat;
        }));
        res.runs.push_back(run_one("mlp_combiner", -1.0, d, d.seed, [&](const ExperimentData& x, std::uint64_t seed) {
            wr::TrainConfig tc = cfg.train;
            tc.seed = mix_seed(seed, 8);
            wr::MlpCombiner m(cfg.T, cfg.H, x.train_components.front().names, cfg.net.head_hidden);
            m.train(x.train, x.train_components, tc);
            std::vector<std::vector<double>> yhat;
            for (std::size_t i = 0; i < x.test.size(); ++i) {
                const auto o = m.predict(x.test[i], x.test_components[i]);
                if (truth) mlp_bias.add(x.test_truth[i], x.test_components[i], o);
                yhat.push_back(o.yhat);
            }
            return yhat;
        }));
        res.runs.push_back(run_one("pure_nn", -1.0, d, d.seed, [&](const ExperimentData& x, std::uint64_t seed) {
            wr::TrainConfig tc = cfg.train;
            tc.seed = mix_seed(seed, 9);
            const std::vector<wr::ComponentMatrix> none(x.train.size());
            const auto m = wr::wr_train(x.train, none, 0.0, net_for(cfg, 0), tc);
            std::vector<std::vector<double>> yhat;
            for (const auto& w : x.test) yhat.push_back(wr::wr_predict(m, w, wr::ComponentMatrix{}).yhat);
            return yhat;
        }));
    }
    summarise(res, N);
    wr_bias.emit("wr", res.bias);
    mlp_bias.emit("mlp_combiner", res.bias);
    if (!pooled.empty()) res.weights = wr::report_weight_distributions(pooled, data.front().test_components.front().names);
    res.seconds = since(t0);
    return res;
}

namespace {

std::string alpha_text(double a) { return a < 0.0 ? "" : std::to_string(a); }

}  // namespace

void write_runs_csv(const ExperimentResult& r, std::ostream& out) {
    out << "model,alpha,seed,p50_ql,rmse,seconds,status,error\n";
    for (const auto& x : r.runs) {
        std::string err = x.error;
        std::replace(err.begin(), err.end(), ',', ';');
        out << x.model << ',' << alpha_text(x.alpha) << ',' << x.seed << ',' << x.p50_ql << ',' << x.rmse << ','
            << x.seconds << ',' << (x.failed ? "failed" : "ok") << ',' << err << '\n';
    }
}

void write_cells_csv(const ExperimentResult& r, std::ostream& out) {
    out << "model,alpha,scope_lo,scope_hi,median_p50_ql,median_rmse,best_p50_ql,best_rmse,runs,failures,argmin\n";
    for (const auto& c : r.cells) {
        const bool arg = r.argmin_alpha && c.alpha == *r.argmin_alpha;
        out << c.model << ',' << alpha_text(c.alpha) << ',' << c.weight_lo << ',' << c.weight_hi << ','
            << c.median_p50_ql << ',' << c.median_rmse << ',' << c.best_p50_ql << ',' << c.best_rmse << ',' << c.runs
            << ',' << c.failures << ',' << (arg ? "*" : "") << '\n';
    }
}

void write_bias_csv(const ExperimentResult& r, std::ostream& out) {
    out << "model,component,mean_abs_estimate_error,mean_abs_modified_error,share_improved,count\n";
    for (const auto& b : r.bias)
        out << b.model << ',' << b.component << ',' << b.mean_abs_estimate_error << ',' << b.mean_abs_modified_error
            << ',' << b.share_improved << ',' << b.count << '\n';
}

void write_manifest_json(const ExperimentResult& r, const BenchConfig& cfg, std::ostream& out) {
    nlohmann::json j;
    j["experiment"] = r.name;
    j["seeds"] = r.seeds;
    j["seconds"] = r.seconds;
    j["config"] = {{"T", cfg.T},
                   {"H", cfg.H},
                   {"alpha", cfg.wr_alpha},
                   {"alphas", cfg.alphas},
                   {"learning_rate", cfg.train.learning_rate},
                   {"batch_size", cfg.train.batch_size},
                   {"epochs", cfg.train.epochs},
                   {"channels", cfg.net.channels},
                   {"n_series", cfg.synth.n_series},
                   {"length", cfg.synth.length},
                   {"bias", cfg.synth.perturb.bias},
                   {"sigma", cfg.synth.perturb.sigma}};
    if (r.argmin_alpha) j["argmin_alpha"] = *r.argmin_alpha;
    if (r.name == "alpha_sweep") j["alpha0_weighted_deviation"] = r.alpha0_weighted_deviation;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : r.cells)
        cells.push_back({{"model", c.model},
                         {"alpha", c.alpha < 0.0 ? nlohmann::json() : nlohmann::json(c.alpha)},
                         {"median_p50_ql", c.median_p50_ql},
                         {"median_rmse", c.median_rmse},
                         {"best_p50_ql", c.best_p50_ql},
                         {"best_rmse", c.best_rmse},
                         {"runs", c.runs},
                         {"failures", c.failures}});
    j["cells"] = cells;
    std::size_t failed = 0;
    for (const auto& x : r.runs) failed += x.failed;
    j["failed_runs"] = failed;
    out << j.dump(2) << '\n';
}

}  // namespace wrcast::bench
