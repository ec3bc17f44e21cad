#include "wrcast/wrcast.h"

#include "wrcast/bench/electricity_run.hpp"
#include "wrcast/bench/experiments.hpp"
#include "wrcast/bench/stage1.hpp"
#include "wrcast/core/config.hpp"
#include "wrcast/core/errors.hpp"
#include "wrcast/core/log.hpp"
#include "wrcast/core/metrics.hpp"
#include "wrcast/core/panel.hpp"
#include "wrcast/core/windows.hpp"
#include "wrcast/stl/stl.hpp"
#include "wrcast/theory/optimal.hpp"
#include "wrcast/theory/suite.hpp"
#include "wrcast/wr/combiner.hpp"
#include "wrcast/wr/report.hpp"
#include "wrcast/wr/weights.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

using namespace wrcast;
namespace fs = std::filesystem;

struct wrcast_config {
    Config cfg;
};
struct wrcast_panel {
    PanelDataset panel;
};
struct wrcast_stage1 {
    bench::Stage1Model model;
};
struct wrcast_model {
    bench::Stage1Model stage1;
    wr::WrModel wr{nn::NetConfig{}};
};

namespace {

thread_local std::string g_error;

struct IoError : Error {
    using Error::Error;
};

template <class F>
wrcast_status guard(F&& f) {
    try {
        g_error.clear();
        f();
        return WRCAST_OK;
    } catch (const ConfigError& e) {
        g_error = e.what();
        return WRCAST_E_CONFIG;
    } catch (const DataError& e) {
        g_error = e.what();
        return WRCAST_E_DATA;
    } catch (const TrainingError& e) {
        g_error = e.what();
        return WRCAST_E_TRAINING;
    } catch (const IoError& e) {
        g_error = e.what();
        return WRCAST_E_IO;
    } catch (const fs::filesystem_error& e) {
        g_error = e.what();
        return WRCAST_E_IO;
    } catch (const DomainError& e) {
        g_error = e.what();
        return WRCAST_E_ARGUMENT;
    } catch (const StateError& e) {
        g_error = e.what();
        return WRCAST_E_STATE;
    } catch (const std::exception& e) {
        g_error = e.what();
        return WRCAST_E_INTERNAL;
    } catch (...) {
        g_error = "unknown error";
        return WRCAST_E_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) throw DomainError(std::string(what) + " is null");
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw IoError("cannot write " + p.string());
    out.precision(10);
    return out;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw IoError("cannot read " + p.string());
    return in;
}

const Config& cfg_of(const wrcast_config* c) {
    static const Config empty;
    return c ? c->cfg : empty;
}

std::size_t size_key(const Config& c, const char* key, std::size_t fallback) {
    const long v = c.get_int(key, static_cast<long>(fallback));
    if (v <= 0) throw ConfigError(std::string(key) + " must be positive");
    return static_cast<std::size_t>(v);
}

struct Shape {
    std::size_t T, H;
};

Shape shape_of(const Config& c) { return {size_key(c, "T", 72), size_key(c, "H", 24)}; }

bench::Stage1Config stage1_config(const Config& c, std::uint64_t seed) {
    bench::Stage1Config s;
    s.classical.season = size_key(c, "season", 7);
    s.classical.ma_window = size_key(c, "ma_window", 7);
    s.classical.wma_window = size_key(c, "wma_window", 7);
    s.fforma.horizon = size_key(c, "fforma_horizon", 7);
    s.fforma.boosting.n_trees = size_key(c, "fforma_trees", 100);
    s.fforma.min_windows = size_key(c, "fforma_min_windows", 20);
    s.dml.nuisance.n_trees = size_key(c, "dml_trees", 100);
    s.dml.seed = seed;
    return s;
}

std::vector<ForecastWindow> training_windows(const PanelDataset& panel, const Config& c, std::uint64_t seed) {
    const auto [T, H] = shape_of(c);
    auto w = make_windows(panel, T, H, size_key(c, "windows_per_series", 72), seed);
    if (w.empty()) throw DataError("no series is long enough for T + H = " + std::to_string(T + H));
    return w;
}

/// Last-H backtest windows of every series long enough.
std::vector<ForecastWindow> backtest_windows(const PanelDataset& panel, std::size_t T, std::size_t H) {
    std::vector<ForecastWindow> out;
    for (std::size_t s = 0; s < panel.series.size(); ++s) {
        const auto n = panel.series[s].observed.size();
        if (n < T + H) {
            warn("series " + panel.series[s].observed.series_id + " too short for evaluation");
            continue;
        }
        out.push_back(window_at(panel, s, n - H, T, H));
    }
    if (out.empty()) throw DataError("no series is long enough for evaluation");
    return out;
}

template <class Row>
void per_plan(const PanelDataset& panel, std::size_t T, std::size_t H, Row&& row) {
    for (std::size_t s = 0; s < panel.series.size(); ++s) {
        if (panel.series[s].observed.size() < T) {
            warn("series " + panel.series[s].observed.series_id + " has fewer than T observations; skipped");
            continue;
        }
        row(panel.series[s].observed.series_id, forecast_window(panel, s, T, H));
    }
}

bench::BenchConfig bench_from(const Config& c, std::uint64_t seed) {
    auto b = bench::bench_config_from(c);
    b.seed = seed;
    b.train.seed = seed;
    return b;
}

void write_experiment(const bench::ExperimentResult& r, const bench::BenchConfig& b, const fs::path& dir) {
    auto runs = open_out(dir / (r.name + "_runs.csv"));
    bench::write_runs_csv(r, runs);
    auto cells = open_out(dir / (r.name + ".csv"));
    bench::write_cells_csv(r, cells);
    if (!r.bias.empty()) {
        auto bias = open_out(dir / (r.name + "_component_bias.csv"));
        bench::write_bias_csv(r, bias);
    }
    if (r.weights) {
        auto h = open_out(dir / (r.name + "_weight_histograms.csv"));
        wr::write_histograms_csv(*r.weights, h);
        auto s = open_out(dir / (r.name + "_weight_summary.csv"));
        wr::write_summary_csv(*r.weights, s);
    }
    auto man = open_out(dir / (r.name + ".json"));
    bench::write_manifest_json(r, b, man);
}

}  // namespace

extern "C" {

const char* wrcast_version(void) { return "0.1.0"; }

const char* wrcast_last_error(void) { return g_error.c_str(); }

const char* wrcast_status_name(wrcast_status s) {
    switch (s) {
        case WRCAST_OK: return "ok";
        case WRCAST_E_ARGUMENT: return "argument error";
        case WRCAST_E_CONFIG: return "configuration error";
        case WRCAST_E_DATA: return "data error";
        case WRCAST_E_TRAINING: return "training failure";
        case WRCAST_E_IO: return "i/o error";
        case WRCAST_E_STATE: return "state error";
        case WRCAST_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void wrcast_set_quiet(int quiet) {
    if (quiet)
        set_warning_sink({});
    else
        set_warning_sink([](std::string_view m) { std::cerr << "warning: " << m << '\n'; });
}

wrcast_status wrcast_config_create(wrcast_config** out) {
    return guard([&] {
        need(out, "out");
        *out = new wrcast_config{};
    });
}

wrcast_status wrcast_config_load(const char* path, wrcast_config** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        if (!fs::exists(path)) throw ConfigError(std::string("config file not found: ") + path);
        *out = new wrcast_config{Config::load(path)};
    });
}

wrcast_status wrcast_config_set(wrcast_config* cfg, const char* key, const char* value) {
    return guard([&] {
        need(cfg, "config");
        need(key, "key");
        need(value, "value");
        cfg->cfg.set(key, value);
    });
}

void wrcast_config_free(wrcast_config* cfg) { delete cfg; }

wrcast_status wrcast_panel_load_csv(const char* path, wrcast_panel** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        if (!fs::exists(path)) throw IoError(std::string("panel file not found: ") + path);
        auto p = std::make_unique<wrcast_panel>();
        p->panel = load_panel_csv(path);
        *out = p.release();
    });
}

wrcast_status wrcast_panel_load_electricity(const char* path, size_t max_clients, wrcast_panel** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        if (!fs::exists(path))
            throw IoError(std::string("electricity file not found: ") + path + "; download LD2011_2014.txt from " +
                          bench::kElectricityUrl);
        auto p = std::make_unique<wrcast_panel>();
        p->panel = load_electricity_wide(path, {max_clients});
        *out = p.release();
    });
}

wrcast_status wrcast_panel_synthetic(const wrcast_config* cfg, uint64_t seed, wrcast_panel** out) {
    return guard([&] {
        need(out, "out");
        auto spec = bench::bench_config_from(cfg_of(cfg)).synth;
        spec.seed = seed;
        auto p = std::make_unique<wrcast_panel>();
        p->panel = bench::generate_panel(spec).panel;
        *out = p.release();
    });
}

wrcast_status wrcast_panel_series_count(const wrcast_panel* panel, size_t* out) {
    return guard([&] {
        need(panel, "panel");
        need(out, "out");
        *out = panel->panel.series.size();
    });
}

wrcast_status wrcast_panel_point_count(const wrcast_panel* panel, size_t* out) {
    return guard([&] {
        need(panel, "panel");
        need(out, "out");
        *out = panel->panel.point_count();
    });
}

wrcast_status wrcast_panel_write_csv(const wrcast_panel* panel, const char* path) {
    return guard([&] {
        need(panel, "panel");
        need(path, "path");
        auto out = open_out(path);
        write_panel_csv(panel->panel, out);
    });
}

void wrcast_panel_free(wrcast_panel* panel) { delete panel; }

wrcast_status wrcast_decompose_panel(const wrcast_panel* panel, const wrcast_config* cfg, const char* csv_path) {
    return guard([&] {
        need(panel, "panel");
        need(csv_path, "path");
        const auto& c = cfg_of(cfg);
        stl::StlConfig sc;
        sc.period = size_key(c, "n_p", 12);
        sc.seasonal = size_key(c, "n_s", 7);
        sc.trend = static_cast<std::size_t>(std::max(0L, c.get_int("n_t", 0)));
        sc.low_pass = static_cast<std::size_t>(std::max(0L, c.get_int("n_l", 0)));
        sc.inner_iterations = size_key(c, "inner_iterations", 2);
        sc.outer_iterations = static_cast<std::size_t>(std::max(0L, c.get_int("outer_iterations", 1)));
        auto out = open_out(csv_path);
        out << "series_id,date,value,trend,seasonal,remainder\n";
        for (const auto& s : panel->panel.series) {
            const auto& o = s.observed;
            if (o.size() < 2 * sc.period) {
                warn("series " + o.series_id + " shorter than two periods; skipped");
                continue;
            }
            const auto r = stl::stl_decompose(o.values, sc);
            for (std::size_t t = 0; t < o.size(); ++t)
                out << o.series_id << ',' << format_date(o.dates[t]) << ',' << o.values[t] << ',' << r.trend[t] << ','
                    << r.seasonal[t] << ',' << r.remainder[t] << '\n';
        }
    });
}

wrcast_status wrcast_normalize_weights(const double* logits, size_t n, double alpha, double* weights) {
    return guard([&] {
        need(logits, "logits");
        need(weights, "weights");
        const auto w = wr::normalize_weights({logits, n}, alpha);
        std::copy(w.begin(), w.end(), weights);
    });
}

wrcast_status wrcast_weight_interval(double alpha, size_t n, double* lo, double* hi) {
    return guard([&] {
        need(lo, "lo");
        need(hi, "hi");
        wr::check_alpha(alpha, n);
        std::tie(*lo, *hi) = wr::weight_interval(alpha, n);
    });
}

wrcast_status wrcast_optimal_weight_n2(double y, double l1_hat, double l2_hat, double* w_star) {
    return guard([&] {
        need(w_star, "w_star");
        *w_star = theory::optimal_weight_n2(y, l1_hat, l2_hat);
    });
}

wrcast_status wrcast_improvement_interval(double l, double l_hat, int* empty, double* lo, double* hi) {
    return guard([&] {
        need(empty, "empty");
        need(lo, "lo");
        need(hi, "hi");
        const auto s = theory::improvement_interval(l, l_hat);
        *empty = s.empty;
        *lo = s.lo;
        *hi = s.hi;
    });
}

wrcast_status wrcast_p50_ql(const double* sum_yhat, const double* sum_y, size_t n, double* out) {
    return guard([&] {
        need(sum_yhat, "sum_yhat");
        need(sum_y, "sum_y");
        need(out, "out");
        std::vector<std::pair<double, double>> v;
        for (size_t i = 0; i < n; ++i) v.emplace_back(sum_yhat[i], sum_y[i]);
        *out = p50_ql(v);
    });
}

wrcast_status wrcast_stl(const double* series, size_t n, size_t period, double* trend, double* seasonal,
                         double* remainder) {
    return guard([&] {
        need(series, "series");
        stl::StlConfig sc;
        sc.period = period;
        const auto r = stl::stl_decompose({series, n}, sc);
        if (trend) std::copy(r.trend.begin(), r.trend.end(), trend);
        if (seasonal) std::copy(r.seasonal.begin(), r.seasonal.end(), seasonal);
        if (remainder) std::copy(r.remainder.begin(), r.remainder.end(), remainder);
    });
}

wrcast_status wrcast_stage1_fit(const wrcast_panel* panel, const wrcast_config* cfg, uint64_t seed,
                                wrcast_stage1** out) {
    return guard([&] {
        need(panel, "panel");
        need(out, "out");
        const auto& c = cfg_of(cfg);
        const auto windows = training_windows(panel->panel, c, seed);
        auto s = std::make_unique<wrcast_stage1>();
        s->model = bench::stage1_fit(panel->panel, windows, stage1_config(c, seed));
        *out = s.release();
    });
}

wrcast_status wrcast_stage1_save(const wrcast_stage1* s, const char* path) {
    return guard([&] {
        need(s, "stage1");
        need(path, "path");
        auto out = open_out(path);
        s->model.save_json(out);
    });
}

wrcast_status wrcast_stage1_load(const char* path, wrcast_stage1** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        auto in = open_in(path);
        auto s = std::make_unique<wrcast_stage1>();
        s->model = bench::Stage1Model::load_json(in);
        *out = s.release();
    });
}

wrcast_status wrcast_stage1_write_components(const wrcast_stage1* s, const wrcast_panel* panel,
                                             const wrcast_config* cfg, const char* csv_path) {
    return guard([&] {
        need(s, "stage1");
        need(panel, "panel");
        need(csv_path, "path");
        const auto [T, H] = shape_of(cfg_of(cfg));
        auto out = open_out(csv_path);
        out << "series_id,date,baseline,promotion,festival\n";
        per_plan(panel->panel, T, H, [&](const std::string& id, const ForecastWindow& w) {
            const auto c = bench::stage1_components(s->model, w);
            for (std::size_t j = 0; j < w.horizon(); ++j)
                out << id << ',' << format_date(w.future_dates[j]) << ',' << c.values[0][j] << ',' << c.values[1][j]
                    << ',' << c.values[2][j] << '\n';
        });
    });
}

wrcast_status wrcast_stage1_write_baseline(const wrcast_stage1* s, const wrcast_panel* panel, const wrcast_config* cfg,
                                           const char* csv_path) {
    return guard([&] {
        need(s, "stage1");
        need(panel, "panel");
        need(csv_path, "path");
        const auto [T, H] = shape_of(cfg_of(cfg));
        auto out = open_out(csv_path);
        out << "series_id,date,baseline\n";
        per_plan(panel->panel, T, H, [&](const std::string& id, const ForecastWindow& w) {
            const auto b = bench::stage1_baseline(s->model, w);
            for (std::size_t j = 0; j < w.horizon(); ++j)
                out << id << ',' << format_date(w.future_dates[j]) << ',' << b[j] << '\n';
        });
    });
}

void wrcast_stage1_free(wrcast_stage1* s) { delete s; }

wrcast_status wrcast_model_train(const wrcast_panel* panel, const wrcast_config* cfg, uint64_t seed,
                                 wrcast_model** out) {
    return guard([&] {
        need(panel, "panel");
        need(out, "out");
        const auto& c = cfg_of(cfg);
        const auto [T, H] = shape_of(c);
        if (c.contains("N") && c.get_int("N", 3) != 3)
            throw ConfigError("stage 1 produces N = 3 components (baseline, promotion, festival)");
        const auto windows = training_windows(panel->panel, c, seed);
        auto m = std::make_unique<wrcast_model>();
        m->stage1 = bench::stage1_fit(panel->panel, windows, stage1_config(c, seed));
        std::vector<wr::ComponentMatrix> comps;
        comps.reserve(windows.size());
        for (const auto& w : windows) comps.push_back(bench::stage1_components(m->stage1, w));

        nn::NetConfig net;
        net.T = T;
        net.H = H;
        net.channels = size_key(c, "channels", 32);
        net.head_hidden = size_key(c, "head_hidden", 32);
        wr::TrainConfig tc;
        tc.learning_rate = c.get_double("learning_rate", 1e-3);
        tc.batch_size = size_key(c, "batch_size", 32);
        tc.epochs = size_key(c, "epochs", 20);
        tc.quantile = c.get_double("quantile", 0.5);
        tc.seed = seed;
        m->wr = wr::wr_train(windows, comps, c.get_double("alpha", 1.0), net, tc);
        *out = m.release();
    });
}

wrcast_status wrcast_model_save(const wrcast_model* m, const char* dir) {
    return guard([&] {
        need(m, "model");
        need(dir, "dir");
        auto s = open_out(fs::path(dir) / "stage1.json");
        m->stage1.save_json(s);
        auto w = open_out(fs::path(dir) / "model.json");
        m->wr.save_json(w);
    });
}

wrcast_status wrcast_model_load(const char* dir, wrcast_model** out) {
    return guard([&] {
        need(dir, "dir");
        need(out, "out");
        auto s = open_in(fs::path(dir) / "stage1.json");
        auto w = open_in(fs::path(dir) / "model.json");
        auto m = std::make_unique<wrcast_model>();
        m->stage1 = bench::Stage1Model::load_json(s);
        m->wr = wr::WrModel::load_json(w);
        *out = m.release();
    });
}

wrcast_status wrcast_model_alpha(const wrcast_model* m, double* alpha) {
    return guard([&] {
        need(m, "model");
        need(alpha, "alpha");
        *alpha = m->wr.alpha;
    });
}

wrcast_status wrcast_model_epoch_losses(const wrcast_model* m, const double** losses, size_t* count) {
    return guard([&] {
        need(m, "model");
        need(losses, "losses");
        need(count, "count");
        *losses = m->wr.epoch_loss.data();
        *count = m->wr.epoch_loss.size();
    });
}

wrcast_status wrcast_model_forecast(const wrcast_model* m, const wrcast_panel* panel, const char* csv_path) {
    return guard([&] {
        need(m, "model");
        need(panel, "panel");
        need(csv_path, "path");
        const auto& net = m->wr.network.config();
        const auto& names = m->wr.component_names;
        auto out = open_out(csv_path);
        out << "series_id,date,yhat";
        for (const auto& n : names) out << ',' << n << "_modified";
        out << ",residual";
        for (const auto& n : names) out << ",weight_" << n;
        out << '\n';
        per_plan(panel->panel, net.T, net.H, [&](const std::string& id, const ForecastWindow& w) {
            const auto o = wr::wr_predict(m->wr, w, bench::stage1_components(m->stage1, w));
            for (std::size_t j = 0; j < w.horizon(); ++j) {
                out << id << ',' << format_date(w.future_dates[j]) << ',' << o.yhat[j];
                for (const auto& row : o.modified) out << ',' << row[j];
                out << ',' << o.residuals[j];
                for (const auto& row : o.weights) out << ',' << row[j];
                out << '\n';
            }
        });
    });
}

wrcast_status wrcast_model_evaluate(const wrcast_model* m, const wrcast_panel* panel, const char* json_path,
                                    double* wr_p50_ql, double* additive_p50_ql) {
    return guard([&] {
        need(m, "model");
        need(panel, "panel");
        const auto& net = m->wr.network.config();
        const auto windows = backtest_windows(panel->panel, net.T, net.H);
        std::vector<std::pair<double, double>> wr_sums, add_sums, wr_pairs, add_pairs;
        double wr_ql = 0.0, add_ql = 0.0;
        std::size_t n = 0;
        for (const auto& w : windows) {
            const auto comps = bench::stage1_components(m->stage1, w);
            const auto o = wr::wr_predict(m->wr, w, comps);
            double sy = 0.0, sw = 0.0, sa = 0.0;
            for (std::size_t j = 0; j < w.horizon(); ++j) {
                double a = 0.0;
                for (const auto& row : comps.values) a += row[j];
                sy += w.target[j];
                sw += o.yhat[j];
                sa += a;
                wr_pairs.emplace_back(w.target[j], o.yhat[j]);
                add_pairs.emplace_back(w.target[j], a);
                wr_ql += quantile_loss(w.target[j], o.yhat[j], 0.5);
                add_ql += quantile_loss(w.target[j], a, 0.5);
                ++n;
            }
            wr_sums.emplace_back(sw, sy);
            add_sums.emplace_back(sa, sy);
        }
        std::vector<MetricReport> reps;
        for (const auto& [model, sums, pairs, ql] :
             {std::tuple{"wr", &wr_sums, &wr_pairs, wr_ql}, std::tuple{"additive", &add_sums, &add_pairs, add_ql}}) {
            reps.push_back({"p50_ql", p50_ql(*sums), {{"model", model}}});
            reps.push_back({"rmse", rmse(*pairs), {{"model", model}}});
            reps.push_back({"quantile_loss", ql / static_cast<double>(n), {{"model", model}}});
        }
        if (wr_p50_ql) *wr_p50_ql = reps[0].value;
        if (additive_p50_ql) *additive_p50_ql = reps[3].value;
        if (json_path) {
            auto out = open_out(json_path);
            write_metric_reports_json(reps, out);
        }
    });
}

wrcast_status wrcast_model_report(const wrcast_model* m, const wrcast_panel* panel, const char* dir) {
    return guard([&] {
        need(m, "model");
        need(panel, "panel");
        need(dir, "dir");
        const auto& net = m->wr.network.config();
        std::vector<wr::WrOutput> outs;
        for (const auto& w : backtest_windows(panel->panel, net.T, net.H))
            outs.push_back(wr::wr_predict(m->wr, w, bench::stage1_components(m->stage1, w)));
        const auto rep = wr::report_weight_distributions(outs, m->wr.component_names);
        auto h = open_out(fs::path(dir) / "weight_histograms.csv");
        wr::write_histograms_csv(rep, h);
        auto s = open_out(fs::path(dir) / "weight_summary.csv");
        wr::write_summary_csv(rep, s);
    });
}

void wrcast_model_free(wrcast_model* m) { delete m; }

wrcast_status wrcast_run_alpha_sweep(const wrcast_config* cfg, uint64_t seed, const char* electricity_path,
                                     const char* out_dir) {
    return guard([&] {
        need(out_dir, "out_dir");
        const auto& c = cfg_of(cfg);
        if (electricity_path && *electricity_path) {
            bench::ElectricityConfig ec;
            ec.data_path = electricity_path;
            ec.bench = bench::bench_config_from(c, ec.bench);
            ec.bench.seed = seed;
            ec.period = size_key(c, "n_p", ec.period);
            ec.clients = size_key(c, "clients", ec.clients);
            const auto r = bench::run_public_electricity(ec);
            write_experiment(r.sweep, ec.bench, out_dir);
            write_experiment(r.comparison, ec.bench, out_dir);
            return;
        }
        const auto b = bench_from(c, seed);
        const auto data = bench::build_synthetic_replicates(b);
        write_experiment(bench::run_alpha_sweep(data, b), b, out_dir);
    });
}

wrcast_status wrcast_run_comparison(const wrcast_config* cfg, uint64_t seed, const char* electricity_path,
                                    const char* out_dir) {
    return guard([&] {
        need(out_dir, "out_dir");
        const auto& c = cfg_of(cfg);
        if (electricity_path && *electricity_path) {
            bench::ElectricityConfig ec;
            ec.data_path = electricity_path;
            ec.bench = bench::bench_config_from(c, ec.bench);
            ec.bench.seed = seed;
            ec.period = size_key(c, "n_p", ec.period);
            ec.clients = size_key(c, "clients", ec.clients);
            const auto r = bench::run_public_electricity(ec);
            write_experiment(r.comparison, ec.bench, out_dir);
            return;
        }
        const auto b = bench_from(c, seed);
        const auto data = bench::build_synthetic_replicates(b);
        write_experiment(bench::run_model_comparison(data, b), b, out_dir);
    });
}

wrcast_status wrcast_theory_check(uint64_t seed, const char* out_dir, int* passed) {
    return guard([&] {
        need(out_dir, "out_dir");
        const auto rep = theory::run_theory_suite(seed);
        const fs::path dir(out_dir);
        auto j = open_out(dir / "theory_report.json");
        theory::write_suite_json(rep, j);
        auto r = open_out(dir / "region_map.csv");
        bool header = true;
        for (const auto& m : rep.maps) {
            theory::write_region_csv(m, r, header);
            header = false;
        }
        auto cj = open_out(dir / "conjecture.csv");
        theory::write_conjecture_csv(rep.conjecture, cj);
        if (passed) *passed = rep.passed();
    });
}

}  // extern "C"
