// wrcast command-line front end over the C interface.
#include "wrcast/wrcast.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>

namespace {

struct Globals {
    std::string config;
    std::uint64_t seed = 0;
    std::string out = "wrcast_out";
    bool quiet = false;
};

int exit_code(wrcast_status s) {
    switch (s) {
        case WRCAST_OK: return 0;
        case WRCAST_E_CONFIG:
        case WRCAST_E_ARGUMENT: return 2;
        case WRCAST_E_DATA:
        case WRCAST_E_IO: return 3;
        case WRCAST_E_TRAINING: return 4;
        default: return 1;
    }
}

struct Failed {
    int code;
};

void check(wrcast_status s) {
    if (s == WRCAST_OK) return;
    std::fprintf(stderr, "wrcast: %s: %s\n", wrcast_status_name(s), wrcast_last_error());
    throw Failed{exit_code(s)};
}

std::string out_file(const Globals& g, const char* name) { return (std::filesystem::path(g.out) / name).string(); }

// RAII holders for the C handles.
struct ConfigH {
    wrcast_config* p = nullptr;
    explicit ConfigH(const Globals& g) {
        if (g.config.empty())
            check(wrcast_config_create(&p));
        else
            check(wrcast_config_load(g.config.c_str(), &p));
    }
    ~ConfigH() { wrcast_config_free(p); }
};

struct PanelH {
    wrcast_panel* p = nullptr;
    PanelH(const std::string& csv, const std::string& electricity, std::size_t clients) {
        if (!electricity.empty())
            check(wrcast_panel_load_electricity(electricity.c_str(), clients, &p));
        else
            check(wrcast_panel_load_csv(csv.c_str(), &p));
    }
    ~PanelH() { wrcast_panel_free(p); }
};

struct ModelH {
    wrcast_model* p = nullptr;
    explicit ModelH(const std::string& dir) { check(wrcast_model_load(dir.c_str(), &p)); }
    ModelH() = default;
    ~ModelH() { wrcast_model_free(p); }
};

struct Stage1H {
    wrcast_stage1* p = nullptr;
    ~Stage1H() { wrcast_stage1_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wrcast: weighted-residual combination of decomposed forecasts"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "key = value configuration file");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--out", g.out, "output directory");
    app.add_flag("--quiet", g.quiet, "suppress warnings");

    std::string input, electricity, model_dir;
    std::size_t clients = 0;
    auto add_input = [&](CLI::App* sub) {
        auto* in = sub->add_option("--input", input, "panel CSV (series_id,date,value[,price,reference_price,promo_type,festival_level])");
        auto* el = sub->add_option("--electricity", electricity, "15-minute wide electricity export instead of a panel CSV");
        sub->add_option("--clients", clients, "electricity clients to keep (0 = all)");
        in->excludes(el);
        el->excludes(in);
    };

    auto* ingest = app.add_subcommand("ingest", "validate a panel and write it in canonical form");
    add_input(ingest);
    bool synthetic = false;
    ingest->add_flag("--synthetic", synthetic, "write the synthetic benchmark panel instead");
    auto* decompose = app.add_subcommand("decompose", "STL decomposition of every series");
    add_input(decompose);
    auto* baseline = app.add_subcommand("baseline", "fit stage 1 and write FFORMA baseline forecasts");
    add_input(baseline);
    auto* components = app.add_subcommand("components", "fit stage 1 and write all preliminary components");
    add_input(components);
    auto* train = app.add_subcommand("train", "fit stage 1 and the weighted combination network");
    add_input(train);
    auto* forecast = app.add_subcommand("forecast", "forecast each series' plan with a trained model");
    add_input(forecast);
    auto* evaluate = app.add_subcommand("evaluate", "score a trained model on the last H days of every series");
    add_input(evaluate);
    auto* report = app.add_subcommand("report", "weight and residual histograms on the last H days");
    add_input(report);
    for (auto* sub : {forecast, evaluate, report})
        sub->add_option("--model", model_dir, "model directory written by train")->required();

    std::string elec_path;
    auto* sweep = app.add_subcommand("sweep-alpha", "alpha sweep on the synthetic benchmark or electricity data");
    auto* compare = app.add_subcommand("compare", "W-R against additive, MLP combiner and plain network");
    for (auto* sub : {sweep, compare})
        sub->add_option("--electricity", elec_path, "run on the electricity export instead of synthetic data");
    auto* theory = app.add_subcommand("theory-check", "closed-form and Monte Carlo checks of the weighting theory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    wrcast_set_quiet(g.quiet ? 1 : 0);
    try {
        std::filesystem::create_directories(g.out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "wrcast: cannot create %s: %s\n", g.out.c_str(), e.what());
        return 3;
    }

    try {
        ConfigH cfg(g);
        auto need_input = [&] {
            if (input.empty() && electricity.empty()) {
                std::fprintf(stderr, "wrcast: --input or --electricity is required\n");
                throw Failed{2};
            }
        };
        if (ingest->parsed() && synthetic) {
            wrcast_panel* p = nullptr;
            check(wrcast_panel_synthetic(cfg.p, g.seed, &p));
            const auto st = wrcast_panel_write_csv(p, out_file(g, "panel.csv").c_str());
            wrcast_panel_free(p);
            check(st);
            std::printf("%s\n", out_file(g, "panel.csv").c_str());
        } else if (ingest->parsed()) {
            need_input();
            PanelH p(input, electricity, clients);
            std::size_t series = 0, points = 0;
            check(wrcast_panel_series_count(p.p, &series));
            check(wrcast_panel_point_count(p.p, &points));
            check(wrcast_panel_write_csv(p.p, out_file(g, "panel.csv").c_str()));
            std::printf("series %zu, observations %zu -> %s\n", series, points, out_file(g, "panel.csv").c_str());
        } else if (decompose->parsed()) {
            need_input();
            PanelH p(input, electricity, clients);
            check(wrcast_decompose_panel(p.p, cfg.p, out_file(g, "decomposition.csv").c_str()));
            std::printf("%s\n", out_file(g, "decomposition.csv").c_str());
        } else if (baseline->parsed() || components->parsed()) {
            need_input();
            PanelH p(input, electricity, clients);
            Stage1H s;
            check(wrcast_stage1_fit(p.p, cfg.p, g.seed, &s.p));
            check(wrcast_stage1_save(s.p, out_file(g, "stage1.json").c_str()));
            if (baseline->parsed()) {
                check(wrcast_stage1_write_baseline(s.p, p.p, cfg.p, out_file(g, "baseline.csv").c_str()));
                std::printf("%s\n", out_file(g, "baseline.csv").c_str());
            } else {
                check(wrcast_stage1_write_components(s.p, p.p, cfg.p, out_file(g, "components.csv").c_str()));
                std::printf("%s\n", out_file(g, "components.csv").c_str());
            }
        } else if (train->parsed()) {
            need_input();
            PanelH p(input, electricity, clients);
            ModelH m;
            check(wrcast_model_train(p.p, cfg.p, g.seed, &m.p));
            check(wrcast_model_save(m.p, g.out.c_str()));
            const double* losses = nullptr;
            std::size_t n = 0;
            check(wrcast_model_epoch_losses(m.p, &losses, &n));
            for (std::size_t e = 0; e < n; ++e) std::printf("epoch %zu loss %.6g\n", e + 1, losses[e]);
            std::printf("model written to %s\n", g.out.c_str());
        } else if (forecast->parsed()) {
            need_input();
            PanelH p(input, electricity, clients);
            ModelH m(model_dir);
            check(wrcast_model_forecast(m.p, p.p, out_file(g, "forecast.csv").c_str()));
            std::printf("%s\n", out_file(g, "forecast.csv").c_str());
        } else if (evaluate->parsed()) {
            need_input();
            PanelH p(input, electricity, clients);
            ModelH m(model_dir);
            double w = 0.0, a = 0.0;
            check(wrcast_model_evaluate(m.p, p.p, out_file(g, "metrics.json").c_str(), &w, &a));
            std::printf("P50_QL wr %.6g additive %.6g\n", w, a);
        } else if (report->parsed()) {
            need_input();
            PanelH p(input, electricity, clients);
            ModelH m(model_dir);
            check(wrcast_model_report(m.p, p.p, g.out.c_str()));
            std::printf("%s\n", out_file(g, "weight_summary.csv").c_str());
        } else if (sweep->parsed()) {
            check(wrcast_run_alpha_sweep(cfg.p, g.seed, elec_path.c_str(), g.out.c_str()));
            std::printf("results in %s\n", g.out.c_str());
        } else if (compare->parsed()) {
            check(wrcast_run_comparison(cfg.p, g.seed, elec_path.c_str(), g.out.c_str()));
            std::printf("results in %s\n", g.out.c_str());
        } else if (theory->parsed()) {
            int passed = 0;
            check(wrcast_theory_check(g.seed, g.out.c_str(), &passed));
            std::printf("theory checks %s; report in %s\n", passed ? "passed" : "FAILED",
                        out_file(g, "theory_report.json").c_str());
            return passed ? 0 : 1;
        }
    } catch (const Failed& f) {
        return f.code;
    }
    return 0;
}
