/* Exercises the shared library through its C interface only. */
#include "wrcast/wrcast.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/stat.h>

static int failures = 0;

#define EXPECT(cond)                                                      \
    do {                                                                  \
        if (!(cond)) {                                                    \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                   \
        }                                                                 \
    } while (0)

#define OK(call)                                                                                \
    do {                                                                                        \
        wrcast_status s_ = (call);                                                              \
        if (s_ != WRCAST_OK) {                                                                  \
            fprintf(stderr, "%s:%d: %s -> %s: %s\n", __FILE__, __LINE__, #call,                \
                    wrcast_status_name(s_), wrcast_last_error());                               \
            ++failures;                                                                         \
        }                                                                                       \
    } while (0)

static int near(double a, double b, double tol) { return fabs(a - b) <= tol; }

static int file_exists(const char* path) {
    struct stat st;
    return stat(path, &st) == 0 && st.st_size > 0;
}

static void numerics(void) {
    double lo = 0, hi = 0, w[3], ws = 0;
    const double logits[3] = {1.0, -2.0, 0.5};
    int empty = 0;
    OK(wrcast_weight_interval(1.0, 3, &lo, &hi));
    EXPECT(near(lo, 2.0 / 3.0, 1e-12) && near(hi, 5.0 / 3.0, 1e-12));
    OK(wrcast_normalize_weights(logits, 3, 1.0, w));
    ws = w[0] + w[1] + w[2];
    EXPECT(near(ws, 3.0, 1e-12));
    EXPECT(wrcast_normalize_weights(logits, 3, 4.0, w) == WRCAST_E_CONFIG);
    EXPECT(strlen(wrcast_last_error()) > 0);

    OK(wrcast_optimal_weight_n2(10, 6, 2, &w[0]));
    EXPECT(near(w[0], 1.5, 1e-12));
    EXPECT(wrcast_optimal_weight_n2(10, 3, 3, &w[0]) == WRCAST_E_ARGUMENT);

    OK(wrcast_improvement_interval(4, 2, &empty, &lo, &hi));
    EXPECT(!empty && near(lo, 1, 1e-12) && near(hi, 3, 1e-12));
    OK(wrcast_improvement_interval(2, -1, &empty, &lo, &hi));
    EXPECT(!empty && near(lo, -5, 1e-12) && near(hi, 1, 1e-12));
    OK(wrcast_improvement_interval(5, 5, &empty, &lo, &hi));
    EXPECT(empty);

    {
        const double yhat[2] = {10, 5}, y[2] = {8, 5};
        double q = 0;
        OK(wrcast_p50_ql(yhat, y, 2, &q));
        EXPECT(near(q, 2.0 / 30.0, 1e-12));
    }
    {
        enum { n = 48 };
        double x[n], t[n], s[n], r[n];
        int i;
        for (i = 0; i < n; ++i) x[i] = 0.1 * i + sin(2 * 3.14159265358979 * i / 12.0);
        OK(wrcast_stl(x, n, 12, t, s, r));
        for (i = 0; i < n; ++i) EXPECT(near(t[i] + s[i] + r[i], x[i], 1e-9));
    }
    EXPECT(wrcast_normalize_weights(NULL, 3, 1.0, w) == WRCAST_E_ARGUMENT);
}

int main(int argc, char** argv) {
    const char* dir = argc > 1 ? argv[1] : "capi_out";
    char path[1024], model_dir[1024];
    wrcast_config* cfg = NULL;
    wrcast_panel *panel = NULL, *again = NULL;
    wrcast_stage1 *s1 = NULL, *s1b = NULL;
    wrcast_model *m = NULL, *mb = NULL;
    size_t count = 0;
    double wr_q = 0, add_q = 0, alpha = 0;
    const double* losses = NULL;
    int passed = 0;

    mkdir(dir, 0755);
    wrcast_set_quiet(1);
    EXPECT(strlen(wrcast_version()) > 0);
    EXPECT(strcmp(wrcast_status_name(WRCAST_E_DATA), "") != 0);

    numerics();

    OK(wrcast_config_create(&cfg));
    OK(wrcast_config_set(cfg, "n_series", "6"));
    OK(wrcast_config_set(cfg, "length", "160"));
    OK(wrcast_config_set(cfg, "T", "28"));
    OK(wrcast_config_set(cfg, "H", "7"));
    OK(wrcast_config_set(cfg, "windows_per_series", "8"));
    OK(wrcast_config_set(cfg, "channels", "8"));
    OK(wrcast_config_set(cfg, "head_hidden", "8"));
    OK(wrcast_config_set(cfg, "epochs", "2"));
    OK(wrcast_config_set(cfg, "fforma_trees", "10"));
    OK(wrcast_config_set(cfg, "dml_trees", "10"));
    OK(wrcast_config_set(cfg, "n_p", "7"));

    OK(wrcast_panel_synthetic(cfg, 3, &panel));
    OK(wrcast_panel_series_count(panel, &count));
    EXPECT(count == 6);
    OK(wrcast_panel_point_count(panel, &count));
    EXPECT(count == 960);

    snprintf(path, sizeof path, "%s/panel.csv", dir);
    OK(wrcast_panel_write_csv(panel, path));
    OK(wrcast_panel_load_csv(path, &again));
    OK(wrcast_panel_point_count(again, &count));
    EXPECT(count == 960);

    snprintf(path, sizeof path, "%s/decomposition.csv", dir);
    OK(wrcast_decompose_panel(panel, cfg, path));
    EXPECT(file_exists(path));

    OK(wrcast_stage1_fit(panel, cfg, 1, &s1));
    snprintf(path, sizeof path, "%s/stage1.json", dir);
    OK(wrcast_stage1_save(s1, path));
    OK(wrcast_stage1_load(path, &s1b));
    snprintf(path, sizeof path, "%s/components.csv", dir);
    OK(wrcast_stage1_write_components(s1b, panel, cfg, path));
    EXPECT(file_exists(path));
    snprintf(path, sizeof path, "%s/baseline.csv", dir);
    OK(wrcast_stage1_write_baseline(s1, panel, cfg, path));
    EXPECT(file_exists(path));

    OK(wrcast_model_train(panel, cfg, 1, &m));
    OK(wrcast_model_alpha(m, &alpha));
    EXPECT(alpha == 1.0);
    OK(wrcast_model_epoch_losses(m, &losses, &count));
    EXPECT(count == 2 && losses != NULL && losses[1] > 0);
    snprintf(model_dir, sizeof model_dir, "%s/model", dir);
    OK(wrcast_model_save(m, model_dir));
    OK(wrcast_model_load(model_dir, &mb));
    snprintf(path, sizeof path, "%s/forecast.csv", dir);
    OK(wrcast_model_forecast(mb, panel, path));
    EXPECT(file_exists(path));
    snprintf(path, sizeof path, "%s/evaluation.json", dir);
    OK(wrcast_model_evaluate(mb, panel, path, &wr_q, &add_q));
    EXPECT(wr_q >= 0 && add_q >= 0 && isfinite(wr_q));
    OK(wrcast_model_report(mb, panel, dir));
    snprintf(path, sizeof path, "%s/weight_summary.csv", dir);
    EXPECT(file_exists(path));

    OK(wrcast_theory_check(1, dir, &passed));
    EXPECT(passed == 1);

    /* error paths */
    EXPECT(wrcast_panel_load_csv("/nonexistent/panel.csv", &again) == WRCAST_E_IO);
    EXPECT(wrcast_panel_load_electricity("/nonexistent/LD2011_2014.txt", 10, &again) == WRCAST_E_IO);
    EXPECT(strstr(wrcast_last_error(), "archive.ics.uci.edu") != NULL);
    EXPECT(wrcast_model_load("/nonexistent", &mb) != WRCAST_OK);
    OK(wrcast_config_set(cfg, "N", "4"));
    EXPECT(wrcast_model_train(panel, cfg, 1, &m) == WRCAST_E_CONFIG);
    EXPECT(wrcast_panel_series_count(NULL, &count) == WRCAST_E_ARGUMENT);

    wrcast_model_free(m);
    wrcast_model_free(mb);
    wrcast_stage1_free(s1);
    wrcast_stage1_free(s1b);
    wrcast_panel_free(panel);
    wrcast_panel_free(again);
    wrcast_config_free(cfg);
    wrcast_config_free(NULL);

    if (failures) fprintf(stderr, "%d failure(s)\n", failures);
    else printf("capi: all checks passed\n");
    return failures ? 1 : 0;
}
