/* wrcast C interface. Every function returns a wrcast_status; on failure the
 * message is available from wrcast_last_error() on the calling thread. */
#ifndef WRCAST_WRCAST_H
#define WRCAST_WRCAST_H

#include <stddef.h>
#include <stdint.h>

#if defined(WRCAST_BUILDING_LIBRARY)
#define WRCAST_API __attribute__((visibility("default")))
#else
#define WRCAST_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wrcast_status {
    WRCAST_OK = 0,
    WRCAST_E_ARGUMENT = 1, /* null pointer, domain error */
    WRCAST_E_CONFIG = 2,
    WRCAST_E_DATA = 3,
    WRCAST_E_TRAINING = 4,
    WRCAST_E_IO = 5,
    WRCAST_E_STATE = 6,
    WRCAST_E_INTERNAL = 9
} wrcast_status;

typedef struct wrcast_config wrcast_config;
typedef struct wrcast_panel wrcast_panel;
typedef struct wrcast_stage1 wrcast_stage1;
typedef struct wrcast_model wrcast_model;

WRCAST_API const char* wrcast_version(void);
WRCAST_API const char* wrcast_last_error(void);
WRCAST_API const char* wrcast_status_name(wrcast_status status);

/* Warnings go to stderr unless silenced. */
WRCAST_API void wrcast_set_quiet(int quiet);

/* ---- configuration (flat key = value) ---- */
WRCAST_API wrcast_status wrcast_config_create(wrcast_config** out);
WRCAST_API wrcast_status wrcast_config_load(const char* path, wrcast_config** out);
WRCAST_API wrcast_status wrcast_config_set(wrcast_config* cfg, const char* key, const char* value);
WRCAST_API void wrcast_config_free(wrcast_config* cfg);

/* ---- panels ---- */
WRCAST_API wrcast_status wrcast_panel_load_csv(const char* path, wrcast_panel** out);
/* 15-minute wide export summed to daily totals; max_clients 0 keeps all. */
WRCAST_API wrcast_status wrcast_panel_load_electricity(const char* path, size_t max_clients, wrcast_panel** out);
/* Synthetic benchmark panel (n_series, length, theta, ... from cfg). */
WRCAST_API wrcast_status wrcast_panel_synthetic(const wrcast_config* cfg, uint64_t seed, wrcast_panel** out);
WRCAST_API wrcast_status wrcast_panel_series_count(const wrcast_panel* panel, size_t* out);
WRCAST_API wrcast_status wrcast_panel_point_count(const wrcast_panel* panel, size_t* out);
WRCAST_API wrcast_status wrcast_panel_write_csv(const wrcast_panel* panel, const char* path);
WRCAST_API void wrcast_panel_free(wrcast_panel* panel);

/* STL of every series; CSV series_id,date,value,trend,seasonal,remainder. */
WRCAST_API wrcast_status wrcast_decompose_panel(const wrcast_panel* panel, const wrcast_config* cfg,
                                                const char* csv_path);

/* ---- numerics ---- */
WRCAST_API wrcast_status wrcast_normalize_weights(const double* logits, size_t n, double alpha, double* weights);
WRCAST_API wrcast_status wrcast_weight_interval(double alpha, size_t n, double* lo, double* hi);
WRCAST_API wrcast_status wrcast_optimal_weight_n2(double y, double l1_hat, double l2_hat, double* w_star);
/* Open interval (lo, hi) of weights that shrink |w l_hat - l|; empty = 1 when l_hat = l. */
WRCAST_API wrcast_status wrcast_improvement_interval(double l, double l_hat, int* empty, double* lo, double* hi);
/* sum_yhat[i], sum_y[i] are horizon totals of sample i. */
WRCAST_API wrcast_status wrcast_p50_ql(const double* sum_yhat, const double* sum_y, size_t n, double* out);
WRCAST_API wrcast_status wrcast_stl(const double* series, size_t n, size_t period, double* trend, double* seasonal,
                                    double* remainder);

/* ---- stage 1 (baseline, promotion, festival) ---- */
WRCAST_API wrcast_status wrcast_stage1_fit(const wrcast_panel* panel, const wrcast_config* cfg, uint64_t seed,
                                           wrcast_stage1** out);
WRCAST_API wrcast_status wrcast_stage1_save(const wrcast_stage1* s, const char* path);
WRCAST_API wrcast_status wrcast_stage1_load(const char* path, wrcast_stage1** out);
/* Components over each series' forecast plan; CSV series_id,date,baseline,promotion,festival. */
WRCAST_API wrcast_status wrcast_stage1_write_components(const wrcast_stage1* s, const wrcast_panel* panel,
                                                        const wrcast_config* cfg, const char* csv_path);
/* CSV series_id,date,baseline. */
WRCAST_API wrcast_status wrcast_stage1_write_baseline(const wrcast_stage1* s, const wrcast_panel* panel,
                                                      const wrcast_config* cfg, const char* csv_path);
WRCAST_API void wrcast_stage1_free(wrcast_stage1* s);

/* ---- stage 2 model (bundles its stage 1) ---- */
WRCAST_API wrcast_status wrcast_model_train(const wrcast_panel* panel, const wrcast_config* cfg, uint64_t seed,
                                            wrcast_model** out);
/* Writes <dir>/stage1.json and <dir>/model.json. */
WRCAST_API wrcast_status wrcast_model_save(const wrcast_model* m, const char* dir);
WRCAST_API wrcast_status wrcast_model_load(const char* dir, wrcast_model** out);
WRCAST_API wrcast_status wrcast_model_alpha(const wrcast_model* m, double* alpha);
WRCAST_API wrcast_status wrcast_model_epoch_losses(const wrcast_model* m, const double** losses, size_t* count);
/* CSV series_id,date,yhat,<component>_modified...,residual,weight_<component>... */
WRCAST_API wrcast_status wrcast_model_forecast(const wrcast_model* m, const wrcast_panel* panel, const char* csv_path);
/* Scores the last H observed days of every series (W-R and the additive
 * stage 1); writes metric reports as JSON. */
WRCAST_API wrcast_status wrcast_model_evaluate(const wrcast_model* m, const wrcast_panel* panel, const char* json_path,
                                               double* wr_p50_ql, double* additive_p50_ql);
/* Weight and residual histograms over the last-H windows of every series:
 * <dir>/weight_histograms.csv and <dir>/weight_summary.csv. */
WRCAST_API wrcast_status wrcast_model_report(const wrcast_model* m, const wrcast_panel* panel, const char* dir);
WRCAST_API void wrcast_model_free(wrcast_model* m);

/* ---- experiments; outputs go to out_dir ---- */
/* electricity_path NULL or empty runs the synthetic benchmark. */
WRCAST_API wrcast_status wrcast_run_alpha_sweep(const wrcast_config* cfg, uint64_t seed, const char* electricity_path,
                                                const char* out_dir);
WRCAST_API wrcast_status wrcast_run_comparison(const wrcast_config* cfg, uint64_t seed, const char* electricity_path,
                                               const char* out_dir);
/* theory_report.json, region_map.csv, conjecture.csv; passed = 1 when every check holds. */
WRCAST_API wrcast_status wrcast_theory_check(uint64_t seed, const char* out_dir, int* passed);

#ifdef __cplusplus
}
#endif

#endif
