#ifndef BRIDGEREG_H
#define BRIDGEREG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BRIDGEREG_BUILDING)
#    define BR_API __declspec(dllexport)
#  else
#    define BR_API __declspec(dllimport)
#  endif
#else
#  define BR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum br_status {
  BR_OK = 0,
  BR_ERR_DIMENSION = 1,
  BR_ERR_CONFIG = 2,
  BR_ERR_SINGULAR = 3,
  BR_ERR_SOLVER = 4,
  BR_ERR_BUDGET = 5,
  BR_ERR_IO = 6,
  BR_ERR_PLOT = 7,
  BR_ERR_INVALID_ARGUMENT = 8,
  BR_ERR_INTERNAL = 9
} br_status;

typedef struct br_config br_config;
typedef struct br_sweep_result br_sweep_result;
typedef struct br_dataset br_dataset;

typedef struct br_sweep_row {
  double param;
  double bias;
  double variance;
  double mean_train_loss;
  size_t n_converged;
} br_sweep_row;

typedef struct br_fit_info {
  double loss_value;
  size_t iterations;
  int converged;
} br_fit_info;

/* Message of the last failed call on this thread; "" if none. */
BR_API const char* br_last_error(void);
BR_API const char* br_status_name(br_status status);
BR_API const char* br_version(void);

/* ---- configuration ---------------------------------------------------- */

BR_API size_t br_preset_count(void);
/* NULL when index is out of range. */
BR_API const char* br_preset_name(size_t index);

BR_API br_status br_config_preset(const char* name, br_config** out);
BR_API br_status br_config_from_json(const char* text, br_config** out);
BR_API br_status br_config_load(const char* path, br_config** out);
BR_API br_status br_config_save(const br_config* config, const char* path);
/* The returned string must be released with br_string_free. */
BR_API br_status br_config_to_json(const br_config* config, char** out);
BR_API void br_config_free(br_config* config);

BR_API br_status br_config_set_seed(br_config* config, uint64_t seed);
/* kind: "none", "covariate_noise" or "outcome_outliers". */
BR_API br_status br_config_set_impediment(br_config* config, const char* kind);
BR_API br_status br_config_set_trials(br_config* config, size_t trials);
/* Replaces the grid of the configured family (lambda or DPD exponent). */
BR_API br_status br_config_set_grid(br_config* config, const double* values,
                                    size_t count);

BR_API void br_string_free(char* text);

/* ---- sweeps ----------------------------------------------------------- */

/* jobs = 0 uses every hardware thread. */
BR_API br_status br_run_sweep(const br_config* config, size_t jobs,
                              br_sweep_result** out);
BR_API void br_sweep_result_free(br_sweep_result* result);
BR_API size_t br_sweep_row_count(const br_sweep_result* result);
BR_API br_status br_sweep_get_row(const br_sweep_result* result, size_t index,
                                  br_sweep_row* out);
BR_API size_t br_sweep_warning_count(const br_sweep_result* result);
/* NULL when index is out of range. */
BR_API const char* br_sweep_warning(const br_sweep_result* result,
                                    size_t index);
BR_API br_status br_sweep_write_csv(const br_sweep_result* result,
                                    const char* path);
BR_API br_status br_sweep_write_svg(const br_sweep_result* result,
                                    const char* path);

/* ---- datasets --------------------------------------------------------- */

/* true_model: "linear", "exp", "cos" or "quad_minus_one". */
BR_API br_status br_dataset_generate(const char* true_model,
                                     const double* theta_star, size_t d,
                                     size_t n, double sigma_y, uint64_t seed,
                                     br_dataset** out);
/* Trial `trial` of a sweep, impediment applied. */
BR_API br_status br_dataset_trial(const br_config* config, size_t trial,
                                  br_dataset** out);
BR_API br_status br_dataset_apply_impediment(br_dataset* data,
                                             const char* kind, uint64_t seed);
BR_API br_status br_dataset_read_csv(const char* path, br_dataset** out);
BR_API br_status br_dataset_write_csv(const br_dataset* data,
                                      const char* path);
BR_API size_t br_dataset_n(const br_dataset* data);
BR_API size_t br_dataset_d(const br_dataset* data);
BR_API void br_dataset_free(br_dataset* data);

/* ---- fits ------------------------------------------------------------- */

/*
 * estimator / param:
 *   "ols"                    param ignored
 *   "bridge"                 lambda
 *   "outcome_optimistic"     tau > 0
 *   "covariate_pessimistic"  lambda > 0
 *   "deming"                 tau > 0
 * theta_len must equal the dataset dimension. info may be NULL.
 */
BR_API br_status br_fit(const br_dataset* data, const char* estimator,
                        double param, double* theta_out, size_t theta_len,
                        br_fit_info* info);
BR_API br_status br_fit_dpd(const br_dataset* data, double beta,
                            double sigma_y, double* theta_out,
                            size_t theta_len, br_fit_info* info);

#ifdef __cplusplus
}
#endif

#endif /* BRIDGEREG_H */
