#include "bridgereg.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "bridgereg/errors.hpp"
#include "bridgereg/estimators.hpp"
#include "bridgereg/harness.hpp"
#include "bridgereg/synth.hpp"

struct br_config {
  bridgereg::ExperimentConfig value;
};

struct br_sweep_result {
  bridgereg::SweepResult value;
};

struct br_dataset {
  bridgereg::Dataset value;
};

namespace {

thread_local std::string last_error;

br_status from_code(bridgereg::ErrorCode code) {
  using bridgereg::ErrorCode;
  switch (code) {
    case ErrorCode::kDimension: return BR_ERR_DIMENSION;
    case ErrorCode::kConfig: return BR_ERR_CONFIG;
    case ErrorCode::kSingular: return BR_ERR_SINGULAR;
    case ErrorCode::kSolver: return BR_ERR_SOLVER;
    case ErrorCode::kBudget: return BR_ERR_BUDGET;
    case ErrorCode::kIo: return BR_ERR_IO;
    case ErrorCode::kPlot: return BR_ERR_PLOT;
  }
  return BR_ERR_INTERNAL;
}

br_status fail(br_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
br_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return BR_OK;
  } catch (const bridgereg::Error& e) {
    return fail(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BR_ERR_INTERNAL, "unknown exception");
  }
}

#define BR_REQUIRE(cond, what)                                  \
  do {                                                          \
    if (!(cond)) return fail(BR_ERR_INVALID_ARGUMENT, (what));  \
  } while (0)

void export_fit(const bridgereg::FitResult& fit, double* theta_out,
                br_fit_info* info) {
  for (Eigen::Index j = 0; j < fit.theta_hat.size(); ++j) {
    theta_out[j] = fit.theta_hat[j];
  }
  if (info) {
    info->loss_value = fit.loss_value;
    info->iterations = fit.iterations;
    info->converged = fit.converged ? 1 : 0;
  }
}

}  // namespace

extern "C" {

const char* br_last_error(void) { return last_error.c_str(); }

const char* br_status_name(br_status status) {
  switch (status) {
    case BR_OK: return "ok";
    case BR_ERR_DIMENSION: return "dimension error";
    case BR_ERR_CONFIG: return "config error";
    case BR_ERR_SINGULAR: return "singularity error";
    case BR_ERR_SOLVER: return "solver error";
    case BR_ERR_BUDGET: return "budget error";
    case BR_ERR_IO: return "io error";
    case BR_ERR_PLOT: return "plot error";
    case BR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* br_version(void) { return "0.1.0"; }

size_t br_preset_count(void) { return bridgereg::preset_names().size(); }

const char* br_preset_name(size_t index) {
  static const std::vector<std::string> names = bridgereg::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

br_status br_config_preset(const char* name, br_config** out) {
  BR_REQUIRE(name && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new br_config{bridgereg::preset(name)}; });
}

br_status br_config_from_json(const char* text, br_config** out) {
  BR_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded(
      [&] { *out = new br_config{bridgereg::config_from_json(text)}; });
}

br_status br_config_load(const char* path, br_config** out) {
  BR_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new br_config{bridgereg::load_config(path)}; });
}

br_status br_config_save(const br_config* config, const char* path) {
  BR_REQUIRE(config && path, "null argument");
  return guarded([&] { bridgereg::save_config(config->value, path); });
}

br_status br_config_to_json(const br_config* config, char** out) {
  BR_REQUIRE(config && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const std::string text = bridgereg::config_to_json(config->value);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void br_config_free(br_config* config) { delete config; }

void br_string_free(char* text) { delete[] text; }

br_status br_config_set_seed(br_config* config, uint64_t seed) {
  BR_REQUIRE(config, "null config");
  config->value.base_seed = seed;
  last_error.clear();
  return BR_OK;
}

br_status br_config_set_impediment(br_config* config, const char* kind) {
  BR_REQUIRE(config && kind, "null argument");
  return guarded([&] {
    config->value.impediment.kind = bridgereg::impediment_kind_from_string(kind);
  });
}

br_status br_config_set_trials(br_config* config, size_t trials) {
  BR_REQUIRE(config, "null config");
  BR_REQUIRE(trials >= 1, "trials must be >= 1");
  config->value.T = trials;
  last_error.clear();
  return BR_OK;
}

br_status br_config_set_grid(br_config* config, const double* values,
                             size_t count) {
  BR_REQUIRE(config && (values || count == 0), "null argument");
  return guarded([&] {
    bridgereg::ExperimentConfig next = config->value;
    std::vector<double> grid(values, values + count);
    if (next.estimator_family == bridgereg::EstimatorFamily::kBridge) {
      next.lambda_grid = std::move(grid);
    } else {
      next.dpd_beta_grid = std::move(grid);
    }
    next.validate();
    config->value = std::move(next);
  });
}

br_status br_run_sweep(const br_config* config, size_t jobs,
                       br_sweep_result** out) {
  BR_REQUIRE(config && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new br_sweep_result{bridgereg::run_sweep(config->value, jobs)};
  });
}

void br_sweep_result_free(br_sweep_result* result) { delete result; }

size_t br_sweep_row_count(const br_sweep_result* result) {
  return result ? result->value.rows.size() : 0;
}

br_status br_sweep_get_row(const br_sweep_result* result, size_t index,
                           br_sweep_row* out) {
  BR_REQUIRE(result && out, "null argument");
  BR_REQUIRE(index < result->value.rows.size(), "row index out of range");
  const auto& r = result->value.rows[index];
  *out = br_sweep_row{r.param, r.bias, r.variance, r.mean_train_loss,
                      r.n_converged};
  last_error.clear();
  return BR_OK;
}

size_t br_sweep_warning_count(const br_sweep_result* result) {
  return result ? result->value.warnings.size() : 0;
}

const char* br_sweep_warning(const br_sweep_result* result, size_t index) {
  if (!result || index >= result->value.warnings.size()) return nullptr;
  return result->value.warnings[index].c_str();
}

br_status br_sweep_write_csv(const br_sweep_result* result, const char* path) {
  BR_REQUIRE(result && path, "null argument");
  return guarded([&] { bridgereg::emit_csv(result->value, path); });
}

br_status br_sweep_write_svg(const br_sweep_result* result, const char* path) {
  BR_REQUIRE(result && path, "null argument");
  return guarded([&] { bridgereg::emit_svg_plot(result->value, path); });
}

br_status br_dataset_generate(const char* true_model, const double* theta_star,
                              size_t d, size_t n, double sigma_y,
                              uint64_t seed, br_dataset** out) {
  BR_REQUIRE(true_model && theta_star && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    bridgereg::TrueModel truth;
    truth.kind = bridgereg::model_kind_from_string(true_model);
    truth.theta_star = Eigen::Map<const Eigen::VectorXd>(
        theta_star, static_cast<Eigen::Index>(d));
    *out = new br_dataset{
        bridgereg::generate_dataset(truth, n, d, sigma_y, seed)};
  });
}

br_status br_dataset_trial(const br_config* config, size_t trial,
                           br_dataset** out) {
  BR_REQUIRE(config && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    config->value.validate();
    *out = new br_dataset{bridgereg::trial_dataset(config->value, trial)};
  });
}

br_status br_dataset_apply_impediment(br_dataset* data, const char* kind,
                                      uint64_t seed) {
  BR_REQUIRE(data && kind, "null argument");
  return guarded([&] {
    bridgereg::Impediment imp;
    imp.kind = bridgereg::impediment_kind_from_string(kind);
    data->value = bridgereg::apply_impediment(data->value, imp, seed);
  });
}

br_status br_dataset_read_csv(const char* path, br_dataset** out) {
  BR_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded(
      [&] { *out = new br_dataset{bridgereg::read_dataset_csv(path)}; });
}

br_status br_dataset_write_csv(const br_dataset* data, const char* path) {
  BR_REQUIRE(data && path, "null argument");
  return guarded([&] { bridgereg::write_dataset_csv(data->value, path); });
}

size_t br_dataset_n(const br_dataset* data) {
  return data ? static_cast<size_t>(data->value.n()) : 0;
}

size_t br_dataset_d(const br_dataset* data) {
  return data ? static_cast<size_t>(data->value.d()) : 0;
}

void br_dataset_free(br_dataset* data) { delete data; }

br_status br_fit(const br_dataset* data, const char* estimator, double param,
                 double* theta_out, size_t theta_len, br_fit_info* info) {
  BR_REQUIRE(data && estimator && theta_out, "null argument");
  if (theta_len != static_cast<size_t>(data->value.d())) {
    return fail(BR_ERR_DIMENSION,
                "theta buffer holds " + std::to_string(theta_len) +
                    " entries, dataset has d = " +
                    std::to_string(data->value.d()));
  }
  const std::string name = estimator;
  return guarded([&] {
    bridgereg::FitResult fit;
    if (name == "ols") {
      fit = bridgereg::fit_ols(data->value);
    } else if (name == "bridge") {
      fit = bridgereg::fit_bridge(data->value, param);
    } else if (name == "outcome_optimistic") {
      fit = bridgereg::fit_outcome_optimistic(data->value, param);
    } else if (name == "covariate_pessimistic") {
      fit = bridgereg::fit_covariate_pessimistic(data->value, param);
    } else if (name == "deming") {
      fit = bridgereg::fit_deming_tls(data->value, param);
    } else {
      throw bridgereg::ConfigError("unknown estimator '" + name + "'");
    }
    export_fit(fit, theta_out, info);
  });
}

br_status br_fit_dpd(const br_dataset* data, double beta, double sigma_y,
                     double* theta_out, size_t theta_len, br_fit_info* info) {
  BR_REQUIRE(data && theta_out, "null argument");
  if (theta_len != static_cast<size_t>(data->value.d())) {
    return fail(BR_ERR_DIMENSION, "theta buffer size does not match d");
  }
  return guarded([&] {
    const auto fit =
        bridgereg::fit_dpd(data->value, bridgereg::DpdSpec{beta, sigma_y});
    export_fit(fit, theta_out, info);
  });
}

}  // extern "C"
