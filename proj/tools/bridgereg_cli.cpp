#include <cstdio>
#include <cstdint>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bridgereg.h"

namespace {

int exit_code(br_status status) {
  if (status == BR_OK) return 0;
  if (status == BR_ERR_SOLVER || status == BR_ERR_SINGULAR) return 2;
  return 1;
}

int report(br_status status) {
  if (status != BR_OK) {
    std::fprintf(stderr, "bridgereg: %s: %s\n", br_status_name(status),
                 br_last_error());
  }
  return exit_code(status);
}

struct ConfigFlags {
  std::string preset = "default";
  std::string config_path;
  std::string impediment;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t trials = 0;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--preset", f.preset, "Named experiment preset")
      ->capture_default_str();
  cmd->add_option("--config", f.config_path,
                  "JSON config file (overrides --preset)");
  cmd->add_option("--impediment", f.impediment,
                  "none | covariate_noise | outcome_outliers");
  cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&f](const std::uint64_t& s) {
        f.seed = s;
        f.seed_given = true;
      },
      "Base seed");
  cmd->add_option("--trials", f.trials, "Number of trials T");
}

// Builds the config: file or preset first, then flag overrides.
br_status build_config(const ConfigFlags& f, br_config** out) {
  br_status st = f.config_path.empty()
                     ? br_config_preset(f.preset.c_str(), out)
                     : br_config_load(f.config_path.c_str(), out);
  if (st != BR_OK) return st;
  if (f.seed_given) st = br_config_set_seed(*out, f.seed);
  if (st == BR_OK && !f.impediment.empty()) {
    st = br_config_set_impediment(*out, f.impediment.c_str());
  }
  if (st == BR_OK && f.trials > 0) st = br_config_set_trials(*out, f.trials);
  if (st != BR_OK) {
    br_config_free(*out);
    *out = nullptr;
  }
  return st;
}

int run_sweep_command(const ConfigFlags& f, const std::string& out_csv,
                      const std::string& out_svg, std::size_t jobs) {
  br_config* config = nullptr;
  br_status st = build_config(f, &config);
  if (st != BR_OK) return report(st);
  br_sweep_result* result = nullptr;
  st = br_run_sweep(config, jobs, &result);
  br_config_free(config);
  if (st != BR_OK) return report(st);

  for (std::size_t k = 0; k < br_sweep_warning_count(result); ++k) {
    std::fprintf(stderr, "warning: %s\n", br_sweep_warning(result, k));
  }
  if (!out_csv.empty()) {
    st = br_sweep_write_csv(result, out_csv.c_str());
  } else {
    std::printf("param,bias,variance,mean_train_loss,n_converged\n");
    for (std::size_t k = 0; k < br_sweep_row_count(result); ++k) {
      br_sweep_row row;
      br_sweep_get_row(result, k, &row);
      std::printf("%.17g,%.17g,%.17g,%.17g,%zu\n", row.param, row.bias,
                  row.variance, row.mean_train_loss, row.n_converged);
    }
  }
  if (st == BR_OK && !out_svg.empty()) {
    st = br_sweep_write_svg(result, out_svg.c_str());
  }
  br_sweep_result_free(result);
  return report(st);
}

int config_command(const ConfigFlags& f, const std::string& out) {
  br_config* config = nullptr;
  br_status st = build_config(f, &config);
  if (st != BR_OK) return report(st);
  if (!out.empty()) {
    st = br_config_save(config, out.c_str());
  } else {
    char* text = nullptr;
    st = br_config_to_json(config, &text);
    if (st == BR_OK) std::fputs(text, stdout);
    br_string_free(text);
  }
  br_config_free(config);
  return report(st);
}

int dataset_command(const ConfigFlags& f, std::size_t trial,
                    const std::string& out) {
  br_config* config = nullptr;
  br_status st = build_config(f, &config);
  if (st != BR_OK) return report(st);
  br_dataset* data = nullptr;
  st = br_dataset_trial(config, trial, &data);
  br_config_free(config);
  if (st == BR_OK) st = br_dataset_write_csv(data, out.c_str());
  br_dataset_free(data);
  return report(st);
}

int fit_command(const std::string& path, const std::string& estimator,
                double param, double sigma) {
  br_dataset* data = nullptr;
  br_status st = br_dataset_read_csv(path.c_str(), &data);
  if (st != BR_OK) return report(st);
  std::vector<double> theta(br_dataset_d(data));
  br_fit_info info{};
  st = estimator == "dpd"
           ? br_fit_dpd(data, param, sigma, theta.data(), theta.size(), &info)
           : br_fit(data, estimator.c_str(), param, theta.data(),
                    theta.size(), &info);
  br_dataset_free(data);
  if (st != BR_OK) return report(st);
  std::printf("theta_hat:");
  for (double v : theta) std::printf(" %.17g", v);
  std::printf("\nloss_value: %.17g\niterations: %zu\nconverged: %s\n",
              info.loss_value, info.iterations,
              info.converged ? "yes" : "no");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimistic/pessimistic regression bridge and bias-variance "
               "sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(br_version()));

  ConfigFlags sweep_flags;
  std::string out_csv, out_svg;
  std::size_t jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a bias/variance sweep");
  add_config_flags(sweep, sweep_flags);
  sweep->add_option("--out-csv", out_csv, "CSV output (default: stdout)");
  sweep->add_option("--out-svg", out_svg, "SVG plot output");
  sweep->add_option("--jobs", jobs, "Worker threads (0 = all cores)")
      ->capture_default_str();

  auto* presets = app.add_subcommand("presets", "List preset names");

  ConfigFlags config_flags;
  std::string config_out;
  auto* config = app.add_subcommand("config", "Print or save a config as JSON");
  add_config_flags(config, config_flags);
  config->add_option("--out", config_out, "Write to file instead of stdout");

  ConfigFlags dataset_flags;
  std::size_t trial = 0;
  std::string dataset_out;
  auto* dataset =
      app.add_subcommand("dataset", "Write the dataset of one sweep trial");
  add_config_flags(dataset, dataset_flags);
  dataset->add_option("--trial", trial, "Trial index")->capture_default_str();
  dataset->add_option("--out", dataset_out, "CSV path")->required();

  std::string fit_data, estimator = "ols";
  double param = 0.0;
  double sigma = 1.0;
  auto* fit = app.add_subcommand("fit", "Fit one estimator to a CSV dataset");
  fit->add_option("--data", fit_data, "Dataset CSV (x1..xd,y)")->required();
  fit->add_option("--estimator", estimator,
                  "ols | bridge | outcome_optimistic | covariate_pessimistic "
                  "| deming | dpd")
      ->capture_default_str();
  fit->add_option("--param", param, "lambda, tau or DPD exponent")
      ->capture_default_str();
  fit->add_option("--sigma", sigma, "sigma_y for dpd")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*sweep) return run_sweep_command(sweep_flags, out_csv, out_svg, jobs);
  if (*presets) {
    for (std::size_t k = 0; k < br_preset_count(); ++k) {
      std::printf("%s\n", br_preset_name(k));
    }
    return 0;
  }
  if (*config) return config_command(config_flags, config_out);
  if (*dataset) return dataset_command(dataset_flags, trial, dataset_out);
  if (*fit) return fit_command(fit_data, estimator, param, sigma);
  return 1;
}
