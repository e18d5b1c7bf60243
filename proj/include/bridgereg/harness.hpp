#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bridgereg/biasvar.hpp"
#include "bridgereg/estimators.hpp"
#include "bridgereg/model.hpp"
#include "bridgereg/synth.hpp"

namespace bridgereg {

enum class EstimatorFamily { kBridge, kDpd };
std::string_view to_string(EstimatorFamily family);
EstimatorFamily estimator_family_from_string(std::string_view name);

struct ExperimentConfig {
  std::string name = "default";
  std::size_t n = 50;
  std::size_t d = 3;
  std::size_t T = 100;
  double sigma_y = 1.0;
  Eigen::VectorXd theta_star;
  ModelKind true_model = ModelKind::kLinear;
  Impediment impediment;
  /// Strictly increasing; must contain 0 for bridge sweeps.
  std::vector<double> lambda_grid;
  EstimatorFamily estimator_family = EstimatorFamily::kBridge;
  /// Strictly increasing, every entry > -1. Used by DPD sweeps only.
  std::vector<double> dpd_beta_grid;
  std::uint64_t base_seed = 2024;
  /// Covariate sample size for nonlinear truths.
  std::size_t mc_samples = 200000;
  SolverOptions solver;

  /// Throws ConfigError / DimensionError on any broken invariant.
  void validate() const;
  /// The grid swept by the configured family.
  const std::vector<double>& grid() const;
};

/// 41 points, (k - 20) / 20 for k = 0..40.
std::vector<double> default_lambda_grid();
/// -0.9, -0.8, ..., 1.0: the [-1, 1] grid in steps of 0.1 without the
/// non-integrable point -1.
std::vector<double> default_dpd_beta_grid();

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ExperimentConfig preset(std::string_view name);

/// JSON document with one key per ExperimentConfig field. Parsing starts from
/// the default preset and rejects unknown keys.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& config,
                 const std::filesystem::path& path);

struct SweepRow {
  /// lambda for bridge sweeps, the DPD exponent otherwise.
  double param = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double mean_train_loss = 0.0;
  std::size_t n_converged = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  ExperimentConfig config_echo;
  /// Dataset seed of every trial, in trial order.
  std::vector<std::uint64_t> seeds_used;
  DecompositionMethod method = DecompositionMethod::kClosedForm;
  /// One message per grid point with more than 20% unconverged fits.
  std::vector<std::string> warnings;
};

/// The trial-t dataset of a sweep, impediment applied.
Dataset trial_dataset(const ExperimentConfig& config, std::size_t trial);

/// Runs every trial and grid point on `jobs` worker threads (0 picks the
/// hardware concurrency). The result does not depend on `jobs`.
SweepResult run_sweep(const ExperimentConfig& config, std::size_t jobs = 1);

/// Header `param,bias,variance,mean_train_loss,n_converged`, 17 significant
/// digits.
void emit_csv(const SweepResult& result, const std::filesystem::path& path);
std::string render_csv(const SweepResult& result);
std::vector<SweepRow> read_csv(const std::filesystem::path& path);

struct PlotLayout {
  double width = 640.0;
  double height = 400.0;
  /// Plot-area box in SVG user units.
  double left = 70.0;
  double right = 470.0;
  double top = 30.0;
  double bottom = 350.0;
  /// Data ranges mapped onto the box, 5% wider than the data.
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;
};

/// Throws PlotError with fewer than two rows.
PlotLayout plot_layout(const SweepResult& result);
std::string render_svg(const SweepResult& result);
void emit_svg_plot(const SweepResult& result,
                   const std::filesystem::path& path);

}  // namespace bridgereg
