#include "bridgereg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "bridgereg/errors.hpp"
#include "bridgereg/rng.hpp"
#include "format.hpp"

namespace bridgereg {

using nlohmann::json;

std::string_view to_string(EstimatorFamily family) {
  return family == EstimatorFamily::kBridge ? "bridge" : "dpd";
}

EstimatorFamily estimator_family_from_string(std::string_view name) {
  if (name == "bridge") return EstimatorFamily::kBridge;
  if (name == "dpd") return EstimatorFamily::kDpd;
  throw ConfigError("unknown estimator family '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- config

namespace {

void check_increasing(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw ConfigError(std::string(what) + " is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k])) {
      throw ConfigError(std::string(what) + " has a non-finite entry");
    }
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw ConfigError(std::string(what) + " must be strictly increasing");
    }
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (d < 1) throw ConfigError("d must be >= 1");
  if (n <= d) {
    throw ConfigError("n = " + std::to_string(n) + " must exceed d = " +
                      std::to_string(d));
  }
  if (T < 1) throw ConfigError("T must be >= 1");
  if (!(sigma_y > 0.0) || !std::isfinite(sigma_y)) {
    throw ConfigError("sigma_y must be positive");
  }
  if (static_cast<std::size_t>(theta_star.size()) != d) {
    throw DimensionError("theta_star has " +
                         std::to_string(theta_star.size()) +
                         " entries, d = " + std::to_string(d));
  }
  if (!theta_star.allFinite()) throw ConfigError("theta_star must be finite");
  if (!(impediment.noise_sd >= 0.0)) throw ConfigError("noise_sd must be >= 0");
  if (!std::isfinite(impediment.outlier_shift)) {
    throw ConfigError("outlier_shift must be finite");
  }
  (void)impediment.outlier_count(n);
  if (estimator_family == EstimatorFamily::kBridge) {
    check_increasing(lambda_grid, "lambda_grid");
    if (std::find(lambda_grid.begin(), lambda_grid.end(), 0.0) ==
        lambda_grid.end()) {
      throw ConfigError("lambda_grid must contain 0");
    }
  } else {
    check_increasing(dpd_beta_grid, "dpd_beta_grid");
    if (dpd_beta_grid.front() <= -1.0) {
      throw ConfigError("dpd_beta_grid entries must exceed -1");
    }
  }
  if (true_model != ModelKind::kLinear && mc_samples < 1000) {
    throw ConfigError("mc_samples must be >= 1000 for nonlinear truths");
  }
}

const std::vector<double>& ExperimentConfig::grid() const {
  return estimator_family == EstimatorFamily::kBridge ? lambda_grid
                                                      : dpd_beta_grid;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back((k - 20) / 20.0);
  return grid;
}

std::vector<double> default_dpd_beta_grid() {
  std::vector<double> grid;
  for (int k = -9; k <= 10; ++k) grid.push_back(k / 10.0);
  return grid;
}

std::vector<std::string> preset_names() {
  return {"default",     "smaller_n",   "larger_sigma", "misspec_exp",
          "misspec_cos", "misspec_quad", "ols_best",    "dpd"};
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  c.n = 50;
  c.d = 3;
  c.T = 100;
  c.sigma_y = 1.0;
  c.theta_star = Eigen::Vector3d(0.0, 1.5, 2.0 / 3.0);
  c.lambda_grid = default_lambda_grid();
  c.dpd_beta_grid = default_dpd_beta_grid();
  if (name == "default") return c;
  if (name == "smaller_n") {
    c.n = 25;
    return c;
  }
  if (name == "larger_sigma") {
    c.sigma_y = 2.0;
    return c;
  }
  if (name == "misspec_exp") {
    c.true_model = ModelKind::kExp;
    return c;
  }
  if (name == "misspec_cos") {
    c.true_model = ModelKind::kCos;
    return c;
  }
  if (name == "misspec_quad") {
    c.true_model = ModelKind::kQuadMinusOne;
    return c;
  }
  if (name == "ols_best") {
    c.n = 250;
    return c;
  }
  if (name == "dpd") {
    c.estimator_family = EstimatorFamily::kDpd;
    return c;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

namespace {

json solver_to_json(const SolverOptions& s) {
  return json{{"max_iterations", s.max_iterations},
              {"step_tolerance", s.step_tolerance},
              {"gradient_tolerance", s.gradient_tolerance},
              {"subgradient_iterations", s.subgradient_iterations},
              {"stall_window", s.stall_window},
              {"stall_tolerance", s.stall_tolerance},
              {"estimating_tolerance", s.estimating_tolerance},
              {"fd_gradient_tolerance", s.fd_gradient_tolerance}};
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const char* where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) {
      throw ConfigError(std::string("unknown key '") + item.key() + "' in " +
                        where);
    }
  }
}

SolverOptions solver_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("'solver' must be an object");
  reject_unknown(j,
                 {"max_iterations", "step_tolerance", "gradient_tolerance",
                  "subgradient_iterations", "stall_window", "stall_tolerance",
                  "estimating_tolerance", "fd_gradient_tolerance"},
                 "solver");
  SolverOptions s;
  if (j.contains("max_iterations")) read_field(j, "max_iterations", s.max_iterations);
  if (j.contains("step_tolerance")) read_field(j, "step_tolerance", s.step_tolerance);
  if (j.contains("gradient_tolerance")) {
    read_field(j, "gradient_tolerance", s.gradient_tolerance);
  }
  if (j.contains("subgradient_iterations")) {
    read_field(j, "subgradient_iterations", s.subgradient_iterations);
  }
  if (j.contains("stall_window")) read_field(j, "stall_window", s.stall_window);
  if (j.contains("stall_tolerance")) read_field(j, "stall_tolerance", s.stall_tolerance);
  if (j.contains("estimating_tolerance")) {
    read_field(j, "estimating_tolerance", s.estimating_tolerance);
  }
  if (j.contains("fd_gradient_tolerance")) {
    read_field(j, "fd_gradient_tolerance", s.fd_gradient_tolerance);
  }
  return s;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["n"] = c.n;
  j["d"] = c.d;
  j["T"] = c.T;
  j["sigma_y"] = c.sigma_y;
  j["theta_star"] =
      std::vector<double>(c.theta_star.data(),
                          c.theta_star.data() + c.theta_star.size());
  j["true_model"] = std::string(to_string(c.true_model));
  j["impediment"] = json{{"kind", std::string(to_string(c.impediment.kind))},
                         {"noise_sd", c.impediment.noise_sd},
                         {"outlier_shift", c.impediment.outlier_shift},
                         {"outlier_frac", c.impediment.outlier_frac}};
  j["lambda_grid"] = c.lambda_grid;
  j["estimator_family"] = std::string(to_string(c.estimator_family));
  j["dpd_beta_grid"] = c.dpd_beta_grid;
  j["base_seed"] = c.base_seed;
  j["mc_samples"] = c.mc_samples;
  j["solver"] = solver_to_json(c.solver);
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"name", "n", "d", "T", "sigma_y", "theta_star", "true_model",
                  "impediment", "lambda_grid", "estimator_family",
                  "dpd_beta_grid", "base_seed", "mc_samples", "solver"},
                 "config");
  ExperimentConfig c = preset("default");
  c.name = "custom";
  if (j.contains("name")) read_field(j, "name", c.name);
  if (j.contains("n")) read_field(j, "n", c.n);
  if (j.contains("d")) read_field(j, "d", c.d);
  if (j.contains("T")) read_field(j, "T", c.T);
  if (j.contains("sigma_y")) read_field(j, "sigma_y", c.sigma_y);
  if (j.contains("theta_star")) {
    std::vector<double> v;
    read_field(j, "theta_star", v);
    c.theta_star = Eigen::Map<const Eigen::VectorXd>(
        v.data(), static_cast<Eigen::Index>(v.size()));
  }
  if (j.contains("true_model")) {
    std::string s;
    read_field(j, "true_model", s);
    c.true_model = model_kind_from_string(s);
  }
  if (j.contains("impediment")) {
    const json& imp = j.at("impediment");
    if (!imp.is_object()) throw ConfigError("'impediment' must be an object");
    reject_unknown(imp, {"kind", "noise_sd", "outlier_shift", "outlier_frac"},
                   "impediment");
    if (imp.contains("kind")) {
      std::string s;
      read_field(imp, "kind", s);
      c.impediment.kind = impediment_kind_from_string(s);
    }
    if (imp.contains("noise_sd")) read_field(imp, "noise_sd", c.impediment.noise_sd);
    if (imp.contains("outlier_shift")) {
      read_field(imp, "outlier_shift", c.impediment.outlier_shift);
    }
    if (imp.contains("outlier_frac")) {
      read_field(imp, "outlier_frac", c.impediment.outlier_frac);
    }
  }
  if (j.contains("lambda_grid")) read_field(j, "lambda_grid", c.lambda_grid);
  if (j.contains("estimator_family")) {
    std::string s;
    read_field(j, "estimator_family", s);
    c.estimator_family = estimator_family_from_string(s);
  }
  if (j.contains("dpd_beta_grid")) read_field(j, "dpd_beta_grid", c.dpd_beta_grid);
  if (j.contains("base_seed")) read_field(j, "base_seed", c.base_seed);
  if (j.contains("mc_samples")) read_field(j, "mc_samples", c.mc_samples);
  if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"));
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return config_from_json(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_config(const ExperimentConfig& config,
                 const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << config_to_json(config);
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

// ----------------------------------------------------------------- sweep

Dataset trial_dataset(const ExperimentConfig& config, std::size_t trial) {
  const TrueModel truth{config.true_model, config.theta_star};
  const Dataset clean = generate_dataset(
      truth, config.n, config.d, config.sigma_y,
      derive_seed(config.base_seed, streams::kDataset, trial));
  return apply_impediment(
      clean, config.impediment,
      derive_seed(config.base_seed, streams::kImpediment, trial));
}

namespace {

struct TrialFits {
  std::vector<Eigen::VectorXd> thetas;
  std::vector<double> losses;
  std::vector<char> converged;
};

TrialFits fit_trial(const ExperimentConfig& config, std::size_t trial) {
  const Dataset data = trial_dataset(config, trial);
  const auto& grid = config.grid();
  TrialFits out;
  out.thetas.reserve(grid.size());
  for (double p : grid) {
    const FitResult fit =
        config.estimator_family == EstimatorFamily::kBridge
            ? fit_bridge(data, p, config.solver)
            : fit_dpd(data, DpdSpec{p, config.sigma_y}, config.solver);
    out.thetas.push_back(fit.theta_hat);
    out.losses.push_back(fit.loss_value);
    out.converged.push_back(fit.converged ? 1 : 0);
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config, std::size_t jobs) {
  config.validate();
  const std::size_t T = config.T;
  std::vector<TrialFits> fits(T);
  std::vector<std::exception_ptr> errors(T);

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, T);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= T) return;
      try {
        fits[t] = fit_trial(config, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // Report the failure of the lowest trial index so the error does not
  // depend on scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult result;
  result.config_echo = config;
  for (std::size_t t = 0; t < T; ++t) {
    result.seeds_used.push_back(
        derive_seed(config.base_seed, streams::kDataset, t));
  }
  const bool linear = config.true_model == ModelKind::kLinear;
  result.method = linear ? DecompositionMethod::kClosedForm
                         : DecompositionMethod::kMonteCarlo;
  Eigen::MatrixXd sample;
  if (!linear) {
    sample = draw_covariates(
        CovariateKind::kUniformPlusMinusOne, config.mc_samples,
        static_cast<Eigen::Index>(config.d),
        derive_seed(config.base_seed, streams::kMonteCarlo, 0));
  }

  const auto& grid = config.grid();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    TrialEnsemble ens;
    ens.model = TrueModel{config.true_model, config.theta_star};
    double loss_sum = 0.0;
    std::size_t converged = 0;
    for (std::size_t t = 0; t < T; ++t) {
      ens.theta_hats.push_back(fits[t].thetas[g]);
      loss_sum += fits[t].losses[g];
      converged += static_cast<std::size_t>(fits[t].converged[g]);
    }
    const BiasVariance bv =
        linear ? decompose_closed_form(ens, config.theta_star)
               : decompose_on_sample(ens, sample);
    SweepRow row;
    row.param = grid[g];
    row.bias = bv.bias;
    row.variance = bv.variance;
    row.mean_train_loss = loss_sum / static_cast<double>(T);
    row.n_converged = converged;
    result.rows.push_back(row);
    if (5 * (T - converged) > T) {
      result.warnings.push_back("param " + format_short(grid[g]) + ": " +
                                std::to_string(T - converged) + " of " +
                                std::to_string(T) + " fits unconverged");
    }
  }
  return result;
}

// ------------------------------------------------------------------- CSV

std::string render_csv(const SweepResult& result) {
  std::string out = "param,bias,variance,mean_train_loss,n_converged\n";
  for (const auto& r : result.rows) {
    out += format_double(r.param) + ',' + format_double(r.bias) + ',' +
           format_double(r.variance) + ',' + format_double(r.mean_train_loss) +
           ',' + std::to_string(r.n_converged) + '\n';
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << render_csv(result);
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<SweepRow> read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(is, line) ||
      line != "param,bias,variance,mean_train_loss,n_converged") {
    throw IoError(path.string() + ": missing sweep CSV header");
  }
  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": expected 5 fields");
    }
    SweepRow r;
    r.param = parse_double(cells[0]);
    r.bias = parse_double(cells[1]);
    r.variance = parse_double(cells[2]);
    r.mean_train_loss = parse_double(cells[3]);
    const double count = parse_double(cells[4]);
    if (count < 0.0 || count != std::floor(count)) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": n_converged must be a count");
    }
    r.n_converged = static_cast<std::size_t>(count);
    rows.push_back(r);
  }
  return rows;
}

// ------------------------------------------------------------------- SVG

namespace {

std::pair<double, double> padded_range(double lo, double hi) {
  double span = hi - lo;
  if (span <= 0.0) span = std::max(std::abs(lo), 1.0);
  return {lo - 0.05 * span, hi + 0.05 * span};
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

PlotLayout plot_layout(const SweepResult& result) {
  if (result.rows.size() < 2) {
    throw PlotError("a plot needs at least 2 grid points, got " +
                    std::to_string(result.rows.size()));
  }
  double x_min = result.rows.front().param;
  double x_max = x_min;
  double y_min = result.rows.front().bias;
  double y_max = y_min;
  for (const auto& r : result.rows) {
    if (!std::isfinite(r.param) || !std::isfinite(r.bias) ||
        !std::isfinite(r.variance)) {
      throw PlotError("cannot plot non-finite values");
    }
    x_min = std::min(x_min, r.param);
    x_max = std::max(x_max, r.param);
    y_min = std::min({y_min, r.bias, r.variance});
    y_max = std::max({y_max, r.bias, r.variance});
  }
  PlotLayout layout;
  std::tie(layout.x_lo, layout.x_hi) = padded_range(x_min, x_max);
  std::tie(layout.y_lo, layout.y_hi) = padded_range(y_min, y_max);
  return layout;
}

std::string render_svg(const SweepResult& result) {
  const PlotLayout L = plot_layout(result);
  auto px = [&](double x) {
    return L.left + (x - L.x_lo) / (L.x_hi - L.x_lo) * (L.right - L.left);
  };
  auto py = [&](double y) {
    return L.bottom - (y - L.y_lo) / (L.y_hi - L.y_lo) * (L.bottom - L.top);
  };
  const bool dpd =
      result.config_echo.estimator_family == EstimatorFamily::kDpd;
  const char* x_label = dpd ? "beta (DPD exponent)" : "lambda";

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << format_short(L.width) << "\" height=\"" << format_short(L.height)
     << "\" viewBox=\"0 0 " << format_short(L.width) << ' '
     << format_short(L.height) << "\" font-family=\"sans-serif\" "
     << "font-size=\"12\">\n";
  os << "  <title>" << xml_escape(result.config_echo.name)
     << ": bias and variance</title>\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"" << format_short(L.width)
     << "\" height=\"" << format_short(L.height) << "\" fill=\"white\"/>\n";
  os << "  <g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
     << "    <line x1=\"" << L.left << "\" y1=\"" << L.bottom << "\" x2=\""
     << L.right << "\" y2=\"" << L.bottom << "\"/>\n"
     << "    <line x1=\"" << L.left << "\" y1=\"" << L.top << "\" x2=\""
     << L.left << "\" y2=\"" << L.bottom << "\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = L.x_lo + (L.x_hi - L.x_lo) * k / 4.0;
    const double fy = L.y_lo + (L.y_hi - L.y_lo) * k / 4.0;
    os << "    <line x1=\"" << format_short(px(fx)) << "\" y1=\"" << L.bottom
       << "\" x2=\"" << format_short(px(fx)) << "\" y2=\"" << L.bottom + 5
       << "\"/>\n"
       << "    <line x1=\"" << L.left - 5 << "\" y1=\""
       << format_short(py(fy)) << "\" x2=\"" << L.left << "\" y2=\""
       << format_short(py(fy)) << "\"/>\n";
  }
  os << "  </g>\n  <g class=\"tick-labels\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = L.x_lo + (L.x_hi - L.x_lo) * k / 4.0;
    const double fy = L.y_lo + (L.y_hi - L.y_lo) * k / 4.0;
    os << "    <text x=\"" << format_short(px(fx)) << "\" y=\""
       << L.bottom + 18 << "\" text-anchor=\"middle\">"
       << format_short(fx, 3) << "</text>\n"
       << "    <text x=\"" << L.left - 8 << "\" y=\""
       << format_short(py(fy) + 4) << "\" text-anchor=\"end\">"
       << format_short(fy, 3) << "</text>\n";
  }
  os << "  </g>\n";
  os << "  <text class=\"x-label\" x=\"" << (L.left + L.right) / 2 << "\" y=\""
     << L.height - 12 << "\" text-anchor=\"middle\">" << x_label
     << "</text>\n";
  os << "  <text class=\"y-label\" x=\"16\" y=\"" << (L.top + L.bottom) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (L.top + L.bottom) / 2 << ")\">bias / variance</text>\n";

  auto polyline = [&](const char* cls, const char* color, auto value) {
    os << "  <polyline class=\"" << cls << "\" fill=\"none\" stroke=\""
       << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < result.rows.size(); ++k) {
      if (k) os << ' ';
      os << format_short(px(result.rows[k].param)) << ','
         << format_short(py(value(result.rows[k])));
    }
    os << "\"/>\n";
  };
  polyline("bias", "#1f77b4", [](const SweepRow& r) { return r.bias; });
  polyline("variance", "#d62728", [](const SweepRow& r) { return r.variance; });

  const double lx = L.right + 20;
  os << "  <g class=\"legend\">\n"
     << "    <line x1=\"" << lx << "\" y1=\"" << L.top + 10 << "\" x2=\""
     << lx + 25 << "\" y2=\"" << L.top + 10
     << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n"
     << "    <text x=\"" << lx + 32 << "\" y=\"" << L.top + 14
     << "\">bias B_T</text>\n"
     << "    <line x1=\"" << lx << "\" y1=\"" << L.top + 30 << "\" x2=\""
     << lx + 25 << "\" y2=\"" << L.top + 30
     << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n"
     << "    <text x=\"" << lx + 32 << "\" y=\"" << L.top + 34
     << "\">variance V_T</text>\n"
     << "  </g>\n";
  os << "</svg>\n";
  return os.str();
}

void emit_svg_plot(const SweepResult& result,
                   const std::filesystem::path& path) {
  const std::string svg = render_svg(result);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << svg;
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace bridgereg
