#include "bridgereg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bridgereg/errors.hpp"
#include "bridgereg/rng.hpp"
#include "format.hpp"

namespace bridgereg {

void Dataset::validate() const {
  if (X.rows() < 1 || X.cols() < 1) {
    throw DimensionError("dataset needs n >= 1 and d >= 1");
  }
  if (X.rows() != y.size()) {
    throw DimensionError("dataset has " + std::to_string(X.rows()) +
                         " rows but " + std::to_string(y.size()) +
                         " outcomes");
  }
}

std::string_view to_string(ImpedimentKind kind) {
  switch (kind) {
    case ImpedimentKind::kNone: return "none";
    case ImpedimentKind::kCovariateNoise: return "covariate_noise";
    case ImpedimentKind::kOutcomeOutliers: return "outcome_outliers";
  }
  return "unknown";
}

ImpedimentKind impediment_kind_from_string(std::string_view name) {
  if (name == "none") return ImpedimentKind::kNone;
  if (name == "covariate_noise") return ImpedimentKind::kCovariateNoise;
  if (name == "outcome_outliers") return ImpedimentKind::kOutcomeOutliers;
  throw ConfigError("unknown impediment kind '" + std::string(name) + "'");
}

std::size_t Impediment::outlier_count(std::size_t n) const {
  if (!(outlier_frac >= 0.0 && outlier_frac <= 1.0)) {
    throw ConfigError("outlier_frac must lie in [0, 1]");
  }
  // nearbyint honours the default round-to-nearest-even mode.
  const double count = std::nearbyint(outlier_frac * static_cast<double>(n));
  return static_cast<std::size_t>(count);
}

Dataset generate_dataset(const TrueModel& model, std::size_t n, std::size_t d,
                         double sigma_y, std::uint64_t seed) {
  if (n < 1 || d < 1) throw DimensionError("generate_dataset: n, d >= 1");
  if (static_cast<std::size_t>(model.theta_star.size()) != d) {
    throw DimensionError("generate_dataset: theta_star has " +
                         std::to_string(model.theta_star.size()) +
                         " entries, d = " + std::to_string(d));
  }
  if (!(sigma_y >= 0.0)) throw ConfigError("sigma_y must be non-negative");

  Rng rng(seed);
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  out.y.resize(static_cast<Eigen::Index>(n));
  // Row-major draw order so that a row's covariates are consecutive draws.
  for (Eigen::Index i = 0; i < out.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.X.cols(); ++j) {
      out.X(i, j) = rng.uniform(-1.0, 1.0);
    }
  }
  for (Eigen::Index i = 0; i < out.X.rows(); ++i) {
    const double noise = sigma_y == 0.0 ? 0.0 : sigma_y * rng.normal();
    out.y[i] = model(out.X.row(i).transpose()) + noise;
  }
  return out;
}

Dataset apply_impediment(const Dataset& data, const Impediment& imp,
                         std::uint64_t seed) {
  data.validate();
  Dataset out = data;
  Rng rng(seed);
  switch (imp.kind) {
    case ImpedimentKind::kNone:
      break;
    case ImpedimentKind::kCovariateNoise: {
      if (!(imp.noise_sd >= 0.0)) throw ConfigError("noise_sd must be >= 0");
      for (Eigen::Index i = 0; i < out.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.X.cols(); ++j) {
          out.X(i, j) += imp.noise_sd * rng.normal();
        }
      }
      break;
    }
    case ImpedimentKind::kOutcomeOutliers: {
      const auto n = static_cast<std::size_t>(out.n());
      const std::size_t count = imp.outlier_count(n);
      if (count > n) {
        throw ConfigError("outlier count " + std::to_string(count) +
                          " exceeds n = " + std::to_string(n));
      }
      // Partial Fisher-Yates: the first `count` slots are a uniform sample
      // without replacement.
      std::vector<std::size_t> index(n);
      std::iota(index.begin(), index.end(), std::size_t{0});
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t pick = k + static_cast<std::size_t>(rng.below(n - k));
        std::swap(index[k], index[pick]);
        out.y[static_cast<Eigen::Index>(index[k])] += imp.outlier_shift;
      }
      break;
    }
  }
  return out;
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  data.validate();
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  for (Eigen::Index j = 0; j < data.d(); ++j) os << 'x' << (j + 1) << ',';
  os << "y\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.d(); ++j) {
      os << format_double(data.X(i, j)) << ',';
    }
    os << format_double(data.y[i]) << '\n';
  }
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(is, line)) {
    throw IoError("'" + path.string() + "' is empty");
  }
  const auto columns =
      static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 2) {
    throw IoError("'" + path.string() + "' needs at least x1 and y columns");
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell));
    if (row.size() != columns) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": expected " + std::to_string(columns) + " fields");
    }
    rows.push_back(std::move(row));
  }
  Dataset out;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(columns - 1);
  out.X.resize(n, d);
  out.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < d; ++j) {
      out.X(i, j) = row[static_cast<std::size_t>(j)];
    }
    out.y[i] = row.back();
  }
  out.validate();
  return out;
}

}  // namespace bridgereg
