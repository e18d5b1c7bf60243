#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>

#include <Eigen/Dense>

#include "bridgereg/model.hpp"

namespace bridgereg {

struct Dataset {
  Eigen::MatrixXd X;  // n x d
  Eigen::VectorXd y;  // n

  Eigen::Index n() const noexcept { return X.rows(); }
  Eigen::Index d() const noexcept { return X.cols(); }

  /// Throws DimensionError unless rows(X) == size(y) and n, d >= 1.
  void validate() const;
};

enum class ImpedimentKind { kNone, kCovariateNoise, kOutcomeOutliers };

std::string_view to_string(ImpedimentKind kind);
ImpedimentKind impediment_kind_from_string(std::string_view name);

struct Impediment {
  ImpedimentKind kind = ImpedimentKind::kNone;
  double noise_sd = 0.5;
  double outlier_shift = 10.0;
  double outlier_frac = 0.05;

  /// round(outlier_frac * n), ties to even. Throws ConfigError if the
  /// fraction is outside [0, 1].
  std::size_t outlier_count(std::size_t n) const;
};

/// x_i ~ U[-1, 1]^d, y_i = f_*(x_i) + N(0, sigma_y^2). Bit-identical for
/// identical arguments.
Dataset generate_dataset(const TrueModel& model, std::size_t n, std::size_t d,
                         double sigma_y, std::uint64_t seed);

Dataset apply_impediment(const Dataset& data, const Impediment& imp,
                         std::uint64_t seed);

/// Header `x1,...,xd,y`; values written with 17 significant digits.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace bridgereg
