#include "bridgereg/norms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bridgereg/errors.hpp"

namespace bridgereg {

namespace {

// Above this exponent the power sum is accumulated relative to max|z_i| so
// that |z_i|^q neither underflows nor overflows.
constexpr double kScaledAccumulationThreshold = 16.0;

double max_abs(const Eigen::Ref<const Eigen::VectorXd>& z) {
  return z.cwiseAbs().maxCoeff();
}

// ((1/divisor) sum |z_i|^q)^(1/q) for finite q.
double power_mean(const Eigen::Ref<const Eigen::VectorXd>& z, double q,
                  double divisor) {
  if (q > kScaledAccumulationThreshold) {
    const double m = max_abs(z);
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      acc += std::pow(std::abs(z[i]) / m, q);
    }
    return m * std::pow(acc / divisor, 1.0 / q);
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    acc += std::pow(std::abs(z[i]), q);
  }
  return std::pow(acc / divisor, 1.0 / q);
}

void require_nonempty(Eigen::Index size, const char* what) {
  if (size == 0) throw DimensionError(std::string(what) + ": empty input");
}

}  // namespace

Exponent Exponent::finite(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError("norm exponent must lie in (0, inf), got " +
                      std::to_string(value));
  }
  return Exponent(value, false);
}

Exponent Exponent::from_double(double value) {
  if (value == std::numeric_limits<double>::infinity()) return infinity();
  return finite(value);
}

double Exponent::as_double() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

Exponent Exponent::dual() const {
  if (infinite_) return finite(1.0);
  if (value_ < 1.0) {
    throw ConfigError("dual exponent requires q >= 1, got " +
                      std::to_string(value_));
  }
  if (value_ == 1.0) return infinity();
  return finite(value_ / (value_ - 1.0));
}

void NormSpec::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("gamma must lie in (0, inf)");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw ConfigError("tau must be a finite non-negative number");
  }
}

double vector_norm(const Eigen::Ref<const Eigen::VectorXd>& z, Exponent q) {
  require_nonempty(z.size(), "vector_norm");
  if (q.is_infinite()) return max_abs(z);
  return power_mean(z, q.value(), 1.0);
}

double std_vector_norm(const Eigen::Ref<const Eigen::VectorXd>& z,
                       Exponent q) {
  require_nonempty(z.size(), "std_vector_norm");
  if (q.is_infinite()) return max_abs(z);
  return power_mean(z, q.value(), static_cast<double>(z.size()));
}

double std_matrix_norm(const Eigen::Ref<const Eigen::MatrixXd>& D,
                       Exponent alpha, Exponent beta) {
  if (D.rows() == 0 || D.cols() == 0) {
    throw DimensionError("std_matrix_norm: empty matrix");
  }
  Eigen::VectorXd row_norms(D.rows());
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    row_norms[i] = std_vector_norm(D.row(i).transpose(), beta);
  }
  return std_vector_norm(row_norms, alpha);
}

}  // namespace bridgereg
