#pragma once

#include <Eigen/Dense>

namespace bridgereg {

/// A norm exponent in (0, inf]. Infinity is a distinguished state rather than
/// a large float so that every formula can branch on it exactly.
class Exponent {
 public:
  /// Throws ConfigError unless 0 < value < inf.
  static Exponent finite(double value);
  static Exponent infinity() { return Exponent(0.0, true); }

  /// Accepts +inf as well; anything non-positive or NaN is rejected.
  static Exponent from_double(double value);

  bool is_infinite() const noexcept { return infinite_; }
  /// Only meaningful when finite.
  double value() const noexcept { return value_; }
  /// +inf for the infinite exponent.
  double as_double() const noexcept;

  /// Hoelder conjugate q* with 1/q + 1/q* = 1. Requires q >= 1.
  Exponent dual() const;

  friend bool operator==(const Exponent& a, const Exponent& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  Exponent(double value, bool infinite) : value_(value), infinite_(infinite) {}

  double value_;
  bool infinite_;
};

/// Perturbation geometry: the standardized (alpha, beta)-norm raised to
/// gamma, with scale tau.
struct NormSpec {
  Exponent alpha = Exponent::finite(2.0);
  Exponent beta = Exponent::finite(2.0);
  double gamma = 2.0;
  double tau = 0.0;

  /// Throws ConfigError on gamma <= 0, non-finite gamma, or tau < 0.
  void validate() const;
};

/// (sum |z_i|^q)^(1/q); max |z_i| for q = inf.
double vector_norm(const Eigen::Ref<const Eigen::VectorXd>& z, Exponent q);

/// ((1/m) sum |z_i|^q)^(1/q); max |z_i| for q = inf.
double std_vector_norm(const Eigen::Ref<const Eigen::VectorXd>& z,
                       Exponent q);

/// Standardized alpha-norm of the vector of row-wise standardized
/// beta-norms.
double std_matrix_norm(const Eigen::Ref<const Eigen::MatrixXd>& D,
                       Exponent alpha, Exponent beta);

}  // namespace bridgereg
