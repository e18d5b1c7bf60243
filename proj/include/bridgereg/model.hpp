#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace bridgereg {

/// Link g in a single-index function f_theta(x) = g(<x, theta>).
enum class ModelKind { kLinear, kExp, kCos, kQuadMinusOne };

std::string_view to_string(ModelKind kind);
/// Accepts "linear", "exp", "cos", "quad_minus_one"; throws ConfigError.
ModelKind model_kind_from_string(std::string_view name);

/// Prediction function used by the loss functionals. The outer estimators
/// only ever fit the linear kind; the other kinds describe misspecified
/// ground truths and exercise the numeric inner solvers.
struct IndexModel {
  ModelKind kind = ModelKind::kLinear;

  bool is_linear() const noexcept { return kind == ModelKind::kLinear; }

  double link(double t) const noexcept;
  double link_derivative(double t) const noexcept;

  double predict(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& theta) const {
    return link(x.dot(theta));
  }

  /// Row-wise predictions f_theta(X).
  Eigen::VectorXd predict_all(const Eigen::Ref<const Eigen::MatrixXd>& X,
                              const Eigen::Ref<const Eigen::VectorXd>& theta) const;
};

/// Ground-truth regression function f_*(x) = g(<x, theta_star>).
struct TrueModel {
  ModelKind kind = ModelKind::kLinear;
  Eigen::VectorXd theta_star;

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return IndexModel{kind}.predict(x, theta_star);
  }
};

}  // namespace bridgereg
