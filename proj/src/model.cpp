#include "bridgereg/model.hpp"

#include <cmath>

#include "bridgereg/errors.hpp"

namespace bridgereg {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinear: return "linear";
    case ModelKind::kExp: return "exp";
    case ModelKind::kCos: return "cos";
    case ModelKind::kQuadMinusOne: return "quad_minus_one";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "linear") return ModelKind::kLinear;
  if (name == "exp") return ModelKind::kExp;
  if (name == "cos") return ModelKind::kCos;
  if (name == "quad_minus_one") return ModelKind::kQuadMinusOne;
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

double IndexModel::link(double t) const noexcept {
  switch (kind) {
    case ModelKind::kLinear: return t;
    case ModelKind::kExp: return std::exp(t);
    case ModelKind::kCos: return std::cos(t);
    case ModelKind::kQuadMinusOne: return t * t - 1.0;
  }
  return t;
}

double IndexModel::link_derivative(double t) const noexcept {
  switch (kind) {
    case ModelKind::kLinear: return 1.0;
    case ModelKind::kExp: return std::exp(t);
    case ModelKind::kCos: return -std::sin(t);
    case ModelKind::kQuadMinusOne: return 2.0 * t;
  }
  return 1.0;
}

Eigen::VectorXd IndexModel::predict_all(
    const Eigen::Ref<const Eigen::MatrixXd>& X,
    const Eigen::Ref<const Eigen::VectorXd>& theta) const {
  if (X.cols() != theta.size()) {
    throw DimensionError("predict_all: X has " + std::to_string(X.cols()) +
                         " columns but theta has " +
                         std::to_string(theta.size()) + " entries");
  }
  Eigen::VectorXd out = X * theta;
  if (!is_linear()) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = link(out[i]);
  }
  return out;
}

}  // namespace bridgereg
