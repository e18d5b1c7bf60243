#include "bridgereg/losses.hpp"

#include <cmath>
#include <string>

#include "bridgereg/errors.hpp"

namespace bridgereg {

namespace {

void check_theta(const Eigen::VectorXd& theta, const Dataset& data) {
  data.validate();
  if (theta.size() != data.d()) {
    throw DimensionError("theta has " + std::to_string(theta.size()) +
                         " entries but the data has d = " +
                         std::to_string(data.d()));
  }
}

void check_scale(double gamma, double tau) {
  NormSpec spec;
  spec.gamma = gamma;
  spec.tau = tau;
  spec.validate();
}

double sign_or_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

InnerSolution ols_solution(const Eigen::VectorXd& theta, const Dataset& data,
                           const IndexModel& model, Eigen::Index cols) {
  InnerSolution out;
  out.value = ols_loss(theta, data, model);
  out.argument = Eigen::MatrixXd::Zero(data.n(), cols);
  out.exact = true;
  return out;
}

// Numeric fallback shared by all four perturbation losses.
InnerSolution solve_numerically(const InnerProblem& problem) {
  const bool gradient_ok =
      problem.convex_geometry() &&
      projection_supported(problem.cols(), problem.norm().alpha,
                           problem.norm().beta);
  if (!gradient_ok) return grid_search(problem, GridSpec{});
  if (problem.sense() == Sense::kPessimistic) {
    return projected_ascent(problem, GradientSpec{});
  }
  if (problem.target() == PerturbTarget::kOutcome && problem.row_separable()) {
    return separable_descent(problem);
  }
  GradientSpec spec;
  spec.restarts = 1;
  return radial_descent(problem, spec);
}

// Unit-beta-ball vector v maximizing <v, theta>, so <v, theta> =
// ||theta||_{beta*}. Ties for beta = 1 go to the lowest index.
Eigen::VectorXd dual_maximizer(const Eigen::VectorXd& theta, Exponent beta) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());
  if (theta.isZero(0.0)) return v;
  if (beta.is_infinite()) {
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      v[j] = theta[j] > 0.0 ? 1.0 : (theta[j] < 0.0 ? -1.0 : 0.0);
    }
    return v;
  }
  if (beta.value() == 1.0) {
    Eigen::Index arg = 0;
    theta.cwiseAbs().maxCoeff(&arg);
    v[arg] = sign_or_plus(theta[arg]);
    return v;
  }
  const double q = beta.dual().value();
  const double scale = std::pow(vector_norm(theta, beta.dual()), q - 1.0);
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    v[j] = std::copysign(std::pow(std::abs(theta[j]), q - 1.0) / scale,
                         theta[j]);
  }
  return v;
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kOls: return "ols";
    case LossKind::kCovariateMin: return "x_min";
    case LossKind::kOutcomeMin: return "y_min";
    case LossKind::kCovariateMax: return "x_max";
    case LossKind::kOutcomeMax: return "y_max";
  }
  return "unknown";
}

LossKind loss_kind_from_string(std::string_view name) {
  if (name == "ols") return LossKind::kOls;
  if (name == "x_min") return LossKind::kCovariateMin;
  if (name == "y_min") return LossKind::kOutcomeMin;
  if (name == "x_max") return LossKind::kCovariateMax;
  if (name == "y_max") return LossKind::kOutcomeMax;
  throw ConfigError("unknown loss kind '" + std::string(name) + "'");
}

double huber_rho(double u, double eta) {
  const double a = std::abs(u);
  return a <= eta ? 0.5 * u * u : eta * a - 0.5 * eta * eta;
}

double outcome_optimistic_huber_threshold(double tau) {
  if (!(tau > 0.0)) throw ConfigError("Huber threshold needs tau > 0");
  return 1.0 / (2.0 * tau);
}

double pessimistic_penalty_coefficient(Eigen::Index d, double radius) {
  return static_cast<double>(d) * radius;
}

double ols_loss(const Eigen::VectorXd& theta, const Dataset& data,
                const IndexModel& model) {
  check_theta(theta, data);
  const Eigen::VectorXd r = data.y - model.predict_all(data.X, theta);
  return r.squaredNorm() / static_cast<double>(data.n());
}

InnerSolution outcome_optimistic_loss(const Eigen::VectorXd& theta,
                                      const Dataset& data,
                                      const IndexModel& model, Exponent alpha,
                                      double gamma, double tau) {
  check_theta(theta, data);
  check_scale(gamma, tau);
  if (tau == 0.0) return ols_solution(theta, data, model, 1);

  const Eigen::VectorXd e = data.y - model.predict_all(data.X, theta);
  const double n = static_cast<double>(data.n());

  if (!alpha.is_infinite() && alpha.value() == 1.0 && gamma == 1.0) {
    // Soft thresholding at eta = 1/(2 tau).
    const double eta = outcome_optimistic_huber_threshold(tau);
    InnerSolution out;
    out.argument.resize(data.n(), 1);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double shrink = std::max(std::abs(e[i]) - eta, 0.0);
      const double mu = shrink == 0.0 ? 0.0 : -std::copysign(shrink, e[i]);
      out.argument(i, 0) = mu;
      acc += (e[i] + mu) * (e[i] + mu) + std::abs(mu) / tau;
    }
    out.value = acc / n;
    out.exact = true;
    return out;
  }
  if (!alpha.is_infinite() && alpha.value() == 2.0 && gamma == 2.0) {
    InnerSolution out;
    out.argument = (-tau / (1.0 + tau)) * e;
    out.value = ols_loss(theta, data, model) / (1.0 + tau);
    out.exact = true;
    return out;
  }
  return solve_numerically(InnerProblem::outcome(
      data, model, theta, Sense::kOptimistic, alpha, gamma, tau));
}

InnerSolution covariate_optimistic_loss(const Eigen::VectorXd& theta,
                                        const Dataset& data,
                                        const IndexModel& model, Exponent alpha,
                                        Exponent beta, double gamma,
                                        double tau) {
  check_theta(theta, data);
  check_scale(gamma, tau);
  // With theta = 0 the prediction g(0) ignores Delta.
  if (tau == 0.0 || theta.isZero(0.0)) {
    return ols_solution(theta, data, model, data.d());
  }
  const bool deming = model.is_linear() && alpha == Exponent::finite(2.0) &&
                      beta == Exponent::finite(2.0) && gamma == 2.0;
  if (deming) {
    const double d = static_cast<double>(data.d());
    const double theta_sq = theta.squaredNorm();
    const Eigen::VectorXd e = data.y - data.X * theta;
    InnerSolution out;
    out.value = ols_loss(theta, data, model) / (1.0 + tau * d * theta_sq);
    out.argument = (e / (theta_sq + 1.0 / (tau * d))) * theta.transpose();
    out.exact = true;
    return out;
  }
  return solve_numerically(InnerProblem::covariate(
      data, model, theta, Sense::kOptimistic, alpha, beta, gamma, tau));
}

InnerSolution outcome_pessimistic_loss(const Eigen::VectorXd& theta,
                                       const Dataset& data,
                                       const IndexModel& model, Exponent alpha,
                                       double gamma, double tau) {
  check_theta(theta, data);
  check_scale(gamma, tau);
  if (tau == 0.0) return ols_solution(theta, data, model, 1);

  const Eigen::VectorXd r = data.y - model.predict_all(data.X, theta);
  const double n = static_cast<double>(data.n());
  const double radius = std::pow(tau, 1.0 / gamma);

  if (alpha.is_infinite()) {
    InnerSolution out;
    out.argument.resize(data.n(), 1);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      out.argument(i, 0) = radius * sign_or_plus(r[i]);
      const double shifted = std::abs(r[i]) + radius;
      acc += shifted * shifted;
    }
    out.value = acc / n;
    out.exact = true;
    return out;
  }
  if (alpha.value() == 2.0) {
    InnerSolution out;
    const double spread = std::sqrt(r.squaredNorm() / n);
    if (spread > 0.0) {
      out.argument = (radius / spread) * r;
    } else {
      out.argument = Eigen::MatrixXd::Zero(data.n(), 1);
      out.argument(0, 0) = radius * std::sqrt(n);
    }
    out.value = (spread + radius) * (spread + radius);
    out.exact = true;
    return out;
  }
  return solve_numerically(InnerProblem::outcome(
      data, model, theta, Sense::kPessimistic, alpha, gamma, tau));
}

InnerSolution covariate_pessimistic_loss(const Eigen::VectorXd& theta,
                                         const Dataset& data,
                                         const IndexModel& model,
                                         Exponent alpha, Exponent beta,
                                         double gamma, double tau) {
  check_theta(theta, data);
  check_scale(gamma, tau);
  if (tau == 0.0 || theta.isZero(0.0)) {
    return ols_solution(theta, data, model, data.d());
  }
  const bool closed_form = model.is_linear() && alpha.is_infinite() &&
                           (beta.is_infinite() || beta.value() >= 1.0);
  if (closed_form) {
    const double radius = std::pow(tau, 1.0 / gamma);
    const Exponent dual = beta.dual();
    const double c = pessimistic_penalty_coefficient(data.d(), radius);
    const double shift = c * std_vector_norm(theta, dual);
    // Each row spends its full beta-ball budget against the residual sign.
    const double row_radius =
        radius * std::pow(static_cast<double>(data.d()),
                          beta.is_infinite() ? 0.0 : 1.0 / beta.value());
    const Eigen::RowVectorXd direction =
        row_radius * dual_maximizer(theta, beta).transpose();
    const Eigen::VectorXd e = data.y - data.X * theta;
    InnerSolution out;
    out.argument.resize(data.n(), data.d());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      out.argument.row(i) = -sign_or_plus(e[i]) * direction;
      const double shifted = std::abs(e[i]) + shift;
      acc += shifted * shifted;
    }
    out.value = acc / static_cast<double>(data.n());
    out.exact = true;
    return out;
  }
  return solve_numerically(InnerProblem::covariate(
      data, model, theta, Sense::kPessimistic, alpha, beta, gamma, tau));
}

InnerSolution evaluate_loss(const LossSpec& spec, const Eigen::VectorXd& theta,
                            const Dataset& data, const IndexModel& model) {
  const NormSpec& s = spec.norm;
  switch (spec.kind) {
    case LossKind::kOls: return ols_solution(theta, data, model, 1);
    case LossKind::kOutcomeMin:
      return outcome_optimistic_loss(theta, data, model, s.alpha, s.gamma,
                                     s.tau);
    case LossKind::kCovariateMin:
      return covariate_optimistic_loss(theta, data, model, s.alpha, s.beta,
                                       s.gamma, s.tau);
    case LossKind::kOutcomeMax:
      return outcome_pessimistic_loss(theta, data, model, s.alpha, s.gamma,
                                      s.tau);
    case LossKind::kCovariateMax:
      return covariate_pessimistic_loss(theta, data, model, s.alpha, s.beta,
                                        s.gamma, s.tau);
  }
  throw ConfigError("unknown loss kind");
}

double penalized_absolute_loss(const Eigen::VectorXd& theta,
                               const Dataset& data, double coefficient,
                               Exponent q) {
  check_theta(theta, data);
  const double shift = coefficient * std_vector_norm(theta, q);
  const Eigen::VectorXd e = data.y - data.X * theta;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double shifted = std::abs(e[i]) + shift;
    acc += shifted * shifted;
  }
  return acc / static_cast<double>(data.n());
}

}  // namespace bridgereg
