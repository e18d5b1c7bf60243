#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "bridgereg/inner.hpp"
#include "bridgereg/model.hpp"
#include "bridgereg/norms.hpp"
#include "bridgereg/synth.hpp"

namespace bridgereg {

enum class LossKind { kOls, kCovariateMin, kOutcomeMin, kCovariateMax, kOutcomeMax };

std::string_view to_string(LossKind kind);
/// "ols", "x_min", "y_min", "x_max", "y_max".
LossKind loss_kind_from_string(std::string_view name);

struct LossSpec {
  LossKind kind = LossKind::kOls;
  /// beta is ignored by the outcome losses; the whole spec by kOls.
  NormSpec norm;
};

/// Huber's function: u^2/2 inside [-eta, eta], eta|u| - eta^2/2 outside.
double huber_rho(double u, double eta);

/// Threshold at which Y^min_{1,1,tau} coincides with (2/n) sum rho_eta.
/// Obtained by minimizing (e + mu)^2 + |mu|/tau per coordinate; checked
/// against the numeric inner minimizer in the test-suite.
double outcome_optimistic_huber_threshold(double tau);

/// Penalty coefficient c in (1/n) sum (|e_i| + c std||theta||_{beta*})^2
/// equal to the covariate-pessimistic loss with alpha = inf, gamma = 1 and
/// constraint radius `radius`: c = d * radius.
double pessimistic_penalty_coefficient(Eigen::Index d, double radius);

/// std||y - f_theta(X)||_2^2.
double ols_loss(const Eigen::VectorXd& theta, const Dataset& data,
                const IndexModel& model = {});

InnerSolution outcome_optimistic_loss(const Eigen::VectorXd& theta,
                                      const Dataset& data,
                                      const IndexModel& model, Exponent alpha,
                                      double gamma, double tau);

InnerSolution covariate_optimistic_loss(const Eigen::VectorXd& theta,
                                        const Dataset& data,
                                        const IndexModel& model, Exponent alpha,
                                        Exponent beta, double gamma, double tau);

InnerSolution outcome_pessimistic_loss(const Eigen::VectorXd& theta,
                                       const Dataset& data,
                                       const IndexModel& model, Exponent alpha,
                                       double gamma, double tau);

InnerSolution covariate_pessimistic_loss(const Eigen::VectorXd& theta,
                                         const Dataset& data,
                                         const IndexModel& model,
                                         Exponent alpha, Exponent beta,
                                         double gamma, double tau);

/// Dispatches on spec.kind. kOls yields an exact solution with a zero
/// argument.
InnerSolution evaluate_loss(const LossSpec& spec, const Eigen::VectorXd& theta,
                            const Dataset& data, const IndexModel& model = {});

/// (1/n) sum (|y_i - <x_i, theta>| + c * std||theta||_q)^2 for the linear
/// model. This is the penalized form the covariate-pessimistic loss takes
/// with alpha = inf, gamma = 1 and q = beta*.
double penalized_absolute_loss(const Eigen::VectorXd& theta, const Dataset& data,
                               double coefficient, Exponent q);

}  // namespace bridgereg
