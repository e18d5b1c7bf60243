#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bridgereg/losses.hpp"
#include "bridgereg/synth.hpp"

namespace bridgereg {

struct FitResult {
  Eigen::VectorXd theta_hat;
  /// The fitted loss re-evaluated at theta_hat.
  double loss_value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string solver;
};

/// Stopping rules shared by the iterative fits. The defaults are the ones the
/// tests pin.
struct SolverOptions {
  /// Alternation, Newton and DPD iteration cap.
  std::size_t max_iterations = 10000;
  /// Alternation stops once ||theta_{k+1} - theta_k||_2 falls below this.
  double step_tolerance = 1e-9;
  /// Deming / generic fits stop at this gradient norm.
  double gradient_tolerance = 1e-10;
  std::size_t subgradient_iterations = 20000;
  /// Subgradient descent stops when the best objective improved by less than
  /// `stall_tolerance` over the last `stall_window` iterations.
  std::size_t stall_window = 200;
  double stall_tolerance = 1e-10;
  /// DPD stops once the estimating equation is below this (sup-norm,
  /// relative to max(1, mean p_i^b)).
  double estimating_tolerance = 1e-9;
  /// Gradient-norm target of fit_loss, whose gradients are finite
  /// differences.
  double fd_gradient_tolerance = 1e-7;
  /// Starting point of the iterative fits; empty means the OLS solution.
  Eigen::VectorXd initial_theta;
};

/// Closed-form least squares via column-pivoted QR. Throws SingularityError
/// when X is rank deficient.
FitResult fit_ols(const Dataset& data);

/// Minimizes the (1,1)-outcome-optimistic loss with scale tau through its
/// Huberized form: reweighted least squares followed by an exact active-set
/// solve at threshold 1/(2 tau).
FitResult fit_outcome_optimistic(const Dataset& data, double tau,
                                 const SolverOptions& options = {});

/// Same minimizer by block alternation between theta (least squares on
/// y + mu) and mu (soft thresholding). Slower; kept as the reference. When
/// `trace` is given it receives the joint objective after every mu update
/// and every theta update.
FitResult fit_outcome_optimistic_alternating(
    const Dataset& data, double tau, const SolverOptions& options = {},
    std::vector<double>* trace = nullptr);

/// argmin (2/n) sum rho_eta(y_i - <x_i, theta>) for an arbitrary threshold.
/// loss_value is the Huber objective itself.
FitResult fit_huber(const Dataset& data, double eta,
                    const SolverOptions& options = {});

/// Penalty coefficient used by the negative side of the bridge.
double bridge_penalty_coefficient(double lam);
/// Outcome-optimistic scale used by the positive side of the bridge.
double bridge_optimistic_scale(double lam);

/// Minimizes (1/n) sum (|y_i - <x_i, theta>| + c * max_j |theta_j|)^2 with
/// c = bridge_penalty_coefficient(lam), lam > 0.
FitResult fit_covariate_pessimistic(const Dataset& data, double lam,
                                    const SolverOptions& options = {});

/// Same objective with an explicit coefficient c >= 0: subgradient descent
/// with iterate averaging, then an active-set polish.
FitResult fit_penalized_absolute(const Dataset& data, double coefficient,
                                 const SolverOptions& options = {});

/// lam > 0: outcome-optimistic with tau = 25 lam. lam = 0: OLS.
/// lam < 0: covariate-pessimistic with |lam|.
FitResult fit_bridge(const Dataset& data, double lam,
                     const SolverOptions& options = {});

/// Minimizes OLS(theta) / (1 + tau d ||theta||_2^2), the (2,2,2)
/// covariate-optimistic loss, by damped Newton from the OLS solution.
FitResult fit_deming_tls(const Dataset& data, double tau,
                         const SolverOptions& options = {});

/// Generic outer fit of any loss: BFGS on central-difference gradients from
/// the OLS start. Meant for geometries without a dedicated solver.
FitResult fit_loss(const Dataset& data, const LossSpec& spec,
                   const SolverOptions& options = {});

struct DpdSpec {
  /// Divergence exponent; 0 is maximum likelihood. Must exceed -1.
  double beta_exp = 0.5;
  double sigma_y = 1.0;
  void validate() const;
};

/// Density-power-divergence objective for y | x ~ N(<x, theta>, sigma^2):
/// int p^(1+b) dy - (1 + 1/b) (1/n) sum p(y_i | x_i)^b. For b = 0 it is the
/// mean negative log-likelihood.
double dpd_objective(const Eigen::VectorXd& theta, const Dataset& data,
                     const DpdSpec& spec);
Eigen::VectorXd dpd_gradient(const Eigen::VectorXd& theta, const Dataset& data,
                             const DpdSpec& spec);
/// (1/n) sum p_i^b r_i x_i / sigma^2, which vanishes at a stationary point.
Eigen::VectorXd dpd_estimating_equation(const Eigen::VectorXd& theta,
                                        const Dataset& data,
                                        const DpdSpec& spec);

/// b = 0 returns fit_ols. Otherwise Newton steps (gradient steps where the
/// Hessian is indefinite) with Armijo backtracking from the OLS start.
FitResult fit_dpd(const Dataset& data, const DpdSpec& spec,
                  const SolverOptions& options = {});

}  // namespace bridgereg
