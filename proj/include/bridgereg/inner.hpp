#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "bridgereg/model.hpp"
#include "bridgereg/norms.hpp"
#include "bridgereg/synth.hpp"

namespace bridgereg {

/// Result of an inner (perturbation) problem. `argument` is the n x d matrix
/// Delta for covariate problems and the n x 1 column mu for outcome problems.
struct InnerSolution {
  double value = 0.0;
  Eigen::MatrixXd argument;
  bool exact = false;
};

enum class PerturbTarget { kOutcome, kCovariate };

/// Optimistic: min_P S(P) + tau^-1 N(P)^gamma.
/// Pessimistic: max_P S(P) subject to N(P)^gamma <= tau.
/// S is the standardized squared 2-norm of the residual after perturbation and
/// N the standardized (alpha, beta)-norm of P.
enum class Sense { kOptimistic, kPessimistic };

/// One inner problem at fixed theta. Owns copies of its data so it can be
/// handed to solvers on other threads.
class InnerProblem {
 public:
  static InnerProblem outcome(const Dataset& data, const IndexModel& model,
                              const Eigen::VectorXd& theta, Sense sense,
                              Exponent alpha, double gamma, double tau);
  static InnerProblem covariate(const Dataset& data, const IndexModel& model,
                                const Eigen::VectorXd& theta, Sense sense,
                                Exponent alpha, Exponent beta, double gamma,
                                double tau);

  PerturbTarget target() const noexcept { return target_; }
  Sense sense() const noexcept { return sense_; }
  const NormSpec& norm() const noexcept { return norm_; }
  const IndexModel& model() const noexcept { return model_; }
  const Eigen::VectorXd& theta() const noexcept { return theta_; }
  /// y - f_theta(X) at zero perturbation.
  const Eigen::VectorXd& residuals() const noexcept { return residuals_; }

  Eigen::Index rows() const noexcept { return X_.rows(); }
  Eigen::Index cols() const noexcept {
    return target_ == PerturbTarget::kOutcome ? 1 : X_.cols();
  }
  Eigen::Index dimension() const noexcept { return rows() * cols(); }

  Eigen::MatrixXd zero() const { return Eigen::MatrixXd::Zero(rows(), cols()); }

  /// Residual term S(P).
  double data_term(const Eigen::MatrixXd& P) const;
  /// Contribution of row i to S, without the 1/n factor.
  double row_data_term(Eigen::Index i,
                       const Eigen::Ref<const Eigen::RowVectorXd>& p) const;
  Eigen::MatrixXd data_gradient(const Eigen::MatrixXd& P) const;

  /// N(P).
  double perturbation_norm(const Eigen::MatrixXd& P) const;
  /// Value being optimized: penalized objective or plain S.
  double objective(const Eigen::MatrixXd& P) const;

  /// tau^(1/gamma); the N-ball radius of the pessimistic constraint.
  double radius() const;
  bool feasible(const Eigen::MatrixXd& P, double rel_slack = 1e-9) const;

  /// Largest |P_ij| any candidate optimizer can have: the radius (pessimistic)
  /// or the norm level beyond which the penalty alone exceeds S(0)
  /// (optimistic), converted to a single-coordinate bound.
  double coordinate_bound() const;

  /// Rows of P decouple when the constraint/penalty is a sum or max over rows.
  bool row_separable() const;
  /// Alpha, beta (and gamma for optimistic problems) all >= 1.
  bool convex_geometry() const;

 private:
  InnerProblem() = default;

  PerturbTarget target_ = PerturbTarget::kOutcome;
  Sense sense_ = Sense::kOptimistic;
  NormSpec norm_;
  IndexModel model_;
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  Eigen::VectorXd theta_;
  Eigen::VectorXd residuals_;
};

/// Euclidean projection of v onto {z : ||z||_q <= radius}, q >= 1.
Eigen::VectorXd project_lq_ball(const Eigen::VectorXd& v, Exponent q,
                                double radius);

/// Euclidean projection onto {P : std||P||_{alpha,beta} <= radius}. Supported
/// geometries: alpha = inf, alpha = beta, beta = 2, or single-column P.
/// Throws ConfigError otherwise (or if alpha, beta < 1).
Eigen::MatrixXd project_std_ball(const Eigen::MatrixXd& P, Exponent alpha,
                                 Exponent beta, double radius);
bool projection_supported(Eigen::Index cols, Exponent alpha, Exponent beta);

struct GridSpec {
  std::size_t points_per_axis = 41;
  /// Zoom levels after the first lattice; each re-centres on the incumbent
  /// with a box of +-2 spacings.
  std::size_t refinements = 6;
  /// Maximum lattice evaluations over all blocks and levels.
  double budget = 5e7;
  /// Largest block dimension scanned jointly.
  Eigen::Index max_block_dimension = 6;
};

struct GradientSpec {
  double step_fraction = 0.1;
  std::size_t iterations = 500;
  std::size_t restarts = 8;
  std::size_t stall_window = 20;
  double stall_tolerance = 1e-10;
  std::uint64_t seed = 0x5eed;
};

enum class OracleMode { kGrid, kGradient };

/// Brute-force reference solver used to check closed forms. Grid mode scans
/// a bounded lattice (exploiting row separability); gradient mode runs
/// projected ascent (pessimistic) or a radial projected descent
/// (optimistic) from several random starts.
InnerSolution inner_oracle(const InnerProblem& problem, OracleMode mode,
                           const GridSpec& grid = {},
                           const GradientSpec& gradient = {});

InnerSolution grid_search(const InnerProblem& problem, const GridSpec& spec);
InnerSolution projected_ascent(const InnerProblem& problem,
                               const GradientSpec& spec);
InnerSolution radial_descent(const InnerProblem& problem,
                             const GradientSpec& spec);
/// Optimistic outcome problems with alpha = gamma split into n scalar convex
/// problems; each is solved by Brent's method plus the two bracket ends.
InnerSolution separable_descent(const InnerProblem& problem);

}  // namespace bridgereg
