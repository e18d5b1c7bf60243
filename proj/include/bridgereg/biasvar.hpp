#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bridgereg/model.hpp"

namespace bridgereg {

/// Standard deviation of one U[-1, 1] coordinate: E[x^2] = 1/3.
inline constexpr double kUniformSigmaX = 0.57735026918962576;

enum class CovariateKind { kUniformPlusMinusOne };

/// Fitted parameters of T trials. The fitted function of trial t is the
/// linear predictor <x, theta_hats[t]>.
struct TrialEnsemble {
  std::vector<Eigen::VectorXd> theta_hats;
  TrueModel model;
  CovariateKind cov_kind = CovariateKind::kUniformPlusMinusOne;
  /// Throws unless T >= 1 and every vector (and theta_star) has one size.
  void validate() const;
  Eigen::VectorXd mean_theta() const;
};

enum class DecompositionMethod { kClosedForm, kMonteCarlo };
std::string_view to_string(DecompositionMethod method);

struct BiasVariance {
  /// Root of the squared bias, B_T.
  double bias = 0.0;
  double variance = 0.0;
  DecompositionMethod method = DecompositionMethod::kClosedForm;
  std::size_t mc_samples = 0;
};

/// Reduced forms for a linear truth with E[x x^T] = sigma_x^2 I:
/// B = sigma_x ||theta_star - mean||, V = sigma_x^2 mean_t ||mean - theta_t||^2.
BiasVariance decompose_closed_form(const TrialEnsemble& ens,
                                   const Eigen::VectorXd& theta_star,
                                   double sigma_x = kUniformSigmaX);

/// Draws `mc_samples` covariates from ens.cov_kind, reproducible from seed.
Eigen::MatrixXd draw_covariates(CovariateKind kind, std::size_t samples,
                                Eigen::Index d, std::uint64_t seed);

/// Expectations over a fixed covariate sample (rows of `sample`), shared by
/// every trial. Lets a sweep reuse one sample for every grid point.
BiasVariance decompose_on_sample(const TrialEnsemble& ens,
                                 const Eigen::MatrixXd& sample);

/// decompose_on_sample over draw_covariates(ens.cov_kind, mc_samples, d,
/// seed). Requires mc_samples >= 1000.
BiasVariance decompose_monte_carlo(const TrialEnsemble& ens,
                                   std::size_t mc_samples, std::uint64_t seed);

}  // namespace bridgereg
