#include "bridgereg/biasvar.hpp"

#include <string>

#include "bridgereg/errors.hpp"
#include "bridgereg/rng.hpp"

namespace bridgereg {

namespace {

// (1/T) sum_t ||mean - theta_t||^2 in the pairwise form
// (1/2T^2) sum_{t,s} ||theta_t - theta_s||^2, which is exactly zero for
// identical trials. `metric` replaces the Euclidean inner product.
double pairwise_spread(const std::vector<Eigen::VectorXd>& thetas,
                       const Eigen::MatrixXd* metric) {
  const std::size_t T = thetas.size();
  double acc = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = t + 1; s < T; ++s) {
      const Eigen::VectorXd diff = thetas[t] - thetas[s];
      acc += metric ? diff.dot(*metric * diff) : diff.squaredNorm();
    }
  }
  const double tt = static_cast<double>(T);
  return acc / (tt * tt);
}

}  // namespace

void TrialEnsemble::validate() const {
  if (theta_hats.empty()) throw ConfigError("ensemble needs T >= 1 trials");
  const Eigen::Index d = theta_hats.front().size();
  if (d < 1) throw DimensionError("ensemble parameters are empty");
  for (std::size_t t = 0; t < theta_hats.size(); ++t) {
    if (theta_hats[t].size() != d) {
      throw DimensionError("trial " + std::to_string(t) + " has dimension " +
                           std::to_string(theta_hats[t].size()) +
                           ", expected " + std::to_string(d));
    }
  }
  if (model.theta_star.size() != 0 && model.theta_star.size() != d) {
    throw DimensionError("theta_star has dimension " +
                         std::to_string(model.theta_star.size()) +
                         ", ensemble has " + std::to_string(d));
  }
}

Eigen::VectorXd TrialEnsemble::mean_theta() const {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(theta_hats.front().size());
  for (const auto& th : theta_hats) acc += th;
  return acc / static_cast<double>(theta_hats.size());
}

std::string_view to_string(DecompositionMethod method) {
  return method == DecompositionMethod::kClosedForm ? "closed_form"
                                                    : "monte_carlo";
}

BiasVariance decompose_closed_form(const TrialEnsemble& ens,
                                   const Eigen::VectorXd& theta_star,
                                   double sigma_x) {
  ens.validate();
  if (theta_star.size() != ens.theta_hats.front().size()) {
    throw DimensionError("theta_star has dimension " +
                         std::to_string(theta_star.size()) +
                         ", ensemble has " +
                         std::to_string(ens.theta_hats.front().size()));
  }
  if (!(sigma_x > 0.0)) throw ConfigError("sigma_x must be positive");
  const Eigen::VectorXd mean = ens.mean_theta();
  const double spread = pairwise_spread(ens.theta_hats, nullptr);
  BiasVariance out;
  out.bias = sigma_x * (theta_star - mean).norm();
  out.variance = sigma_x * sigma_x * spread;
  out.method = DecompositionMethod::kClosedForm;
  return out;
}

Eigen::MatrixXd draw_covariates(CovariateKind kind, std::size_t samples,
                                Eigen::Index d, std::uint64_t seed) {
  if (d < 1) throw DimensionError("covariate dimension must be >= 1");
  Rng rng(seed);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(samples), d);
  switch (kind) {
    case CovariateKind::kUniformPlusMinusOne:
      for (Eigen::Index s = 0; s < out.rows(); ++s) {
        for (Eigen::Index j = 0; j < d; ++j) out(s, j) = rng.uniform(-1.0, 1.0);
      }
      break;
  }
  return out;
}

BiasVariance decompose_on_sample(const TrialEnsemble& ens,
                                 const Eigen::MatrixXd& sample) {
  ens.validate();
  const Eigen::Index d = ens.theta_hats.front().size();
  if (sample.cols() != d || sample.rows() < 1) {
    throw DimensionError("covariate sample must have d = " +
                         std::to_string(d) + " columns and >= 1 row");
  }
  if (ens.model.theta_star.size() != d) {
    throw DimensionError("ensemble model needs theta_star of dimension d");
  }
  const auto samples = static_cast<double>(sample.rows());
  const Eigen::VectorXd truth =
      IndexModel{ens.model.kind}.predict_all(sample, ens.model.theta_star);
  const Eigen::VectorXd mean_fit = sample * ens.mean_theta();
  // Linear fits: mean_s (<x_s, a - b>)^2 = (a - b)^T G (a - b) with G the
  // sample second-moment matrix.
  const Eigen::MatrixXd gram = sample.transpose() * sample / samples;
  const double variance = pairwise_spread(ens.theta_hats, &gram);
  BiasVariance out;
  out.bias = std::sqrt((truth - mean_fit).squaredNorm() / samples);
  out.variance = variance;
  out.method = DecompositionMethod::kMonteCarlo;
  out.mc_samples = static_cast<std::size_t>(sample.rows());
  return out;
}

BiasVariance decompose_monte_carlo(const TrialEnsemble& ens,
                                   std::size_t mc_samples,
                                   std::uint64_t seed) {
  ens.validate();
  if (mc_samples < 1000) throw ConfigError("mc_samples must be >= 1000");
  const Eigen::MatrixXd sample =
      draw_covariates(ens.cov_kind, mc_samples, ens.theta_hats.front().size(),
                      seed);
  return decompose_on_sample(ens, sample);
}

}  // namespace bridgereg
