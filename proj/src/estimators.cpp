#include "bridgereg/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "bridgereg/errors.hpp"

namespace bridgereg {

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> checked_qr(const Dataset& data) {
  data.validate();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(data.X);
  if (qr.rank() < data.d()) {
    throw SingularityError("design matrix has rank " +
                           std::to_string(qr.rank()) + " < d = " +
                           std::to_string(data.d()));
  }
  return qr;
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(what) + " must be positive and finite");
  }
}

// ---------------------------------------------------------------- Huber

double huber_objective(const Eigen::VectorXd& theta, const Dataset& data,
                       double eta) {
  const Eigen::VectorXd r = data.y - data.X * theta;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) acc += huber_rho(r[i], eta);
  return 2.0 * acc / static_cast<double>(data.n());
}

Eigen::VectorXd huber_gradient(const Eigen::VectorXd& theta,
                               const Dataset& data, double eta) {
  const Eigen::VectorXd r = data.y - data.X * theta;
  const Eigen::VectorXd psi = r.cwiseMax(-eta).cwiseMin(eta);
  return (-2.0 / static_cast<double>(data.n())) * (data.X.transpose() * psi);
}

struct HuberState {
  Eigen::VectorXd theta;
  std::size_t iterations = 0;
  bool converged = false;
};

// Exact minimizer for a fixed inlier set and outlier signs, or nothing if the
// inlier block is singular.
bool huber_pattern_solve(const Dataset& data, double eta,
                         const Eigen::VectorXd& theta, Eigen::VectorXd& out,
                         bool& pattern_stable) {
  const Eigen::VectorXd r = data.y - data.X * theta;
  const Eigen::Index d = data.d();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  std::vector<signed char> pattern(static_cast<std::size_t>(r.size()));
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const auto x = data.X.row(i).transpose();
    if (std::abs(r[i]) <= eta) {
      gram.noalias() += x * x.transpose();
      rhs.noalias() += data.y[i] * x;
      pattern[static_cast<std::size_t>(i)] = 0;
    } else {
      const double s = sign_of(r[i]);
      rhs.noalias() += (eta * s) * x;
      pattern[static_cast<std::size_t>(i)] = static_cast<signed char>(s);
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-12 * std::max(1.0, gram.trace())) {
    return false;
  }
  out = ldlt.solve(rhs);
  const Eigen::VectorXd r_new = data.y - data.X * out;
  pattern_stable = true;
  for (Eigen::Index i = 0; i < r_new.size(); ++i) {
    const signed char p =
        std::abs(r_new[i]) <= eta
            ? 0
            : static_cast<signed char>(sign_of(r_new[i]));
    if (p != pattern[static_cast<std::size_t>(i)]) {
      pattern_stable = false;
      break;
    }
  }
  return true;
}

HuberState huber_solve(const Dataset& data, double eta,
                       const Eigen::VectorXd& start,
                       const SolverOptions& options) {
  HuberState st;
  st.theta = start;
  const Eigen::Index d = data.d();
  const std::size_t irls_cap = std::min<std::size_t>(options.max_iterations, 1000);
  // Reweighted least squares: a majorize-minimize scheme, monotone in the
  // Huber objective.
  for (std::size_t it = 0; it < irls_cap; ++it) {
    ++st.iterations;
    const Eigen::VectorXd r = data.y - data.X * st.theta;
    Eigen::VectorXd w(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double a = std::abs(r[i]);
      w[i] = a <= eta ? 1.0 : eta / a;
    }
    const Eigen::MatrixXd gram =
        data.X.transpose() * w.asDiagonal() * data.X;
    const Eigen::VectorXd rhs = data.X.transpose() * w.cwiseProduct(data.y);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) break;
    const Eigen::VectorXd next = ldlt.solve(rhs);
    const double step = (next - st.theta).norm();
    st.theta = next;
    if (step <= 1e-12 * (1.0 + st.theta.norm())) break;
  }
  // Active-set polish: once the inlier set stops changing the pattern solve
  // is the exact minimizer.
  double current = huber_objective(st.theta, data, eta);
  for (int pass = 0; pass < 100; ++pass) {
    Eigen::VectorXd candidate(d);
    bool stable = false;
    if (!huber_pattern_solve(data, eta, st.theta, candidate, stable)) break;
    const double value = huber_objective(candidate, data, eta);
    if (value > current + 1e-15 * std::max(1.0, current)) break;
    st.theta = candidate;
    current = value;
    ++st.iterations;
    if (stable) break;
  }
  const double scale = std::max(1.0, eta) *
                       std::max(1.0, data.X.cwiseAbs().maxCoeff());
  st.converged =
      huber_gradient(st.theta, data, eta).norm() <= 1e-9 * scale;
  return st;
}

// --------------------------------------------------- penalized absolute

double penalized_value(const Eigen::VectorXd& theta, const Dataset& data,
                       double c) {
  return penalized_absolute_loss(theta, data, c, Exponent::infinity());
}

Eigen::VectorXd penalized_subgradient(const Eigen::VectorXd& theta,
                                      const Dataset& data, double c) {
  const Eigen::VectorXd r = data.y - data.X * theta;
  Eigen::Index top = 0;
  const double m = theta.size() > 0 ? theta.cwiseAbs().maxCoeff(&top) : 0.0;
  const double n = static_cast<double>(data.n());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(theta.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double shifted = std::abs(r[i]) + c * m;
    total += shifted;
    g.noalias() -= (shifted * sign_of(r[i])) * data.X.row(i).transpose();
  }
  // Ties in max |theta_j| go to the lowest index (maxCoeff returns the first).
  g[top] += total * c * sign_of(theta[top]);
  return (2.0 / n) * g;
}

// Sign pattern of a candidate optimum. coord[j] != 0 marks a coordinate in
// the max-|theta| set with that sign; resid[i] is the residual sign, 0 for a
// residual pinned to zero.
struct PenaltyPattern {
  std::vector<signed char> coord;
  std::vector<signed char> resid;
};

PenaltyPattern observe_pattern(const Eigen::VectorXd& theta,
                               const Dataset& data, double eps) {
  PenaltyPattern pat;
  const double m = theta.cwiseAbs().maxCoeff();
  pat.coord.assign(static_cast<std::size_t>(theta.size()), 0);
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    if (m > eps && std::abs(theta[j]) >= m - eps) {
      pat.coord[static_cast<std::size_t>(j)] =
          static_cast<signed char>(sign_of(theta[j]));
    }
  }
  const Eigen::VectorXd r = data.y - data.X * theta;
  const double r_scale = std::max(1.0, r.cwiseAbs().maxCoeff());
  pat.resid.assign(static_cast<std::size_t>(r.size()), 0);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (std::abs(r[i]) > eps * r_scale) {
      pat.resid[static_cast<std::size_t>(i)] =
          static_cast<signed char>(sign_of(r[i]));
    }
  }
  return pat;
}

// Minimizer of the objective restricted to a pattern: active coordinates
// share one magnitude u, pinned residuals vanish, the rest keep their sign.
// An empty active set means theta = 0.
bool pattern_minimizer(const PenaltyPattern& pat, const Dataset& data,
                       double c, Eigen::VectorXd& out) {
  const Eigen::Index d = data.d();
  std::vector<Eigen::Index> free;
  Eigen::VectorXd active_dir = Eigen::VectorXd::Zero(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const signed char a = pat.coord[static_cast<std::size_t>(j)];
    if (a != 0) {
      active_dir[j] = a;
    } else {
      free.push_back(j);
    }
  }
  if (active_dir.isZero(0.0)) {
    out = Eigen::VectorXd::Zero(d);
    return true;
  }
  const auto k = static_cast<Eigen::Index>(free.size()) + 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, k);
  M.col(0) = active_dir;
  for (std::size_t f = 0; f < free.size(); ++f) {
    M(free[f], static_cast<Eigen::Index>(f) + 1) = 1.0;
  }

  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(k);
  std::vector<Eigen::Index> pinned;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double s = pat.resid[static_cast<std::size_t>(i)];
    if (s == 0.0) {
      pinned.push_back(i);
      Q(0, 0) += c * c;
      continue;
    }
    Eigen::VectorXd g = s * (M.transpose() * data.X.row(i).transpose());
    g[0] -= c;
    Q.noalias() += g * g.transpose();
    q.noalias() += (s * data.y[i]) * g;
  }
  const auto p = static_cast<Eigen::Index>(pinned.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + p, k + p);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + p);
  kkt.topLeftCorner(k, k) = Q;
  rhs.head(k) = q;
  for (Eigen::Index a = 0; a < p; ++a) {
    const Eigen::RowVectorXd row =
        data.X.row(pinned[static_cast<std::size_t>(a)]) * M;
    kkt.block(k + a, 0, 1, k) = row;
    kkt.block(0, k + a, k, 1) = row.transpose();
    rhs[k + a] = data.y[pinned[static_cast<std::size_t>(a)]];
  }
  const Eigen::VectorXd z = kkt.completeOrthogonalDecomposition().solve(rhs);
  if (!z.allFinite()) return false;
  out = M * z.head(k);
  return true;
}

// The observed pattern plus every pattern one step looser: a pinned residual
// released with either sign, or an active coordinate made free.
std::vector<PenaltyPattern> nearby_patterns(const PenaltyPattern& base) {
  std::vector<PenaltyPattern> out{base};
  for (std::size_t i = 0; i < base.resid.size(); ++i) {
    if (base.resid[i] != 0) continue;
    for (signed char s : {1, -1}) {
      PenaltyPattern p = base;
      p.resid[i] = s;
      out.push_back(std::move(p));
    }
  }
  std::size_t active = 0;
  for (signed char a : base.coord) active += a != 0;
  if (active >= 2) {
    for (std::size_t j = 0; j < base.coord.size(); ++j) {
      if (base.coord[j] == 0) continue;
      PenaltyPattern p = base;
      p.coord[j] = 0;
      out.push_back(std::move(p));
    }
  }
  return out;
}

// Convex objective, so a 1-D search along theta -> candidate cannot hurt.
bool segment_improve(Eigen::VectorXd& theta, double& value,
                     const Eigen::VectorXd& candidate, const Dataset& data,
                     double c) {
  const Eigen::VectorXd dir = candidate - theta;
  if (dir.norm() == 0.0) return false;
  auto along = [&](double t) {
    return penalized_value(theta + t * dir, data, c);
  };
  const auto [t_min, f_min] =
      boost::math::tools::brent_find_minima(along, 0.0, 1.0, 50);
  double best_t = t_min;
  double best_f = f_min;
  const double f_one = along(1.0);
  if (f_one <= best_f) {
    best_t = 1.0;
    best_f = f_one;
  }
  if (best_f < value - 1e-15 * std::max(1.0, value)) {
    theta += best_t * dir;
    value = best_f;
    return true;
  }
  return false;
}

void penalized_polish(Eigen::VectorXd& theta, double& value,
                      const Dataset& data, double c) {
  static constexpr double kTolerances[] = {1e-2, 1e-3, 1e-4, 1e-5,
                                           1e-6, 1e-7, 1e-8, 1e-10};
  for (int pass = 0; pass < 100; ++pass) {
    // Take the best move over all candidate patterns of this pass.
    Eigen::VectorXd best_theta = theta;
    double best_value = value;
    const double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());
    for (double tol : kTolerances) {
      const PenaltyPattern base = observe_pattern(theta, data, tol * scale);
      for (const PenaltyPattern& pat : nearby_patterns(base)) {
        Eigen::VectorXd candidate;
        if (!pattern_minimizer(pat, data, c, candidate)) continue;
        Eigen::VectorXd moved = theta;
        double moved_value = value;
        if (segment_improve(moved, moved_value, candidate, data, c) &&
            moved_value < best_value) {
          best_theta = std::move(moved);
          best_value = moved_value;
        }
      }
    }
    if (!(best_value < value)) break;
    theta = std::move(best_theta);
    value = best_value;
  }
}

// ------------------------------------------------------------ helpers

FitResult make_result(Eigen::VectorXd theta, double loss, std::size_t iters,
                      bool converged, std::string solver) {
  FitResult out;
  out.theta_hat = std::move(theta);
  out.loss_value = loss;
  out.iterations = iters;
  out.converged = converged;
  out.solver = std::move(solver);
  return out;
}

Eigen::VectorXd starting_point(const Dataset& data,
                               const SolverOptions& options) {
  if (options.initial_theta.size() == 0) return fit_ols(data).theta_hat;
  if (options.initial_theta.size() != data.d()) {
    throw DimensionError("initial theta has " +
                         std::to_string(options.initial_theta.size()) +
                         " entries, data has d = " + std::to_string(data.d()));
  }
  if (!options.initial_theta.allFinite()) {
    throw ConfigError("initial theta must be finite");
  }
  return options.initial_theta;
}

bool armijo_accept(double trial, double current, double slope, double t) {
  // Slack of a few ulps so that a step landing on the floating-point floor
  // is not rejected forever.
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(current));
  return std::isfinite(trial) && trial <= current + 1e-4 * t * slope + slack;
}

}  // namespace

// ================================================================ OLS

FitResult fit_ols(const Dataset& data) {
  const auto qr = checked_qr(data);
  Eigen::VectorXd theta = qr.solve(data.y);
  const double loss = ols_loss(theta, data);
  return make_result(std::move(theta), loss, 1, true, "ols_qr");
}

// ===================================================== outcome-optimistic

FitResult fit_huber(const Dataset& data, double eta,
                    const SolverOptions& options) {
  require_positive(eta, "Huber threshold");
  HuberState st = huber_solve(data, eta, starting_point(data, options), options);
  const double loss = huber_objective(st.theta, data, eta);
  return make_result(std::move(st.theta), loss, st.iterations, st.converged,
                     "huber_irls_active_set");
}

FitResult fit_outcome_optimistic(const Dataset& data, double tau,
                                 const SolverOptions& options) {
  require_positive(tau, "tau");
  const double eta = outcome_optimistic_huber_threshold(tau);
  HuberState st = huber_solve(data, eta, starting_point(data, options), options);
  const double loss =
      outcome_optimistic_loss(st.theta, data, IndexModel{},
                              Exponent::finite(1.0), 1.0, tau)
          .value;
  return make_result(std::move(st.theta), loss, st.iterations, st.converged,
                     "huber_irls_active_set");
}

FitResult fit_outcome_optimistic_alternating(const Dataset& data, double tau,
                                             const SolverOptions& options,
                                             std::vector<double>* trace) {
  require_positive(tau, "tau");
  const auto qr = checked_qr(data);
  const double eta = outcome_optimistic_huber_threshold(tau);
  const double n = static_cast<double>(data.n());
  Eigen::VectorXd theta = options.initial_theta.size() == 0
                              ? Eigen::VectorXd(qr.solve(data.y))
                              : starting_point(data, options);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(data.n());

  auto joint = [&](const Eigen::VectorXd& th, const Eigen::VectorXd& m) {
    const Eigen::VectorXd shifted = data.y + m - data.X * th;
    return (shifted.squaredNorm() + m.lpNorm<1>() / tau) / n;
  };

  bool converged = false;
  std::size_t it = 0;
  while (it < options.max_iterations) {
    ++it;
    const Eigen::VectorXd e = data.y - data.X * theta;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double shrink = std::max(std::abs(e[i]) - eta, 0.0);
      mu[i] = shrink == 0.0 ? 0.0 : -std::copysign(shrink, e[i]);
    }
    if (trace) trace->push_back(joint(theta, mu));
    Eigen::VectorXd next = qr.solve(data.y + mu);
    if (trace) trace->push_back(joint(next, mu));
    const double step = (next - theta).norm();
    theta = std::move(next);
    if (step <= options.step_tolerance) {
      converged = true;
      break;
    }
  }
  const double loss =
      outcome_optimistic_loss(theta, data, IndexModel{},
                              Exponent::finite(1.0), 1.0, tau)
          .value;
  return make_result(std::move(theta), loss, it, converged,
                     "block_alternation");
}

// =================================================== covariate-pessimistic

double bridge_penalty_coefficient(double lam) { return std::abs(lam); }

double bridge_optimistic_scale(double lam) { return 25.0 * std::abs(lam); }

FitResult fit_penalized_absolute(const Dataset& data, double coefficient,
                                 const SolverOptions& options) {
  if (!(coefficient >= 0.0) || !std::isfinite(coefficient)) {
    throw ConfigError("penalty coefficient must be finite and >= 0");
  }
  const double c = coefficient;
  Eigen::VectorXd theta = starting_point(data, options);
  double current = penalized_value(theta, data, c);
  const double initial = current;

  Eigen::VectorXd best = theta;
  double best_value = current;
  Eigen::VectorXd average = Eigen::VectorXd::Zero(theta.size());
  double weight_sum = 0.0;
  const double reach = 0.1 * std::max(theta.norm(), 1e-3);
  const double offset = 0.1 * std::max(initial, 1e-12);

  std::vector<double> history;
  history.reserve(options.subgradient_iterations + 1);
  history.push_back(best_value);
  bool converged = false;
  std::size_t it = 0;
  std::size_t schedule_start = 0;
  while (it < options.subgradient_iterations) {
    ++it;
    const Eigen::VectorXd g = penalized_subgradient(theta, data, c);
    const double gnorm = g.norm();
    if (gnorm == 0.0) {
      converged = true;
      break;
    }
    const double k = static_cast<double>(it - schedule_start);
    // Polyak step towards a target that approaches the best value, capped by
    // a diminishing trust length.
    const double polyak =
        (current - best_value + offset / k) / (gnorm * gnorm);
    const double step = std::min(polyak, reach / (std::sqrt(k) * gnorm));
    theta -= step * g;
    current = penalized_value(theta, data, c);
    if (!std::isfinite(current) || current > 1e6 * (initial + 1.0)) {
      throw SolverError("subgradient descent diverged at iteration " +
                        std::to_string(it) + " (objective " +
                        std::to_string(current) + ", start " +
                        std::to_string(initial) + ")");
    }
    average += step * theta;
    weight_sum += step;
    if (current < best_value) {
      best_value = current;
      best = theta;
    }
    // Periodic polish: an exact pattern solve lets the stall rule fire at the
    // optimum instead of waiting out the slow subgradient tail.
    if (options.stall_window > 0 && it % options.stall_window == 0) {
      const double before = best_value;
      penalized_polish(best, best_value, data, c);
      if (best_value < before) {
        // Restart the step schedule from the polished point so that a
        // non-optimal kink is left again.
        theta = best;
        current = best_value;
        schedule_start = it;
      }
    }
    history.push_back(best_value);
    if (it >= options.stall_window &&
        history[it - options.stall_window] - best_value <
            options.stall_tolerance) {
      converged = true;
      break;
    }
  }
  if (weight_sum > 0.0) {
    const Eigen::VectorXd averaged = average / weight_sum;
    const double averaged_value = penalized_value(averaged, data, c);
    if (averaged_value < best_value) {
      best = averaged;
      best_value = averaged_value;
    }
  }
  penalized_polish(best, best_value, data, c);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(best.size());
  const double origin_value = penalized_value(origin, data, c);
  if (origin_value < best_value) {
    best = origin;
    best_value = origin_value;
  }
  return make_result(std::move(best), best_value, it, converged,
                     "subgradient_polyak_average+active_set");
}

FitResult fit_covariate_pessimistic(const Dataset& data, double lam,
                                    const SolverOptions& options) {
  require_positive(lam, "lambda");
  return fit_penalized_absolute(data, bridge_penalty_coefficient(lam),
                                options);
}

FitResult fit_bridge(const Dataset& data, double lam,
                     const SolverOptions& options) {
  if (!std::isfinite(lam)) throw ConfigError("lambda must be finite");
  if (lam > 0.0) {
    return fit_outcome_optimistic(data, bridge_optimistic_scale(lam), options);
  }
  if (lam < 0.0) return fit_covariate_pessimistic(data, -lam, options);
  return fit_ols(data);
}

// ================================================================ Deming

FitResult fit_deming_tls(const Dataset& data, double tau,
                         const SolverOptions& options) {
  require_positive(tau, "tau");
  const double n = static_cast<double>(data.n());
  const Eigen::Index d = data.d();
  const double td = tau * static_cast<double>(d);
  const Eigen::MatrixXd hess_a = (2.0 / n) * (data.X.transpose() * data.X);

  auto value = [&](const Eigen::VectorXd& th) {
    return (data.y - data.X * th).squaredNorm() / n /
           (1.0 + td * th.squaredNorm());
  };

  Eigen::VectorXd theta = starting_point(data, options);
  double f = value(theta);
  bool converged = false;
  std::size_t it = 0;
  for (;;) {
    const Eigen::VectorXd r = data.y - data.X * theta;
    const double a = r.squaredNorm() / n;
    const double b = 1.0 + td * theta.squaredNorm();
    const Eigen::VectorXd ga = (-2.0 / n) * (data.X.transpose() * r);
    const Eigen::VectorXd gb = (2.0 * td) * theta;
    const Eigen::VectorXd g = (ga * b - a * gb) / (b * b);
    if (g.norm() <= options.gradient_tolerance) {
      converged = true;
      break;
    }
    if (it >= options.max_iterations) break;
    ++it;
    Eigen::MatrixXd H = hess_a / b -
                        (ga * gb.transpose() + gb * ga.transpose()) / (b * b) -
                        (a * 2.0 * td / (b * b)) *
                            Eigen::MatrixXd::Identity(d, d) +
                        (2.0 * a / (b * b * b)) * (gb * gb.transpose());
    // Levenberg damping until the model is convex.
    double damping = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt;
    for (int tries = 0; tries < 60; ++tries) {
      llt.compute(H + damping * Eigen::MatrixXd::Identity(d, d));
      if (llt.info() == Eigen::Success) break;
      damping = damping == 0.0 ? 1e-10 * std::max(1.0, H.norm())
                               : damping * 10.0;
    }
    Eigen::VectorXd dir = llt.info() == Eigen::Success ? Eigen::VectorXd(-llt.solve(g))
                                                       : Eigen::VectorXd(-g);
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      dir = -g;
      slope = -g.squaredNorm();
    }
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 80; ++k) {
      const double trial = value(theta + t * dir);
      if (armijo_accept(trial, f, slope, t)) {
        accepted = true;
        theta += t * dir;
        f = trial;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  if (!converged) {
    throw SolverError("Deming fit did not reach gradient norm " +
                      std::to_string(options.gradient_tolerance) + " after " +
                      std::to_string(it) + " iterations");
  }
  const double loss =
      covariate_optimistic_loss(theta, data, IndexModel{},
                                Exponent::finite(2.0), Exponent::finite(2.0),
                                2.0, tau)
          .value;
  return make_result(std::move(theta), loss, it, true, "damped_newton");
}

// ============================================================ generic fit

FitResult fit_loss(const Dataset& data, const LossSpec& spec,
                   const SolverOptions& options) {
  if (spec.kind == LossKind::kOls) return fit_ols(data);
  spec.norm.validate();
  const Eigen::Index d = data.d();
  auto value = [&](const Eigen::VectorXd& th) {
    return evaluate_loss(spec, th, data).value;
  };
  auto gradient = [&](const Eigen::VectorXd& th) {
    Eigen::VectorXd g(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(th[j]));
      Eigen::VectorXd up = th;
      Eigen::VectorXd down = th;
      up[j] += h;
      down[j] -= h;
      g[j] = (value(up) - value(down)) / (2.0 * h);
    }
    return g;
  };

  Eigen::VectorXd theta = starting_point(data, options);
  double f = value(theta);
  Eigen::VectorXd g = gradient(theta);
  Eigen::MatrixXd inv_h = Eigen::MatrixXd::Identity(d, d);
  bool converged = false;
  std::size_t it = 0;
  while (it < options.max_iterations) {
    if (g.norm() <= options.fd_gradient_tolerance) {
      converged = true;
      break;
    }
    ++it;
    Eigen::VectorXd dir = -inv_h * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      inv_h.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd next;
    double f_next = f;
    for (int k = 0; k < 60; ++k) {
      next = theta + t * dir;
      f_next = value(next);
      if (armijo_accept(f_next, f, slope, t)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    const Eigen::VectorXd g_next = gradient(next);
    const Eigen::VectorXd s = next - theta;
    const Eigen::VectorXd yv = g_next - g;
    const double sy = s.dot(yv);
    if (sy > 1e-14) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
      inv_h = (I - rho * s * yv.transpose()) * inv_h *
                  (I - rho * yv * s.transpose()) +
              rho * s * s.transpose();
    }
    theta = next;
    f = f_next;
    g = g_next;
  }
  const double loss = value(theta);
  return make_result(std::move(theta), loss, it, converged, "bfgs_fd");
}

// =================================================================== DPD

void DpdSpec::validate() const {
  if (!std::isfinite(beta_exp) || beta_exp <= -1.0) {
    throw ConfigError(
        "DPD exponent must exceed -1: the power integral of the normal "
        "density diverges otherwise");
  }
  if (!(sigma_y > 0.0) || !std::isfinite(sigma_y)) {
    throw ConfigError("DPD sigma_y must be positive");
  }
}

namespace {

void check_dpd(const Eigen::VectorXd& theta, const Dataset& data,
               const DpdSpec& spec) {
  spec.validate();
  data.validate();
  if (theta.size() != data.d()) {
    throw DimensionError("theta has " + std::to_string(theta.size()) +
                         " entries but the data has d = " +
                         std::to_string(data.d()));
  }
}

double log_density(double r, double s2) {
  return -0.5 * std::log(2.0 * std::numbers::pi * s2) - r * r / (2.0 * s2);
}

}  // namespace

double dpd_objective(const Eigen::VectorXd& theta, const Dataset& data,
                     const DpdSpec& spec) {
  check_dpd(theta, data, spec);
  const double b = spec.beta_exp;
  const double s2 = spec.sigma_y * spec.sigma_y;
  const Eigen::VectorXd r = data.y - data.X * theta;
  const double n = static_cast<double>(data.n());
  if (b == 0.0) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) acc -= log_density(r[i], s2);
    return acc / n;
  }
  // int N(y; m, s2)^(1+b) dy = (2 pi s2)^(-b/2) (1+b)^(-1/2).
  const double integral = std::pow(2.0 * std::numbers::pi * s2, -0.5 * b) /
                          std::sqrt(1.0 + b);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    acc += std::exp(b * log_density(r[i], s2));
  }
  return integral - (1.0 + 1.0 / b) * acc / n;
}

Eigen::VectorXd dpd_estimating_equation(const Eigen::VectorXd& theta,
                                        const Dataset& data,
                                        const DpdSpec& spec) {
  check_dpd(theta, data, spec);
  const double b = spec.beta_exp;
  const double s2 = spec.sigma_y * spec.sigma_y;
  const Eigen::VectorXd r = data.y - data.X * theta;
  Eigen::VectorXd weighted(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double w = b == 0.0 ? 1.0 : std::exp(b * log_density(r[i], s2));
    weighted[i] = w * r[i] / s2;
  }
  return data.X.transpose() * weighted / static_cast<double>(data.n());
}

Eigen::VectorXd dpd_gradient(const Eigen::VectorXd& theta, const Dataset& data,
                             const DpdSpec& spec) {
  return -(1.0 + spec.beta_exp) * dpd_estimating_equation(theta, data, spec);
}

FitResult fit_dpd(const Dataset& data, const DpdSpec& spec,
                  const SolverOptions& options) {
  spec.validate();
  if (spec.beta_exp == 0.0) {
    FitResult mle = fit_ols(data);
    mle.loss_value = dpd_objective(mle.theta_hat, data, spec);
    return mle;
  }
  const double b = spec.beta_exp;
  const double s2 = spec.sigma_y * spec.sigma_y;
  const double n = static_cast<double>(data.n());

  Eigen::VectorXd theta = starting_point(data, options);
  double f = dpd_objective(theta, data, spec);
  bool converged = false;
  std::size_t it = 0;
  for (;;) {
    const Eigen::VectorXd r = data.y - data.X * theta;
    Eigen::VectorXd w(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      w[i] = std::exp(b * log_density(r[i], s2));
    }
    const Eigen::VectorXd ee =
        data.X.transpose() * (w.cwiseProduct(r) / s2) / n;
    const double scale = std::max(1.0, w.mean());
    if (ee.cwiseAbs().maxCoeff() <= options.estimating_tolerance * scale) {
      converged = true;
      break;
    }
    if (it >= options.max_iterations) break;
    ++it;
    const Eigen::VectorXd g = -(1.0 + b) * ee;
    Eigen::VectorXd curvature(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      curvature[i] = w[i] * (1.0 - b * r[i] * r[i] / s2);
    }
    const Eigen::MatrixXd H = ((1.0 + b) / (s2 * n)) *
                              (data.X.transpose() * curvature.asDiagonal() *
                               data.X);
    Eigen::VectorXd dir = -g;
    Eigen::LLT<Eigen::MatrixXd> llt(H);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd newton = -llt.solve(g);
      if (newton.allFinite() && g.dot(newton) < 0.0) dir = newton;
    }
    const double slope = g.dot(dir);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 80; ++k) {
      const Eigen::VectorXd trial_theta = theta + t * dir;
      const double trial = dpd_objective(trial_theta, data, spec);
      if (armijo_accept(trial, f, slope, t)) {
        theta = trial_theta;
        f = trial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return make_result(std::move(theta), f, it, converged,
                     "newton_backtracking");
}

}  // namespace bridgereg
