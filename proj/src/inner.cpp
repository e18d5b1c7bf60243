#include "bridgereg/inner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "bridgereg/errors.hpp"
#include "bridgereg/rng.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace bridgereg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1/q with 1/inf = 0.
double reciprocal(Exponent q) { return q.is_infinite() ? 0.0 : 1.0 / q.value(); }

bool at_least_one(Exponent q) { return q.is_infinite() || q.value() >= 1.0; }

Eigen::VectorXd flatten(const Eigen::MatrixXd& P) {
  return Eigen::Map<const Eigen::VectorXd>(P.data(), P.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, Eigen::Index rows,
                          Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

// Solves u + lambda * q * u^(q-1) = a for u in [0, a], q > 1.
double shrink_lq(double a, double lambda, double q) {
  if (a == 0.0 || lambda == 0.0) return a;
  // Root of m + lambda q m^(q-1) = a on [0, a]: Newton steps kept inside a
  // shrinking bracket, bisection when a step leaves it.
  double lo = 0.0;
  double hi = a;
  double m = a / (1.0 + lambda * q * std::pow(a, q - 2.0));
  for (int it = 0; it < 200; ++it) {
    const double f = m + lambda * q * std::pow(m, q - 1.0) - a;
    if (f > 0.0) {
      hi = m;
    } else {
      lo = m;
    }
    if (f == 0.0 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * a) {
      break;
    }
    const double slope = 1.0 + lambda * q * (q - 1.0) * std::pow(m, q - 2.0);
    double next = m - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == m) break;
    m = next;
  }
  return lo;
}

Eigen::VectorXd project_l1(const Eigen::VectorXd& v, double radius) {
  std::vector<double> u(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    u[static_cast<std::size_t>(i)] = std::abs(v[i]);
  }
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double shift = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - radius) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) shift = candidate;
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::max(std::abs(v[i]) - shift, 0.0);
    out[i] = std::copysign(mag, v[i]);
  }
  return out;
}

Eigen::VectorXd project_lq_general(const Eigen::VectorXd& v, double q,
                                   double radius) {
  const double target = std::pow(radius, q);
  auto mass = [&](double lambda) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      acc += std::pow(shrink_lq(std::abs(v[i]), lambda, q), q);
    }
    return acc;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (mass(hi) > target) {
    lo = hi;
    hi *= 2.0;
  }
  // mass is decreasing in lambda; keep the feasible (upper) end.
  boost::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      [&](double lambda) { return mass(lambda) - target; }, lo, hi,
      boost::math::tools::eps_tolerance<double>(50), max_iter);
  hi = bracket.second;
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = std::copysign(shrink_lq(std::abs(v[i]), hi, q), v[i]);
  }
  return out;
}

// Mixed-radix lattice walk over `dim` axes.
template <typename Visit>
void for_each_lattice_point(const Eigen::VectorXd& center, double half_width,
                            std::size_t points, Visit&& visit) {
  const auto dim = center.size();
  std::vector<std::size_t> counter(static_cast<std::size_t>(dim), 0);
  Eigen::VectorXd p(dim);
  const double denom = static_cast<double>(points - 1);
  while (true) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double t = static_cast<double>(counter[static_cast<std::size_t>(j)]);
      p[j] = center[j] + half_width * (2.0 * t / denom - 1.0);
    }
    visit(p);
    Eigen::Index axis = 0;
    while (axis < dim) {
      auto& c = counter[static_cast<std::size_t>(axis)];
      if (++c < points) break;
      c = 0;
      ++axis;
    }
    if (axis == dim) return;
  }
}

InnerSolution zero_solution(const InnerProblem& problem) {
  InnerSolution out;
  out.argument = problem.zero();
  out.value = problem.data_term(out.argument);
  out.exact = true;
  return out;
}

void require_gradient_geometry(const InnerProblem& problem) {
  if (!problem.convex_geometry()) {
    throw ConfigError(
        "gradient inner solver needs alpha, beta (and gamma when optimistic) "
        ">= 1; use the grid oracle for non-convex geometries");
  }
  if (!projection_supported(problem.cols(), problem.norm().alpha,
                            problem.norm().beta)) {
    throw ConfigError(
        "no Euclidean projection for this (alpha, beta) geometry; supported: "
        "alpha = inf, alpha = beta, beta = 2, or outcome perturbations");
  }
}

Eigen::MatrixXd random_feasible_start(const InnerProblem& problem, double level,
                                      Rng& rng) {
  Eigen::MatrixXd G(problem.rows(), problem.cols());
  for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = rng.normal();
  const double norm = problem.perturbation_norm(G);
  if (norm == 0.0) return problem.zero();
  G *= level * rng.uniform01() / norm;
  return project_std_ball(G, problem.norm().alpha, problem.norm().beta, level);
}

}  // namespace

InnerProblem InnerProblem::outcome(const Dataset& data, const IndexModel& model,
                                   const Eigen::VectorXd& theta, Sense sense,
                                   Exponent alpha, double gamma, double tau) {
  data.validate();
  InnerProblem p;
  p.target_ = PerturbTarget::kOutcome;
  p.sense_ = sense;
  p.norm_.alpha = alpha;
  p.norm_.beta = alpha;
  p.norm_.gamma = gamma;
  p.norm_.tau = tau;
  p.norm_.validate();
  p.model_ = model;
  p.X_ = data.X;
  p.y_ = data.y;
  p.theta_ = theta;
  p.residuals_ = data.y - model.predict_all(data.X, theta);
  return p;
}

InnerProblem InnerProblem::covariate(const Dataset& data,
                                     const IndexModel& model,
                                     const Eigen::VectorXd& theta, Sense sense,
                                     Exponent alpha, Exponent beta,
                                     double gamma, double tau) {
  InnerProblem p = outcome(data, model, theta, sense, alpha, gamma, tau);
  p.target_ = PerturbTarget::kCovariate;
  p.norm_.beta = beta;
  return p;
}

double InnerProblem::row_data_term(
    Eigen::Index i, const Eigen::Ref<const Eigen::RowVectorXd>& p) const {
  if (target_ == PerturbTarget::kOutcome) {
    const double r = residuals_[i] + p[0];
    return r * r;
  }
  const double t = (X_.row(i) + p).dot(theta_);
  const double r = y_[i] - model_.link(t);
  return r * r;
}

double InnerProblem::data_term(const Eigen::MatrixXd& P) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rows(); ++i) acc += row_data_term(i, P.row(i));
  return acc / static_cast<double>(rows());
}

Eigen::MatrixXd InnerProblem::data_gradient(const Eigen::MatrixXd& P) const {
  const double scale = 2.0 / static_cast<double>(rows());
  if (target_ == PerturbTarget::kOutcome) {
    return scale * (residuals_ + P.col(0));
  }
  Eigen::MatrixXd G(rows(), cols());
  for (Eigen::Index i = 0; i < rows(); ++i) {
    const double t = (X_.row(i) + P.row(i)).dot(theta_);
    const double r = y_[i] - model_.link(t);
    G.row(i) = (-scale * r * model_.link_derivative(t)) * theta_.transpose();
  }
  return G;
}

double InnerProblem::perturbation_norm(const Eigen::MatrixXd& P) const {
  return std_matrix_norm(P, norm_.alpha, norm_.beta);
}

double InnerProblem::objective(const Eigen::MatrixXd& P) const {
  const double s = data_term(P);
  if (sense_ == Sense::kPessimistic) return s;
  const double n = perturbation_norm(P);
  if (norm_.tau == 0.0) return n == 0.0 ? s : kInf;
  return s + std::pow(n, norm_.gamma) / norm_.tau;
}

double InnerProblem::radius() const {
  return std::pow(norm_.tau, 1.0 / norm_.gamma);
}

bool InnerProblem::feasible(const Eigen::MatrixXd& P, double rel_slack) const {
  if (sense_ == Sense::kOptimistic) return true;
  const double r = radius();
  return perturbation_norm(P) <= r * (1.0 + rel_slack) + 1e-300;
}

double InnerProblem::coordinate_bound() const {
  double level;
  if (sense_ == Sense::kPessimistic) {
    level = radius();
  } else {
    level = std::pow(norm_.tau * data_term(zero()), 1.0 / norm_.gamma);
  }
  const double n = static_cast<double>(rows());
  const double d = static_cast<double>(cols());
  return level * std::pow(n, reciprocal(norm_.alpha)) *
         std::pow(d, cols() == 1 ? 0.0 : reciprocal(norm_.beta));
}

bool InnerProblem::row_separable() const {
  if (sense_ == Sense::kPessimistic) return norm_.alpha.is_infinite();
  return !norm_.alpha.is_infinite() && norm_.alpha.value() == norm_.gamma;
}

bool InnerProblem::convex_geometry() const {
  if (!at_least_one(norm_.alpha)) return false;
  if (cols() > 1 && !at_least_one(norm_.beta)) return false;
  if (sense_ == Sense::kOptimistic && norm_.gamma < 1.0) return false;
  return true;
}

Eigen::VectorXd project_lq_ball(const Eigen::VectorXd& v, Exponent q,
                                double radius) {
  if (!at_least_one(q)) {
    throw ConfigError("projection onto a q < 1 ball is not convex");
  }
  if (v.size() == 0) return v;
  if (radius <= 0.0) return Eigen::VectorXd::Zero(v.size());
  if (vector_norm(v, q) <= radius) return v;
  if (q.is_infinite()) return v.cwiseMax(-radius).cwiseMin(radius);
  if (q.value() == 2.0) return v * (radius / v.norm());
  if (q.value() == 1.0) return project_l1(v, radius);
  return project_lq_general(v, q.value(), radius);
}

bool projection_supported(Eigen::Index cols, Exponent alpha, Exponent beta) {
  if (!at_least_one(alpha)) return false;
  if (cols == 1) return true;
  if (!at_least_one(beta)) return false;
  return alpha.is_infinite() || alpha == beta ||
         (!beta.is_infinite() && beta.value() == 2.0);
}

Eigen::MatrixXd project_std_ball(const Eigen::MatrixXd& P, Exponent alpha,
                                 Exponent beta, double radius) {
  if (!projection_supported(P.cols(), alpha, beta)) {
    throw ConfigError("unsupported projection geometry");
  }
  const double n = static_cast<double>(P.rows());
  const double d = static_cast<double>(P.cols());
  if (P.cols() == 1 || alpha == beta) {
    const double r = radius * std::pow(n * d, reciprocal(alpha));
    return unflatten(project_lq_ball(flatten(P), alpha, r), P.rows(), P.cols());
  }
  if (alpha.is_infinite()) {
    Eigen::MatrixXd out(P.rows(), P.cols());
    const double r = radius * std::pow(d, reciprocal(beta));
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      out.row(i) = project_lq_ball(P.row(i).transpose(), beta, r).transpose();
    }
    return out;
  }
  // beta == 2: project the vector of row 2-norms, then rescale each row.
  Eigen::VectorXd w = P.rowwise().norm();
  const double r = radius * std::pow(n, reciprocal(alpha)) * std::sqrt(d);
  const Eigen::VectorXd w_proj = project_lq_ball(w, alpha, r);
  Eigen::MatrixXd out = P;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    out.row(i) *= w[i] > 0.0 ? w_proj[i] / w[i] : 0.0;
  }
  return out;
}

InnerSolution grid_search(const InnerProblem& problem, const GridSpec& spec) {
  if (problem.norm().tau == 0.0) return zero_solution(problem);
  if (spec.points_per_axis < 3 || spec.points_per_axis % 2 == 0) {
    throw ConfigError("grid needs an odd number (>= 3) of points per axis");
  }
  const bool separable = problem.row_separable();
  const Eigen::Index block_dim =
      separable ? problem.cols() : problem.dimension();
  const Eigen::Index blocks = separable ? problem.rows() : 1;
  if (block_dim > spec.max_block_dimension) {
    throw BudgetError("grid oracle refuses a " + std::to_string(block_dim) +
                      "-dimensional block (limit " +
                      std::to_string(spec.max_block_dimension) + ")");
  }
  const double per_level =
      std::pow(static_cast<double>(spec.points_per_axis),
               static_cast<double>(block_dim));
  const double total = per_level * static_cast<double>(blocks) *
                       static_cast<double>(spec.refinements + 1);
  if (total > spec.budget) {
    throw BudgetError("grid oracle needs " + std::to_string(total) +
                      " evaluations, budget is " + std::to_string(spec.budget));
  }

  const bool minimize = problem.sense() == Sense::kOptimistic;
  const double n = static_cast<double>(problem.rows());
  const double tau = problem.norm().tau;
  const double radius = problem.radius();
  const Exponent alpha = problem.norm().alpha;
  const Exponent beta = problem.norm().beta;

  // Score to minimize; +inf marks infeasible points.
  std::function<double(Eigen::Index, const Eigen::VectorXd&)> score;
  if (separable) {
    score = [&](Eigen::Index row, const Eigen::VectorXd& p) {
      const double fit = problem.row_data_term(row, p.transpose()) / n;
      const double row_norm = std_vector_norm(p, beta);
      if (minimize) {
        return fit + std::pow(row_norm, alpha.value()) / (n * tau);
      }
      return row_norm <= radius * (1.0 + 1e-12) ? -fit : kInf;
    };
  } else {
    score = [&](Eigen::Index, const Eigen::VectorXd& p) {
      const Eigen::MatrixXd P = unflatten(p, problem.rows(), problem.cols());
      if (minimize) return problem.objective(P);
      return problem.feasible(P, 1e-12) ? -problem.data_term(P) : kInf;
    };
  }

  const double max_resid = problem.residuals().cwiseAbs().maxCoeff();
  const double initial_half_width =
      std::max(2.0 * problem.coordinate_bound(), 2.0 * max_resid);

  Eigen::MatrixXd argument = problem.zero();
  for (Eigen::Index b = 0; b < blocks; ++b) {
    Eigen::VectorXd best = Eigen::VectorXd::Zero(block_dim);
    double best_score = score(b, best);
    double half_width = initial_half_width;
    if (half_width > 0.0) {
      for (std::size_t level = 0; level <= spec.refinements; ++level) {
        const Eigen::VectorXd center = best;
        for_each_lattice_point(center, half_width, spec.points_per_axis,
                               [&](const Eigen::VectorXd& p) {
                                 const double s = score(b, p);
                                 if (s < best_score) {
                                   best_score = s;
                                   best = p;
                                 }
                               });
        half_width *= 4.0 / static_cast<double>(spec.points_per_axis - 1);
      }
    }
    if (separable) {
      argument.row(b) = best.transpose();
    } else {
      argument = unflatten(best, problem.rows(), problem.cols());
    }
  }
  InnerSolution out;
  out.argument = std::move(argument);
  out.value = problem.objective(out.argument);
  out.exact = false;
  return out;
}

InnerSolution projected_ascent(const InnerProblem& problem,
                               const GradientSpec& spec) {
  if (problem.sense() != Sense::kPessimistic) {
    throw ConfigError("projected_ascent solves pessimistic problems only");
  }
  if (problem.norm().tau == 0.0) return zero_solution(problem);
  require_gradient_geometry(problem);

  const Exponent alpha = problem.norm().alpha;
  const Exponent beta = problem.norm().beta;
  const double radius = problem.radius();
  const bool separable = problem.row_separable();
  const double d = static_cast<double>(problem.cols());
  const double row_radius =
      radius * std::pow(d, problem.cols() == 1 ? 0.0 : reciprocal(beta));
  const double step0 = spec.step_fraction *
                       (separable ? row_radius : problem.coordinate_bound());

  auto project_row = [&](const Eigen::RowVectorXd& row) -> Eigen::RowVectorXd {
    const Exponent q = problem.cols() == 1 ? Exponent::infinity() : beta;
    return project_lq_ball(row.transpose(), q, row_radius).transpose();
  };

  Rng rng(spec.seed);
  InnerSolution best;
  best.argument = problem.zero();
  best.value = problem.data_term(best.argument);

  const std::size_t starts = std::max<std::size_t>(spec.restarts, 1);
  for (std::size_t start = 0; start < starts; ++start) {
    Eigen::MatrixXd P = start == 0 ? problem.zero()
                                   : random_feasible_start(problem, radius, rng);
    double value = problem.data_term(P);
    std::vector<double> history{value};
    Eigen::VectorXd row_step = Eigen::VectorXd::Constant(problem.rows(), step0);
    double step = step0;

    for (std::size_t it = 0; it < spec.iterations; ++it) {
      const Eigen::MatrixXd G = problem.data_gradient(P);
      if (G.norm() == 0.0) break;
      if (separable) {
        for (Eigen::Index i = 0; i < problem.rows(); ++i) {
          const double gnorm = G.row(i).norm();
          if (gnorm == 0.0) continue;
          const Eigen::RowVectorXd cand =
              project_row(P.row(i) + (row_step[i] / gnorm) * G.row(i));
          if (problem.row_data_term(i, cand) >= problem.row_data_term(i, P.row(i))) {
            P.row(i) = cand;
          } else {
            row_step[i] *= 0.5;
          }
        }
        value = problem.data_term(P);
      } else {
        const Eigen::MatrixXd cand =
            project_std_ball(P + (step / G.norm()) * G, alpha, beta, radius);
        const double cand_value = problem.data_term(cand);
        if (cand_value >= value) {
          P = cand;
          value = cand_value;
        } else {
          step *= 0.5;
        }
      }
      history.push_back(value);
      if (history.size() > spec.stall_window) {
        const double before = history[history.size() - 1 - spec.stall_window];
        if (value - before < spec.stall_tolerance) break;
      }
    }
    if (value > best.value) {
      best.value = value;
      best.argument = P;
    }
  }
  best.exact = false;
  return best;
}

namespace {

// Projected gradient descent of S over the N-ball of radius `level`, with
// backtracking on the Lipschitz estimate. Returns the final S.
double constrained_descent(const InnerProblem& problem, double level,
                           Eigen::MatrixXd& P, std::size_t max_iterations) {
  const Exponent alpha = problem.norm().alpha;
  const Exponent beta = problem.norm().beta;
  P = project_std_ball(P, alpha, beta, level);
  double value = problem.data_term(P);
  double lipschitz = 2.0 / static_cast<double>(problem.rows()) *
                     std::max(1.0, problem.theta().squaredNorm());
  std::size_t quiet = 0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const Eigen::MatrixXd G = problem.data_gradient(P);
    Eigen::MatrixXd next;
    double next_value;
    for (int bt = 0; bt < 60; ++bt) {
      next = project_std_ball(P - G / lipschitz, alpha, beta, level);
      next_value = problem.data_term(next);
      const Eigen::MatrixXd step = next - P;
      const double model = value + (G.array() * step.array()).sum() +
                           0.5 * lipschitz * step.squaredNorm();
      if (next_value <= model + 1e-15 * std::abs(value)) break;
      lipschitz *= 2.0;
    }
    if (next_value > value) break;
    const double gain = value - next_value;
    P = next;
    value = next_value;
    quiet = gain <= 1e-14 * (1.0 + value) ? quiet + 1 : 0;
    if (quiet >= 5) break;
  }
  return value;
}

}  // namespace

InnerSolution radial_descent(const InnerProblem& problem,
                             const GradientSpec& spec) {
  if (problem.sense() != Sense::kOptimistic) {
    throw ConfigError("radial_descent solves optimistic problems only");
  }
  if (problem.norm().tau == 0.0) return zero_solution(problem);
  require_gradient_geometry(problem);

  const double tau = problem.norm().tau;
  const double gamma = problem.norm().gamma;
  const double s0 = problem.data_term(problem.zero());
  const double level_max = std::pow(tau * s0, 1.0 / gamma);

  InnerSolution best = zero_solution(problem);
  best.exact = false;
  if (level_max == 0.0) return best;

  constexpr std::size_t kInnerIterations = 3000;
  Rng rng(spec.seed);
  const std::size_t starts = std::max<std::size_t>(spec.restarts, 1);
  for (std::size_t start = 0; start < starts; ++start) {
    Eigen::MatrixXd warm = start == 0
                               ? problem.zero()
                               : random_feasible_start(problem, level_max, rng);
    auto phi = [&](double level, Eigen::MatrixXd& P) {
      return constrained_descent(problem, level, P, kInnerIterations) +
             std::pow(level, gamma) / tau;
    };
    // Golden-section search on the level; phi is convex in the level when S
    // is convex.
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = level_max;
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    Eigen::MatrixXd Pa = warm;
    Eigen::MatrixXd Pb = warm;
    double fa = phi(a, Pa);
    double fb = phi(b, Pb);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * level_max; ++it) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        Pb = Pa;
        a = hi - ratio * (hi - lo);
        fa = phi(a, Pa);
      } else {
        lo = a;
        a = b;
        fa = fb;
        Pa = Pb;
        b = lo + ratio * (hi - lo);
        fb = phi(b, Pb);
      }
    }
    const Eigen::MatrixXd& P = fa <= fb ? Pa : Pb;
    const double value = problem.objective(P);
    if (value < best.value) {
      best.value = value;
      best.argument = P;
    }
  }
  return best;
}

InnerSolution separable_descent(const InnerProblem& problem) {
  if (problem.sense() != Sense::kOptimistic ||
      problem.target() != PerturbTarget::kOutcome || !problem.row_separable()) {
    throw ConfigError(
        "separable_descent needs an optimistic outcome problem with alpha = "
        "gamma");
  }
  if (problem.norm().tau == 0.0) return zero_solution(problem);
  if (!problem.convex_geometry()) {
    throw ConfigError("separable_descent needs alpha = gamma >= 1");
  }
  const double tau = problem.norm().tau;
  const double alpha = problem.norm().alpha.value();
  const auto& e = problem.residuals();
  Eigen::MatrixXd mu = problem.zero();
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    auto h = [&](double m) {
      return (e[i] + m) * (e[i] + m) + std::pow(std::abs(m), alpha) / tau;
    };
    // The minimizer lies between 0 and -e_i.
    const double lo = std::min(0.0, -e[i]);
    const double hi = std::max(0.0, -e[i]);
    double best_m = 0.0;
    double best_h = h(0.0);
    if (hi > lo) {
      const auto [m, hm] = boost::math::tools::brent_find_minima(
          h, lo, hi, std::numeric_limits<double>::digits);
      if (hm < best_h) {
        best_m = m;
        best_h = hm;
      }
      if (h(-e[i]) < best_h) best_m = -e[i];
    }
    mu(i, 0) = best_m;
  }
  InnerSolution out;
  out.argument = std::move(mu);
  out.value = problem.objective(out.argument);
  out.exact = false;
  return out;
}

InnerSolution inner_oracle(const InnerProblem& problem, OracleMode mode,
                           const GridSpec& grid, const GradientSpec& gradient) {
  if (mode == OracleMode::kGrid) return grid_search(problem, grid);
  if (problem.sense() == Sense::kPessimistic) {
    return projected_ascent(problem, gradient);
  }
  return radial_descent(problem, gradient);
}

}  // namespace bridgereg
