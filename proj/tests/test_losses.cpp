#include <cmath>
#include <vector>

#include "doctest.h"

#include "bridgereg/errors.hpp"
#include "bridgereg/inner.hpp"
#include "bridgereg/losses.hpp"
#include "test_support.hpp"

using namespace bridgereg;
using testing_support::make_dataset;
using testing_support::random_dataset;
using testing_support::random_vector;
using testing_support::residual_dataset;

namespace {

const Exponent kInf = Exponent::infinity();
Exponent q_of(double v) { return Exponent::finite(v); }
const Eigen::VectorXd kZero1 = Eigen::VectorXd::Zero(1);

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

LossSpec spec(LossKind kind, Exponent a, Exponent b, double g, double tau) {
  LossSpec s;
  s.kind = kind;
  s.norm.alpha = a;
  s.norm.beta = b;
  s.norm.gamma = g;
  s.norm.tau = tau;
  return s;
}

// Specs with a closed form and a mix of numeric ones.
std::vector<LossSpec> spec_corpus(double tau) {
  return {
      spec(LossKind::kOutcomeMin, q_of(1), q_of(2), 1.0, tau),
      spec(LossKind::kOutcomeMin, q_of(2), q_of(2), 2.0, tau),
      spec(LossKind::kOutcomeMin, q_of(3), q_of(2), 1.5, tau),
      spec(LossKind::kOutcomeMax, q_of(2), q_of(2), 1.0, tau),
      spec(LossKind::kOutcomeMax, kInf, q_of(2), 2.0, tau),
      spec(LossKind::kOutcomeMax, q_of(1), q_of(2), 1.0, tau),
      spec(LossKind::kCovariateMin, q_of(2), q_of(2), 2.0, tau),
      spec(LossKind::kCovariateMin, kInf, q_of(2), 1.0, tau),
      spec(LossKind::kCovariateMax, kInf, q_of(1), 1.0, tau),
      spec(LossKind::kCovariateMax, kInf, q_of(2), 1.0, tau),
      spec(LossKind::kCovariateMax, q_of(2), q_of(2), 2.0, tau),
  };
}

}  // namespace

TEST_CASE("ols loss examples") {
  CHECK(ols_loss(kZero1, residual_dataset({0.0, 0.0})) == 0.0);
  CHECK(ols_loss(kZero1, residual_dataset({1.0, 1.0})) == 1.0);
  CHECK(ols_loss(kZero1, residual_dataset({3.0, 4.0})) == 12.5);
  CHECK_THROWS_AS(ols_loss(Eigen::Vector2d(1, 1), residual_dataset({1.0})),
                  DimensionError);
}

TEST_CASE("outcome optimistic examples") {
  const auto data = residual_dataset({0.2, 3.0});
  const auto h = outcome_optimistic_loss(kZero1, data, {}, q_of(1), 1.0, 1.0);
  CHECK(h.exact);
  CHECK(close(h.value, 1.395, 1e-12));
  CHECK(h.argument(0, 0) == 0.0);
  CHECK(close(h.argument(1, 0), -2.5, 1e-12));

  const auto q = outcome_optimistic_loss(kZero1, residual_dataset({1.0, 1.0}),
                                         {}, q_of(2), 2.0, 1.0);
  CHECK(q.exact);
  CHECK(close(q.value, 0.5, 1e-12));
  CHECK(close(q.argument(0, 0), -0.5, 1e-12));

  const auto z = outcome_optimistic_loss(kZero1, data, {}, q_of(1), 1.0, 0.0);
  CHECK(z.value == ols_loss(kZero1, data));
  CHECK(z.argument.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("outcome optimistic equals a Huber sum") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto data = random_dataset(rng, 6, 2);
    const Eigen::VectorXd theta = random_vector(rng, 2);
    const double tau = rng.uniform(0.05, 3.0);
    const double eta = outcome_optimistic_huber_threshold(tau);
    CHECK(eta == doctest::Approx(1.0 / (2.0 * tau)));
    const Eigen::VectorXd e = data.y - data.X * theta;
    double huber = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) huber += huber_rho(e[i], eta);
    const auto sol = outcome_optimistic_loss(theta, data, {}, q_of(1), 1.0, tau);
    CHECK(close(sol.value, 2.0 * huber / 6.0, 1e-12));
  }
  CHECK(huber_rho(0.3, 1.0) == doctest::Approx(0.045));
  CHECK(huber_rho(-3.0, 1.0) == doctest::Approx(2.5));
}

TEST_CASE("covariate optimistic examples") {
  const auto data = make_dataset(Eigen::MatrixXd::Zero(1, 1),
                                 Eigen::VectorXd::Ones(1));
  const auto sol = covariate_optimistic_loss(Eigen::VectorXd::Ones(1), data, {},
                                             q_of(2), q_of(2), 2.0, 1.0);
  CHECK(sol.exact);
  CHECK(close(sol.value, 0.5, 1e-12));
  const auto p = InnerProblem::covariate(data, {}, Eigen::VectorXd::Ones(1),
                                         Sense::kOptimistic, q_of(2), q_of(2),
                                         2.0, 1.0);
  CHECK(std::abs(inner_oracle(p, OracleMode::kGrid).value - 0.5) <= 1e-3);

  Rng rng(22);
  const auto big = random_dataset(rng, 5, 2);
  for (auto [a, b, g] : {std::tuple{q_of(2), q_of(2), 2.0},
                         std::tuple{kInf, q_of(1), 1.0}}) {
    const auto at_zero = covariate_optimistic_loss(Eigen::Vector2d::Zero(), big,
                                                   {}, a, b, g, 0.7);
    CHECK(at_zero.value == ols_loss(Eigen::Vector2d::Zero(), big));
    CHECK(at_zero.argument.cwiseAbs().maxCoeff() == 0.0);
    const Eigen::Vector2d theta(0.3, -1.2);
    const auto no_tau = covariate_optimistic_loss(theta, big, {}, a, b, g, 0.0);
    CHECK(no_tau.value == ols_loss(theta, big));
    CHECK(no_tau.argument.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("outcome pessimistic examples") {
  const auto a2 = outcome_pessimistic_loss(kZero1, residual_dataset({3.0, 4.0}),
                                           {}, q_of(2), 1.0, 1.0);
  CHECK(a2.exact);
  CHECK(std::abs(a2.value - 20.57107) <= 1e-5);
  const auto p = InnerProblem::outcome(residual_dataset({3.0, 4.0}), {}, kZero1,
                                       Sense::kPessimistic, q_of(2), 1.0, 1.0);
  CHECK(std::abs(inner_oracle(p, OracleMode::kGradient).value - a2.value) <=
        1e-8);

  const auto ai = outcome_pessimistic_loss(kZero1, residual_dataset({1.0, -1.0}),
                                           {}, kInf, 1.0, 0.5);
  CHECK(close(ai.value, 2.25, 1e-12));
  CHECK(ai.argument(0, 0) == 0.5);
  CHECK(ai.argument(1, 0) == -0.5);
  const auto pi = InnerProblem::outcome(residual_dataset({1.0, -1.0}), {},
                                        kZero1, Sense::kPessimistic, kInf, 1.0,
                                        0.5);
  CHECK(std::abs(inner_oracle(pi, OracleMode::kGrid).value - 2.25) <= 1e-3);

  // Zero residuals: the first basis direction.
  const auto r0 = outcome_pessimistic_loss(kZero1, residual_dataset({0.0, 0.0}),
                                           {}, q_of(2), 2.0, 4.0);
  CHECK(close(r0.value, 4.0, 1e-12));
  CHECK(r0.argument(1, 0) == 0.0);
  CHECK(r0.argument(0, 0) > 0.0);
  CHECK(std_vector_norm(r0.argument.col(0), q_of(2)) ==
        doctest::Approx(2.0));

  const auto t0 = outcome_pessimistic_loss(kZero1, residual_dataset({3.0, 4.0}),
                                           {}, q_of(2), 1.0, 0.0);
  CHECK(t0.value == 12.5);
  CHECK(t0.argument.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("covariate pessimistic examples") {
  const auto scalar = make_dataset(Eigen::MatrixXd::Ones(1, 1),
                                   Eigen::VectorXd::Zero(1));
  for (double s : {0.0, 0.25, 1.0, 3.0}) {
    const auto sol = covariate_pessimistic_loss(Eigen::VectorXd::Ones(1), scalar,
                                                {}, kInf, q_of(1), 1.0, s);
    CHECK(close(sol.value, (1 + s) * (1 + s), 1e-12));
  }

  Eigen::MatrixXd X(1, 2);
  X << 1, 0;
  const auto data = make_dataset(X, Eigen::VectorXd::Zero(1));
  const Eigen::Vector2d theta(1, 0);
  const double expected = std::pow(1.0 + 1.0 / std::sqrt(2.0), 2);
  CHECK(std::abs(penalized_absolute_loss(theta, data, 1.0, q_of(2)) - 2.914214) <=
        1e-6);
  CHECK(pessimistic_penalty_coefficient(2, 0.5) == doctest::Approx(1.0));
  const auto closed = covariate_pessimistic_loss(theta, data, {}, kInf, q_of(2),
                                                 1.0, 0.5);
  CHECK(closed.exact);
  CHECK(close(closed.value, expected, 1e-12));
  const auto p = InnerProblem::covariate(data, {}, theta, Sense::kPessimistic,
                                         kInf, q_of(2), 1.0, 0.5);
  const auto oracle = inner_oracle(p, OracleMode::kGradient);
  CHECK(std::abs(oracle.value - expected) <= 1e-8);
  CHECK(p.feasible(closed.argument));

  CHECK_THROWS_AS(covariate_pessimistic_loss(theta, data, {}, kInf, q_of(2),
                                             1.0, -0.5),
                  ConfigError);
}

TEST_CASE("closed forms agree with the oracles on random instances") {
  Rng rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const auto data = random_dataset(rng, 3, 2);
    const Eigen::VectorXd theta = random_vector(rng, 2);
    const double tau = rng.uniform(0.1, 2.0);
    for (const LossSpec& s : spec_corpus(tau)) {
      const auto sol = evaluate_loss(s, theta, data);
      if (!sol.exact) continue;
      const bool outcome =
          s.kind == LossKind::kOutcomeMin || s.kind == LossKind::kOutcomeMax;
      const Sense sense =
          s.kind == LossKind::kOutcomeMin || s.kind == LossKind::kCovariateMin
              ? Sense::kOptimistic
              : Sense::kPessimistic;
      const auto p =
          outcome ? InnerProblem::outcome(data, {}, theta, sense, s.norm.alpha,
                                          s.norm.gamma, s.norm.tau)
                  : InnerProblem::covariate(data, {}, theta, sense,
                                            s.norm.alpha, s.norm.beta,
                                            s.norm.gamma, s.norm.tau);
      const auto oracle = inner_oracle(p, OracleMode::kGradient);
      CHECK(close(oracle.value, sol.value, 1e-6));
      // The reported argument attains the value.
      CHECK(close(p.objective(sol.argument), sol.value, 1e-10));
      if (sense == Sense::kPessimistic) CHECK(p.feasible(sol.argument));
    }
  }
}

TEST_CASE("numeric paths are flagged and stay within oracle reach") {
  Rng rng(24);
  const auto data = random_dataset(rng, 3, 2);
  const Eigen::Vector2d theta(0.4, -0.9);
  const auto s = spec(LossKind::kOutcomeMin, q_of(3), q_of(2), 1.5, 0.8);
  const auto sol = evaluate_loss(s, theta, data);
  CHECK_FALSE(sol.exact);
  const auto p = InnerProblem::outcome(data, {}, theta, Sense::kOptimistic,
                                       q_of(3), 1.5, 0.8);
  CHECK(std::abs(inner_oracle(p, OracleMode::kGrid).value - sol.value) <= 1e-3);

  const auto ns = spec(LossKind::kOutcomeMin, q_of(0.5), q_of(2), 0.5, 0.8);
  CHECK_FALSE(evaluate_loss(ns, theta, data).exact);
}

TEST_CASE("degeneration at tau = 0") {
  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto data = random_dataset(rng, 5, 3);
    const Eigen::VectorXd theta = random_vector(rng, 3);
    const double ols = ols_loss(theta, data);
    for (const LossSpec& s : spec_corpus(0.0)) {
      CHECK(std::abs(evaluate_loss(s, theta, data).value - ols) <= 1e-12);
    }
    for (ModelKind kind : {ModelKind::kExp, ModelKind::kCos}) {
      const IndexModel model{kind};
      const double nl = ols_loss(theta, data, model);
      for (const LossSpec& s : spec_corpus(0.0)) {
        CHECK(std::abs(evaluate_loss(s, theta, data, model).value - nl) <=
              1e-12);
      }
    }
  }
}

TEST_CASE("ordering and monotonicity in tau") {
  Rng rng(26);
  const std::vector<double> taus = {0.0, 0.05, 0.2, 0.5, 1.0, 2.0};
  for (int trial = 0; trial < 8; ++trial) {
    const auto data = random_dataset(rng, 4, 2);
    const Eigen::VectorXd theta = random_vector(rng, 2);
    const double ols = ols_loss(theta, data);
    const std::size_t count = spec_corpus(0.0).size();
    for (std::size_t k = 0; k < count; ++k) {
      double previous = ols;
      for (double tau : taus) {
        const LossSpec s = spec_corpus(tau)[k];
        const double v = evaluate_loss(s, theta, data).value;
        const bool optimistic = s.kind == LossKind::kOutcomeMin ||
                                s.kind == LossKind::kCovariateMin;
        const double slack = 1e-9 * std::max(1.0, ols);
        if (optimistic) {
          CHECK(v <= ols + slack);
          CHECK(v <= previous + slack);
        } else {
          CHECK(v >= ols - slack);
          CHECK(v >= previous - slack);
        }
        previous = v;
      }
    }
  }
}

TEST_CASE("loss kind names") {
  for (auto kind : {LossKind::kOls, LossKind::kCovariateMin, LossKind::kOutcomeMin,
                    LossKind::kCovariateMax, LossKind::kOutcomeMax}) {
    CHECK(loss_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(loss_kind_from_string("z_min"), ConfigError);
  CHECK_THROWS_AS(outcome_optimistic_huber_threshold(0.0), ConfigError);
}
