#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "doctest.h"

#include "bridgereg/errors.hpp"
#include "bridgereg/rng.hpp"
#include "bridgereg/synth.hpp"

using namespace bridgereg;

namespace {

TrueModel default_truth() {
  TrueModel m;
  m.theta_star = Eigen::Vector3d(0.0, 1.5, 2.0 / 3.0);
  return m;
}

bool identical(const Dataset& a, const Dataset& b) {
  return a.X.rows() == b.X.rows() && a.X.cols() == b.X.cols() &&
         a.y.size() == b.y.size() && (a.X.array() == b.X.array()).all() &&
         (a.y.array() == b.y.array()).all();
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("bridgereg_test_synth_" + name);
}

}  // namespace

TEST_CASE("rng is reproducible and seeds differ") {
  Rng a(42), b(42), c(43);
  for (int k = 0; k < 100; ++k) {
    const double u = a.uniform01();
    CHECK(u == b.uniform01());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a.normal() != c.normal());
  CHECK(derive_seed(1, streams::kDataset, 0) !=
        derive_seed(1, streams::kDataset, 1));
  CHECK(derive_seed(1, streams::kDataset, 0) !=
        derive_seed(1, streams::kImpediment, 0));
  CHECK(derive_seed(1, streams::kDataset, 0) ==
        derive_seed(1, streams::kDataset, 0));
}

TEST_CASE("rng moments") {
  Rng rng(7);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  std::set<std::uint64_t> seen;
  for (int k = 0; k < 1000; ++k) {
    const auto v = rng.below(5);
    CHECK(v < 5);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("noiseless linear data is exact") {
  const auto truth = default_truth();
  const auto data = generate_dataset(truth, 40, 3, 0.0, 5);
  CHECK(data.n() == 40);
  CHECK(data.d() == 3);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    CHECK(data.y[i] == data.X.row(i).dot(truth.theta_star));
  }
  CHECK(data.X.minCoeff() >= -1.0);
  CHECK(data.X.maxCoeff() <= 1.0);
}

TEST_CASE("generation is deterministic in its seed") {
  const auto truth = default_truth();
  const auto a = generate_dataset(truth, 50, 3, 1.0, 99);
  const auto b = generate_dataset(truth, 50, 3, 1.0, 99);
  const auto c = generate_dataset(truth, 50, 3, 1.0, 100);
  CHECK(identical(a, b));
  CHECK_FALSE(identical(a, c));
}

TEST_CASE("covariate second moment is a third of the identity") {
  const auto data = generate_dataset(default_truth(), 100000, 3, 1.0, 3);
  const Eigen::MatrixXd moment =
      data.X.transpose() * data.X / static_cast<double>(data.n());
  const Eigen::MatrixXd target = Eigen::MatrixXd::Identity(3, 3) / 3.0;
  CHECK((moment - target).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("misspecified truths") {
  TrueModel m = default_truth();
  const auto base = generate_dataset(m, 30, 3, 0.0, 8);
  for (auto kind : {ModelKind::kExp, ModelKind::kCos, ModelKind::kQuadMinusOne}) {
    m.kind = kind;
    const auto data = generate_dataset(m, 30, 3, 0.0, 8);
    CHECK((data.X.array() == base.X.array()).all());
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const double t = base.y[i];
      const double expected = kind == ModelKind::kExp   ? std::exp(t)
                              : kind == ModelKind::kCos ? std::cos(t)
                                                        : t * t - 1.0;
      CHECK(data.y[i] == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  CHECK(model_kind_from_string("quad_minus_one") == ModelKind::kQuadMinusOne);
  CHECK_THROWS_AS(model_kind_from_string("cubic"), ConfigError);
}

TEST_CASE("generation argument errors") {
  const auto truth = default_truth();
  CHECK_THROWS_AS(generate_dataset(truth, 10, 2, 1.0, 1), DimensionError);
  CHECK_THROWS_AS(generate_dataset(truth, 0, 3, 1.0, 1), DimensionError);
  CHECK_THROWS_AS(generate_dataset(truth, 10, 3, -1.0, 1), ConfigError);
}

TEST_CASE("impediment none is an exact copy") {
  const auto data = generate_dataset(default_truth(), 20, 3, 1.0, 1);
  CHECK(identical(apply_impediment(data, Impediment{}, 77), data));
}

TEST_CASE("outcome outliers") {
  const auto data = generate_dataset(default_truth(), 100, 3, 1.0, 2);
  Impediment imp;
  imp.kind = ImpedimentKind::kOutcomeOutliers;
  const auto out = apply_impediment(data, imp, 11);
  CHECK((out.X.array() == data.X.array()).all());
  int changed = 0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    if (out.y[i] != data.y[i]) {
      ++changed;
      CHECK(out.y[i] - data.y[i] == doctest::Approx(10.0).epsilon(1e-14));
    }
  }
  CHECK(changed == 5);
  CHECK(imp.outlier_count(50) == 2);
  CHECK(imp.outlier_count(25) == 1);
  CHECK(imp.outlier_count(100) == 5);
  imp.outlier_frac = 1.5;
  CHECK_THROWS_AS(imp.outlier_count(10), ConfigError);
  CHECK_THROWS_AS(apply_impediment(data, imp, 1), ConfigError);

  imp.outlier_frac = 0.05;
  const auto again = apply_impediment(data, imp, 11);
  CHECK(identical(again, out));
  bool any_differs = false;
  for (std::uint64_t s : {12u, 13u, 14u, 15u}) {
    any_differs = any_differs || !identical(apply_impediment(data, imp, s), out);
  }
  CHECK(any_differs);
}

TEST_CASE("covariate noise") {
  const auto data = generate_dataset(default_truth(), 100000, 3, 1.0, 4);
  Impediment imp;
  imp.kind = ImpedimentKind::kCovariateNoise;
  const auto out = apply_impediment(data, imp, 21);
  CHECK(out.n() == data.n());
  CHECK(out.d() == data.d());
  CHECK((out.y.array() == data.y.array()).all());
  const Eigen::ArrayXXd diff = (out.X - data.X).array();
  const double mean = diff.mean();
  const double var = (diff - mean).square().mean();
  CHECK(std::abs(var - 0.25) < 0.02 * 0.25);
  CHECK_FALSE(identical(apply_impediment(data, imp, 22), out));
}

TEST_CASE("impediment names") {
  CHECK(impediment_kind_from_string("covariate_noise") ==
        ImpedimentKind::kCovariateNoise);
  CHECK(to_string(ImpedimentKind::kOutcomeOutliers) == "outcome_outliers");
  CHECK_THROWS_AS(impediment_kind_from_string("bogus"), ConfigError);
}

TEST_CASE("dataset csv round trip") {
  const auto data = generate_dataset(default_truth(), 17, 3, 1.0, 6);
  const auto path = scratch("roundtrip.csv");
  write_dataset_csv(data, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x1,x2,x3,y");
  CHECK(identical(read_dataset_csv(path), data));
  std::filesystem::remove(path);
}

TEST_CASE("dataset csv errors") {
  CHECK_THROWS_AS(read_dataset_csv(scratch("missing.csv")), IoError);
  const auto path = scratch("ragged.csv");
  {
    std::ofstream out(path);
    out << "x1,y\n1,2\n3\n";
  }
  CHECK_THROWS_AS(read_dataset_csv(path), IoError);
  std::filesystem::remove(path);

  Dataset bad;
  bad.X = Eigen::MatrixXd::Zero(3, 2);
  bad.y = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(bad.validate(), DimensionError);
}
