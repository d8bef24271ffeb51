#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sngca/rng.hpp"
#include "sngca/test_functions.hpp"

using namespace sngca;

namespace {

Eigen::MatrixXd unit_columns(int d, int L, Rng& rng) {
  Eigen::MatrixXd w(d, L);
  for (int l = 0; l < L; ++l) {
    Eigen::VectorXd g = rng.normal_vector(d);
    w.col(l) = g / g.norm();
  }
  return w;
}

}  // namespace

TEST_SUITE_BEGIN("testfuncs");

TEST_CASE("standardize is idempotent on already-standard data") {
  Rng rng(41);
  Eigen::MatrixXd raw(500, 3);
  for (long i = 0; i < raw.rows(); ++i)
    for (int j = 0; j < 3; ++j) raw(i, j) = rng.normal();
  Dataset once = standardize(raw);
  Dataset twice = standardize(once.samples);
  CHECK((once.samples - twice.samples).cwiseAbs().maxCoeff() <= 1e-10);
  for (int j = 0; j < 3; ++j) {
    double mean = once.samples.col(j).mean();
    double sd = std::sqrt((once.samples.col(j).array() - mean).square().sum() /
                          (raw.rows() - 1));
    CHECK(std::abs(mean) <= 1e-8);
    CHECK(std::abs(sd - 1.0) <= 1e-6);
  }
}

TEST_CASE("standardize centers but does not scale a constant column") {
  Eigen::MatrixXd raw(10, 2);
  for (int i = 0; i < 10; ++i) {
    raw(i, 0) = 7.5;
    raw(i, 1) = i;
  }
  Dataset out = standardize(raw);
  for (int i = 0; i < 10; ++i) CHECK(out.samples(i, 0) == doctest::Approx(0.0));
}

TEST_CASE("standardize matches the direct mean/std computation") {
  Rng rng(43);
  Eigen::MatrixXd raw(200, 2);
  for (long i = 0; i < 200; ++i) {
    raw(i, 0) = 3.0 + 2.5 * rng.normal();
    raw(i, 1) = -1.0 + 0.1 * rng.normal();
  }
  Dataset out = standardize(raw);
  for (int j = 0; j < 2; ++j) {
    double mean = raw.col(j).mean();
    double sd = std::sqrt((raw.col(j).array() - mean).square().sum() / 199.0);
    for (long i = 0; i < 200; ++i)
      CHECK(out.samples(i, j) ==
            doctest::Approx((raw(i, j) - mean) / sd).epsilon(1e-12));
  }
  CHECK_THROWS_AS(standardize(Eigen::MatrixXd::Zero(1, 2)), std::invalid_argument);
}

TEST_CASE("eval_grad at the origin returns the direction vector") {
  Rng rng(47);
  Eigen::MatrixXd omegas = unit_columns(4, 3, rng);
  TestFamily fam(omegas, 0.5);
  for (int l = 0; l < 3; ++l) {
    Eigen::VectorXd g = fam.eval_grad(l, Eigen::VectorXd::Zero(4));
    CHECK((g - omegas.col(l)).norm() <= 1e-14);
  }
}

TEST_CASE("eval_grad matches central finite differences") {
  Rng rng(53);
  Eigen::MatrixXd omegas = unit_columns(5, 4, rng);
  TestFamily fam(omegas, 0.5);
  const double h = 1e-5;
  for (int rep = 0; rep < 100; ++rep) {
    int l = rep % 4;
    Eigen::VectorXd x = rng.normal_vector(5);
    Eigen::VectorXd g = fam.eval_grad(l, x);
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      double fd = (fam.eval(l, xp) - fam.eval(l, xm)) / (2.0 * h);
      CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("undamped gradient vanishes along the direction once tanh saturates") {
  Eigen::MatrixXd omegas(3, 1);
  omegas << 1, 0, 0;
  TestFamily fam(omegas, 0.0);
  Eigen::VectorXd x(3);
  x << 30.0, 0.0, 0.0;
  Eigen::VectorXd g = fam.eval_grad(0, x);
  CHECK(std::abs(g[0]) <= 1e-12);
}

TEST_CASE("single sample at the origin gives eta = omega and gamma = 0") {
  // estimate_moments requires standardized data; build the degenerate case
  // by calling the family directly on a zero row plus the moment formulas.
  Rng rng(59);
  Eigen::MatrixXd omegas = unit_columns(3, 5, rng);
  TestFamily fam(omegas, 0.5);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  for (int l = 0; l < 5; ++l) {
    CHECK((fam.eval_grad(l, x) - omegas.col(l)).norm() <= 1e-14);
    CHECK(std::abs(fam.eval(l, x)) <= 1e-15);
  }
}

TEST_CASE("two-point symmetric sample: gamma column equals x h(x)") {
  Rng rng(61);
  Eigen::MatrixXd omegas = unit_columns(3, 4, rng);
  TestFamily fam(omegas, 0.5);
  Eigen::VectorXd x = rng.normal_vector(3);

  Dataset data;
  data.samples.resize(2, 3);
  data.samples.row(0) = x.transpose();
  data.samples.row(1) = -x.transpose();
  data.standardized = true;  // exercised directly, bypassing standardize

  MomentEstimates est = estimate_moments(data, fam);
  for (int l = 0; l < 4; ++l) {
    // h odd: h(-x) = -h(x), so the gamma average collapses to x h(x).
    Eigen::VectorXd expect = x * fam.eval(l, x);
    CHECK((est.G_hat.col(l) - expect).norm() <= 1e-14);
  }
}

TEST_CASE("estimate_moments equals the naive summation oracle bit for bit") {
  Rng rng(67);
  Eigen::MatrixXd raw(300, 4);
  for (long i = 0; i < 300; ++i)
    for (int j = 0; j < 4; ++j) raw(i, j) = rng.normal();
  Dataset data = standardize(raw);
  Eigen::MatrixXd omegas = unit_columns(4, 20, rng);
  TestFamily fam(omegas, 0.5);
  MomentEstimates est = estimate_moments(data, fam);

  // Same summation order as the implementation: sample-major per column.
  for (int l = 0; l < 20; ++l) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(4);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(4);
    for (long i = 0; i < 300; ++i) {
      Eigen::VectorXd x = data.samples.row(i).transpose();
      u += fam.eval_grad(l, x);
      g += x * fam.eval(l, x);
    }
    u /= 300.0;
    g /= 300.0;
    CHECK((est.U_hat.col(l) - u).cwiseAbs().maxCoeff() == 0.0);
    CHECK((est.G_hat.col(l) - g).cwiseAbs().maxCoeff() == 0.0);
  }

  // Moment columns of Gaussian data shrink like 1/sqrt(N).
  double max_gamma = 0.0;
  for (int l = 0; l < 20; ++l)
    max_gamma = std::max(max_gamma, est.G_hat.col(l).norm());
  CHECK(max_gamma <= 10.0 / std::sqrt(300.0));
}

TEST_CASE("gaussian moments satisfy the Stein identity at the 1/sqrt(N) rate") {
  // log-error vs log-N regression slope in [-0.65, -0.35].
  Rng data_rng(71);
  Rng omega_rng(73);
  const int d = 5, L = 20;
  Eigen::MatrixXd omegas = unit_columns(d, L, omega_rng);
  TestFamily fam(omegas, 0.5);

  std::vector<double> logn, logerr;
  for (long n : {1000L, 10000L, 100000L}) {
    Eigen::MatrixXd raw(n, d);
    for (long i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) raw(i, j) = data_rng.normal();
    Dataset data = standardize(raw);
    MomentEstimates est = estimate_moments(data, fam);
    double err = 0.0;
    for (int l = 0; l < L; ++l)
      err += (est.U_hat.col(l) - est.G_hat.col(l)).norm();
    err /= L;
    logn.push_back(std::log(static_cast<double>(n)));
    logerr.push_back(std::log(err));
  }
  double slope = testing::regression_slope(logn, logerr);
  CHECK(slope <= -0.35);
  CHECK(slope >= -0.65);
}

TEST_SUITE_END();
