#include "sngca/test_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace sngca {

Dataset standardize(const Eigen::MatrixXd& raw) {
  const long n = raw.rows();
  const int d = static_cast<int>(raw.cols());
  if (n < 2) throw std::invalid_argument("standardize: need at least 2 samples");

  Dataset out;
  out.samples.resize(n, d);
  for (int j = 0; j < d; ++j) {
    double mean = raw.col(j).mean();
    Eigen::VectorXd centered = raw.col(j).array() - mean;
    double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n - 1));
    out.samples.col(j) = (sd > 0.0) ? (centered / sd).eval() : centered;
  }
  out.standardized = true;
  return out;
}

TestFamily::TestFamily(Eigen::MatrixXd omegas, double alpha)
    : omegas_(std::move(omegas)), alpha_(alpha) {
  if (alpha_ <= 0.0 && alpha_ != 0.0)
    throw std::invalid_argument("TestFamily: alpha must be >= 0");
  if (omegas_.cols() < 1) throw std::invalid_argument("TestFamily: need L >= 1");
  for (int l = 0; l < omegas_.cols(); ++l) {
    if (std::abs(omegas_.col(l).norm() - 1.0) > 1e-12)
      throw std::invalid_argument("TestFamily: omegas must be unit vectors");
  }
}

double TestFamily::eval(int l, const Eigen::VectorXd& x) const {
  double t = std::tanh(omegas_.col(l).dot(x));
  return t * std::exp(-0.5 * alpha_ * x.squaredNorm());
}

Eigen::VectorXd TestFamily::eval_grad(int l, const Eigen::VectorXd& x) const {
  double t = std::tanh(omegas_.col(l).dot(x));
  double damp = std::exp(-0.5 * alpha_ * x.squaredNorm());
  return damp * ((1.0 - t * t) * omegas_.col(l) - (alpha_ * t) * x);
}

MomentEstimates estimate_moments(const Dataset& data, const TestFamily& family,
                                 double kernel_rank_tol) {
  if (!data.standardized)
    throw std::invalid_argument("estimate_moments: data must be standardized");
  if (data.d() != family.dim())
    throw std::invalid_argument("estimate_moments: dimension mismatch");

  const long n = data.n();
  const int d = data.d();
  const int L = family.size();

  MomentEstimates est;
  est.U_hat = Eigen::MatrixXd::Zero(d, L);
  est.G_hat = Eigen::MatrixXd::Zero(d, L);
  est.sample_size = n;

  for (int l = 0; l < L; ++l) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    for (long i = 0; i < n; ++i) {
      Eigen::VectorXd x = data.samples.row(i).transpose();
      u += family.eval_grad(l, x);
      g += x * family.eval(l, x);
    }
    est.U_hat.col(l) = u / static_cast<double>(n);
    est.G_hat.col(l) = g / static_cast<double>(n);
  }
  est.Q = kernel_basis(est.G_hat, kernel_rank_tol);
  return est;
}

}  // namespace sngca
