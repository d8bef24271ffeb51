#include "sngca/sym_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace sngca {

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& a, double sym_tol) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("SymMatrix::from_dense: matrix must be square");
  if (sym_tol >= 0.0) {
    double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > sym_tol)
      throw std::invalid_argument("SymMatrix::from_dense: asymmetry " +
                                  std::to_string(asym) + " exceeds tolerance");
  }
  SymMatrix s(static_cast<int>(a.rows()));
  for (int i = 0; i < s.dim_; ++i)
    for (int j = 0; j <= i; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

SymMatrix SymMatrix::outer(const Eigen::VectorXd& v) {
  SymMatrix s(static_cast<int>(v.size()));
  for (int i = 0; i < s.dim_; ++i)
    for (int j = 0; j <= i; ++j) s(i, j) = v[i] * v[j];
  return s;
}

Eigen::MatrixXd SymMatrix::dense() const {
  Eigen::MatrixXd a(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = (*this)(i, j);
  return a;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j <= i; ++j) {
      double w = (i == j) ? 1.0 : 2.0;
      s += w * (*this)(i, j) * (*this)(i, j);
    }
  return std::sqrt(s);
}

double SymMatrix::entrywise_l1() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j <= i; ++j) s += ((i == j) ? 1.0 : 2.0) * std::abs((*this)(i, j));
  return s;
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double SymMatrix::sum_full() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j <= i; ++j) s += ((i == j) ? 1.0 : 2.0) * (*this)(i, j);
  return s;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& b) {
  if (dim_ != b.dim_) throw std::invalid_argument("SymMatrix: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += b.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& b) {
  if (dim_ != b.dim_) throw std::invalid_argument("SymMatrix: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= b.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double c) {
  for (double& x : data_) x *= c;
  return *this;
}

EigenDecomp eig_sym(const SymMatrix& a, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("eig_sym: tol must be positive");
  Eigen::MatrixXd dense = a.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success)
    throw SolverError("eig_sym: eigensolver did not converge",
                      std::numeric_limits<double>::quiet_NaN());

  const int n = a.dim();
  EigenDecomp out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  // Solver returns ascending order; flip to descending.
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = solver.eigenvalues()[n - 1 - k];
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  // Sign convention: largest-magnitude component positive.
  for (int k = 0; k < n; ++k) {
    int imax = 0;
    out.eigenvectors.col(k).cwiseAbs().maxCoeff(&imax);
    if (out.eigenvectors(imax, k) < 0.0) out.eigenvectors.col(k) *= -1.0;
  }

  double scale = std::max(1e-30, dense.norm());
  double rec = (out.reconstruct() - dense).norm() / scale;
  double orth = (out.eigenvectors.transpose() * out.eigenvectors -
                 Eigen::MatrixXd::Identity(n, n))
                    .norm();
  if (rec > tol || orth > tol)
    throw SolverError("eig_sym: residual exceeds tolerance", std::max(rec, orth));
  return out;
}

SymMatrix top_m_projector(const SymMatrix& a, int m) {
  if (m < 1 || m > a.dim())
    throw std::invalid_argument("top_m_projector: m out of range");
  EigenDecomp ed = eig_sym(a);
  Eigen::MatrixXd v = ed.eigenvectors.leftCols(m);
  return SymMatrix::from_dense(v * v.transpose());
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& g, double rank_tol) {
  const int d = static_cast<int>(g.rows());
  const int L = static_cast<int>(g.cols());
  if (L <= d) throw std::invalid_argument("kernel_basis: need more columns than rows");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > rank_tol * smax) ++rank;

  // Trailing right singular vectors span the numerical kernel.
  Eigen::MatrixXd q = svd.matrixV().rightCols(L - rank).transpose();
  // Deterministic sign: largest-magnitude entry of each row positive.
  for (int i = 0; i < q.rows(); ++i) {
    int jmax = 0;
    q.row(i).cwiseAbs().maxCoeff(&jmax);
    if (q(i, jmax) < 0.0) q.row(i) *= -1.0;
  }
  return q;
}

double trace_inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_inner: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j <= i; ++j) s += ((i == j) ? 1.0 : 2.0) * a(i, j) * b(i, j);
  return s;
}

double max_col_norm(const Eigen::MatrixXd& a) {
  double m = 0.0;
  for (int j = 0; j < a.cols(); ++j) m = std::max(m, a.col(j).norm());
  return m;
}

}  // namespace sngca
