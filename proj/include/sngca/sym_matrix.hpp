#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace sngca {

/// Thrown when an iterative kernel (eigensolver, bisection) fails to meet
/// its tolerance; carries the offending residual for diagnostics.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Dense symmetric matrix with single (packed lower-triangle) storage, so
/// A(i,j) == A(j,i) holds exactly by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim) : dim_(dim), data_(packed_size(dim), 0.0) {
    if (dim < 1) throw std::invalid_argument("SymMatrix: dim must be >= 1");
  }

  static SymMatrix identity(int dim) {
    SymMatrix a(dim);
    for (int i = 0; i < dim; ++i) a(i, i) = 1.0;
    return a;
  }

  static SymMatrix from_diagonal(const Eigen::VectorXd& d) {
    SymMatrix a(static_cast<int>(d.size()));
    for (int i = 0; i < d.size(); ++i) a(i, i) = d[i];
    return a;
  }

  /// Builds from a dense matrix, averaging (a + a^T)/2. If sym_tol >= 0 the
  /// asymmetry |a - a^T|_max must not exceed sym_tol.
  static SymMatrix from_dense(const Eigen::MatrixXd& a, double sym_tol = -1.0);

  /// v * v^T
  static SymMatrix outer(const Eigen::VectorXd& v);

  int dim() const { return dim_; }

  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& operator()(int i, int j) { return data_[index(i, j)]; }

  Eigen::MatrixXd dense() const;

  double trace() const;
  double frobenius_norm() const;
  /// Entrywise l1 norm over the full index set (off-diagonal counted twice).
  double entrywise_l1() const;
  double max_abs() const;
  /// Sum of all entries of the full matrix.
  double sum_full() const;

  SymMatrix& operator+=(const SymMatrix& b);
  SymMatrix& operator-=(const SymMatrix& b);
  SymMatrix& operator*=(double c);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double c) { return a *= c; }
  friend SymMatrix operator*(double c, SymMatrix a) { return a *= c; }

  const std::vector<double>& packed() const { return data_; }
  std::vector<double>& packed() { return data_; }

 private:
  static std::size_t packed_size(int dim) {
    return static_cast<std::size_t>(dim) * (dim + 1) / 2;
  }
  std::size_t index(int i, int j) const {
    if (i < j) std::swap(i, j);
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }

  int dim_ = 0;
  std::vector<double> data_;
};

/// Spectral factorization A = V diag(w) V^T with w sorted descending and V
/// orthonormal columns.
struct EigenDecomp {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  Eigen::MatrixXd reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

/// Eigendecomposition of a symmetric matrix. Deterministic for fixed input:
/// eigenvalues descending, ties kept in solver order, each eigenvector's
/// largest-magnitude component made positive. Verifies the reconstruction
/// and orthonormality residuals against tol and throws SolverError if the
/// backend failed to converge.
EigenDecomp eig_sym(const SymMatrix& a, double tol = 1e-10);

/// Orthogonal projector onto the span of the m leading eigenvectors.
SymMatrix top_m_projector(const SymMatrix& a, int m);

/// Orthonormal basis Q of the numerical kernel of g (d x L, L > d wide):
/// Q is (L - r) x L with Q Q^T = I and |g Q^T| <= rank_tol * sigma_max,
/// where r is the number of singular values above rank_tol * sigma_max.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& g, double rank_tol = 1e-10);

/// sum_ij A_ij B_ij (= trace[A B] for symmetric arguments).
double trace_inner(const SymMatrix& a, const SymMatrix& b);

/// Maximal Euclidean column norm.
double max_col_norm(const Eigen::MatrixXd& a);

}  // namespace sngca
