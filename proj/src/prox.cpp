#include "sngca/prox.hpp"

#include <algorithm>
#include <cmath>

namespace sngca {

namespace {

constexpr double kSpectrumFloor = 1e-14;
constexpr double kGridFloor = 1e-300;

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// Entropy trace[P ln(P/m)] evaluated from a spectrum.
double spectral_entropy(const Eigen::VectorXd& w, double m) {
  double s = 0.0;
  for (int i = 0; i < w.size(); ++i) {
    double x = std::max(w[i], kSpectrumFloor);
    s += x * std::log(x / m);
  }
  return s;
}

}  // namespace

ProxWeights ProxWeights::defaults(double m, int d, int L, int kernel_dim) {
  ProxWeights w;
  w.beta_P = m / std::max(std::log(static_cast<double>(d)), 0.1);
  w.beta_W = 1.0;
  w.beta_Z = 1.0 / std::max(std::log(static_cast<double>(kernel_dim)), 0.1);
  w.beta_Y = 1.0 / std::log(2.0 * static_cast<double>(L) * L);
  return w;
}

void ProxWeights::validate() const {
  if (beta_P <= 0 || beta_W <= 0 || beta_Z <= 0 || beta_Y <= 0)
    throw std::invalid_argument("ProxWeights: all weights must be positive");
}

DualVector& DualVector::operator+=(const DualVector& o) {
  P += o.P;
  W += o.W;
  Z += o.Z;
  Y += o.Y;
  return *this;
}

DualVector& DualVector::operator*=(double c) {
  P *= c;
  W *= c;
  Z *= c;
  Y *= c;
  return *this;
}

double DualVector::norm() const {
  double p = P.frobenius_norm(), w = W.frobenius_norm();
  double z = Z.frobenius_norm(), y = Y.frobenius_norm();
  return std::sqrt(p * p + w * w + z * z + y * y);
}

Eigen::MatrixXd matrix_log(const EigenDecomp& ed, double floor) {
  Eigen::VectorXd lw(ed.eigenvalues.size());
  for (int i = 0; i < lw.size(); ++i)
    lw[i] = std::log(std::max(ed.eigenvalues[i], floor));
  return ed.eigenvectors * lw.asDiagonal() * ed.eigenvectors.transpose();
}

SpectralSym prox_P(const SymMatrix& P0, const SymMatrix& S, double m, double beta,
                   const EigenDecomp* P0_eig) {
  if (beta <= 0.0) throw std::invalid_argument("prox_P: beta must be positive");
  if (m <= 0.0) throw std::invalid_argument("prox_P: trace budget must be positive");
  const int d = P0.dim();

  EigenDecomp ed0;
  if (!P0_eig) ed0 = eig_sym(P0);
  const EigenDecomp& e0 = P0_eig ? *P0_eig : ed0;

  // Complete the linear term: the Bregman divergence of (1/m) tr[P ln(P/m)]
  // contributes (beta/m)(ln(P0/m) + I) to the matrix whose eigenbasis
  // diagonalizes the solution.
  Eigen::VectorXd lw(d);
  for (int i = 0; i < d; ++i)
    lw[i] = std::log(std::max(e0.eigenvalues[i], kSpectrumFloor) / m) + 1.0;
  Eigen::MatrixXd mat =
      S.dense() + (beta / m) * (e0.eigenvectors * lw.asDiagonal() *
                                e0.eigenvectors.transpose());
  EigenDecomp em = eig_sym(SymMatrix::from_dense(mat));
  const Eigen::VectorXd& lam = em.eigenvalues;

  // Vector problem: max lam'p - (beta/m) sum p ln(p/m) over [0,1]^d, sum <= m.
  // KKT: p_i(mu) = exp(min(0, (m/beta)(lam_i - mu) - 1 + ln m)).
  const double c = m / beta;
  auto p_of = [&](double mu, Eigen::VectorXd& p) {
    double sum = 0.0;
    for (int i = 0; i < d; ++i) {
      p[i] = std::exp(std::min(0.0, c * (lam[i] - mu) - 1.0 + std::log(m)));
      sum += p[i];
    }
    return sum;
  };

  Eigen::VectorXd p(d);
  double sum0 = p_of(0.0, p);
  if (sum0 > m) {
    // Budget binds: bisect the multiplier. Bracket by doubling upward.
    double lo = 0.0;
    double hi = std::max(1.0, lam.maxCoeff() + (beta / m) * (std::log(d) + 1.0));
    int expansions = 0;
    while (p_of(hi, p) > m) {
      hi *= 2.0;
      if (++expansions > 200)
        throw SolverError("prox_P: trace bisection not bracketed", p.sum() - m);
    }
    double sum = 0.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      sum = p_of(mid, p);
      if (std::abs(sum - m) <= 1e-10) break;
      (sum > m ? lo : hi) = mid;
    }
    if (std::abs(sum - m) > 1e-10) p_of(0.5 * (lo + hi), p);
  }

  SpectralSym out;
  out.eig.eigenvalues = p;  // descending because lam is descending
  out.eig.eigenvectors = em.eigenvectors;
  out.mat = SymMatrix::from_dense(em.eigenvectors * p.asDiagonal() *
                                  em.eigenvectors.transpose());
  return out;
}

SymMatrix prox_W(const SymMatrix& W0, const SymMatrix& S, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("prox_W: beta must be positive");
  SymMatrix out = W0;
  SymMatrix step = S;
  step *= 1.0 / beta;
  out += step;
  double n = out.frobenius_norm();
  if (n > 1.0) out *= 1.0 / n;
  return out;
}

SpectralSym prox_Z(const SymMatrix& Z0, const SymMatrix& S, double beta,
                   const EigenDecomp* Z0_eig) {
  if (beta <= 0.0) throw std::invalid_argument("prox_Z: beta must be positive");
  const int n = Z0.dim();

  EigenDecomp ed0;
  if (!Z0_eig) ed0 = eig_sym(Z0);
  const EigenDecomp& e0 = Z0_eig ? *Z0_eig : ed0;

  Eigen::MatrixXd mat = S.dense() + beta * matrix_log(e0, kSpectrumFloor);
  EigenDecomp em = eig_sym(SymMatrix::from_dense(mat));

  // z_i = exp((lam_i - mu)/beta); softmax when the trace constraint binds,
  // plain exponential otherwise. Max-shifted for overflow safety.
  Eigen::VectorXd w = em.eigenvalues / beta;
  double wmax = w.maxCoeff();
  double sumexp = 0.0;
  for (int i = 0; i < n; ++i) sumexp += std::exp(w[i] - wmax);
  double lse = wmax + std::log(sumexp);

  Eigen::VectorXd z(n);
  double shift = (lse > 0.0) ? lse : 0.0;
  for (int i = 0; i < n; ++i)
    z[i] = std::max(std::exp(w[i] - shift), kGridFloor);

  SpectralSym out;
  out.eig.eigenvalues = z;
  out.eig.eigenvectors = em.eigenvectors;
  out.mat = SymMatrix::from_dense(em.eigenvectors * z.asDiagonal() *
                                  em.eigenvectors.transpose());
  return out;
}

std::pair<SymMatrix, SymMatrix> prox_Y(const SymMatrix& u0, const SymMatrix& v0,
                                       const SymMatrix& S, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("prox_Y: beta must be positive");
  const int L = u0.dim();
  if (v0.dim() != L || S.dim() != L)
    throw std::invalid_argument("prox_Y: dimension mismatch");

  double shift = S.max_abs() / beta;
  SymMatrix a(L), b(L);
  double denom = 0.0;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j <= i; ++j) {
      double e = S(i, j) / beta;
      a(i, j) = std::max(std::max(u0(i, j), kGridFloor) * std::exp(e - shift),
                         kGridFloor);
      b(i, j) = std::max(std::max(v0(i, j), kGridFloor) * std::exp(-e - shift),
                         kGridFloor);
      denom += ((i == j) ? 1.0 : 2.0) * (a(i, j) + b(i, j));
    }
  for (int i = 0; i < L; ++i)
    for (int j = 0; j <= i; ++j) {
      a(i, j) /= denom;
      b(i, j) /= denom;
    }
  return {a, b};
}

GamePoint prox_joint(const GamePoint& z0, const DualVector& s, const ProxWeights& w,
                     double m) {
  w.validate();
  GamePoint out;
  SpectralSym p = prox_P(z0.P, s.P, m, w.beta_P,
                         z0.P_eig ? &*z0.P_eig : nullptr);
  out.P = std::move(p.mat);
  out.P_eig = std::move(p.eig);
  out.W = prox_W(z0.W, s.W, w.beta_W);
  SpectralSym z = prox_Z(z0.Z, s.Z, w.beta_Z,
                         z0.Z_eig ? &*z0.Z_eig : nullptr);
  out.Z = std::move(z.mat);
  out.Z_eig = std::move(z.eig);
  std::tie(out.u, out.v) = prox_Y(z0.u, z0.v, s.Y, w.beta_Y);
  return out;
}

double bregman_P(const SymMatrix& P0, const SymMatrix& P, double m) {
  EigenDecomp e0 = eig_sym(P0);
  EigenDecomp e = eig_sym(P);
  double cross = (P.dense() * matrix_log(e0)).trace();
  double ent = spectral_entropy(e.eigenvalues, m);
  // tr[P ln(P0/m)] = tr[P ln P0] - ln(m) tr P
  double lnm = std::log(m);
  return (ent - (cross - lnm * P.trace()) - P.trace() + P0.trace()) / m;
}

double bregman_W(const SymMatrix& W0, const SymMatrix& W) {
  SymMatrix diff = W;
  diff -= W0;
  double n = diff.frobenius_norm();
  return 0.5 * n * n;
}

double bregman_Z(const SymMatrix& Z0, const SymMatrix& Z) {
  EigenDecomp e0 = eig_sym(Z0);
  EigenDecomp e = eig_sym(Z);
  double cross = (Z.dense() * matrix_log(e0)).trace();
  double ent = spectral_entropy(e.eigenvalues, 1.0);
  return ent - cross - Z.trace() + Z0.trace();
}

double bregman_Y(const SymMatrix& u0, const SymMatrix& v0, const SymMatrix& u,
                 const SymMatrix& v) {
  const int L = u.dim();
  double s = 0.0;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j <= i; ++j) {
      double wgt = (i == j) ? 1.0 : 2.0;
      double uu = std::max(u(i, j), kGridFloor);
      double vv = std::max(v(i, j), kGridFloor);
      s += wgt * (uu * std::log(uu / std::max(u0(i, j), kGridFloor)) +
                  vv * std::log(vv / std::max(v0(i, j), kGridFloor)));
      s -= wgt * (uu + vv - u0(i, j) - v0(i, j));
    }
  return s;
}

}  // namespace sngca
