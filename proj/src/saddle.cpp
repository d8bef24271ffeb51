#include "sngca/saddle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sngca/rng.hpp"

namespace sngca {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_seconds(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

SymMatrix uniform_grid(int L, double value) {
  SymMatrix g(L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j <= i; ++j) g(i, j) = value;
  return g;
}

EigenDecomp scaled_identity_eig(int n, double value) {
  EigenDecomp ed;
  ed.eigenvalues = Eigen::VectorXd::Constant(n, value);
  ed.eigenvectors = Eigen::MatrixXd::Identity(n, n);
  return ed;
}

void average_block(SymMatrix& avg, const SymMatrix& x, double k) {
  SymMatrix delta = x;
  delta -= avg;
  delta *= 1.0 / k;
  avg += delta;
}

// avg <- avg + (x - avg)/k; k is the 1-based count including x.
void average_into(GamePoint& avg, const GamePoint& x, long k) {
  if (k == 1) {
    avg = x;
    avg.P_eig.reset();
    avg.Z_eig.reset();
    return;
  }
  double kk = static_cast<double>(k);
  average_block(avg.P, x.P, kk);
  average_block(avg.W, x.W, kk);
  average_block(avg.Z, x.Z, kk);
  average_block(avg.u, x.u, kk);
  average_block(avg.v, x.v, kk);
}

double frobenius_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return std::sqrt(a.squaredNorm() + b.squaredNorm());
}

}  // namespace

GameSpec::GameSpec(Eigen::MatrixXd U_hat, Eigen::MatrixXd Q, double trace_budget,
                   double lambda_pen)
    : U_hat_(std::move(U_hat)), Q_(std::move(Q)), m_(trace_budget),
      lambda_(lambda_pen) {
  if (U_hat_.rows() < 1 || U_hat_.cols() < 1)
    throw std::invalid_argument("GameSpec: empty moment matrix");
  if (Q_.cols() != U_hat_.cols() || Q_.rows() < 1)
    throw std::invalid_argument("GameSpec: kernel basis shape mismatch");
  if (m_ <= 0.0 || m_ > static_cast<double>(d()))
    throw std::invalid_argument("GameSpec: trace budget must lie in (0, d]");
  double ucol = max_col_norm(U_hat_);
  if (!(lambda_ > static_cast<double>(L()) * ucol * ucol))
    throw std::invalid_argument("GameSpec: penalty must exceed L |U|_2^2");
  double qorth = (Q_ * Q_.transpose() -
                  Eigen::MatrixXd::Identity(Q_.rows(), Q_.rows()))
                     .cwiseAbs()
                     .maxCoeff();
  if (qorth > 1e-8)
    throw std::invalid_argument("GameSpec: kernel basis rows not orthonormal");
  gram_ = U_hat_.transpose() * U_hat_;
}

Eigen::MatrixXd GameSpec::y_coefficient(const SymMatrix& P) const {
  return gram_ - U_hat_.transpose() * (P.dense() * U_hat_);
}

DualVector field_F(const GameSpec& spec, const GamePoint& z) {
  const Eigen::MatrixXd& U = spec.U_hat();
  const Eigen::MatrixXd& Q = spec.Q();
  const double lam = spec.lambda_pen();

  Eigen::MatrixXd Y = z.Y().dense();
  Eigen::MatrixXd UY = U * Y;

  DualVector f;
  f.P = SymMatrix::from_dense(UY * U.transpose());
  Eigen::MatrixXd QtZQ = Q.transpose() * (z.Z.dense() * Q);
  f.W = SymMatrix::from_dense(-lam * (QtZQ - Y));
  Eigen::MatrixXd QWQt = Q * (z.W.dense() * Q.transpose());
  f.Z = SymMatrix::from_dense(lam * QWQt);
  f.Y = SymMatrix::from_dense(spec.y_coefficient(z.P) - lam * z.W.dense());
  return f;
}

double game_value(const GameSpec& spec, const GamePoint& z) {
  const Eigen::MatrixXd& Q = spec.Q();
  Eigen::MatrixXd Y = z.Y().dense();
  Eigen::MatrixXd QtZQ = Q.transpose() * (z.Z.dense() * Q);
  double main = (spec.y_coefficient(z.P).cwiseProduct(Y)).sum();
  double pen = (z.W.dense().cwiseProduct(QtZQ - Y)).sum();
  return main + spec.lambda_pen() * pen;
}

double spectral_budget_max(const SymMatrix& M, double budget) {
  EigenDecomp ed = eig_sym(M);
  double remaining = budget;
  double total = 0.0;
  for (int i = 0; i < ed.eigenvalues.size() && remaining > 0.0; ++i) {
    if (ed.eigenvalues[i] <= 0.0) break;
    double take = std::min(remaining, 1.0);
    total += take * ed.eigenvalues[i];
    remaining -= take;
  }
  return total;
}

GapCertificate gap_oracle(const GameSpec& spec, const GamePoint& z) {
  const Eigen::MatrixXd& U = spec.U_hat();
  const Eigen::MatrixXd& Q = spec.Q();
  const double lam = spec.lambda_pen();

  Eigen::MatrixXd Y = z.Y().dense();

  // Upper: best response of (Z, Y) against (P, W).
  Eigen::MatrixXd CY = spec.y_coefficient(z.P) - lam * z.W.dense();
  Eigen::MatrixXd QWQt = Q * (z.W.dense() * Q.transpose());
  EigenDecomp wz = eig_sym(SymMatrix::from_dense(QWQt));
  double upper = CY.cwiseAbs().maxCoeff() +
                 lam * std::max(0.0, wz.eigenvalues[0]);

  // Lower: best response of (P, W) against (Z, Y).
  Eigen::MatrixXd QtZQ = Q.transpose() * (z.Z.dense() * Q);
  Eigen::MatrixXd MP = (U * Y) * U.transpose();
  double lower = (spec.gram().cwiseProduct(Y)).sum() -
                 spectral_budget_max(SymMatrix::from_dense(MP), spec.trace_budget()) -
                 lam * (QtZQ - Y).norm();

  GapCertificate cert;
  cert.upper = upper;
  cert.lower = lower;
  cert.gap = upper - lower;
  return cert;
}

GamePoint prox_center(const GameSpec& spec) {
  const int d = spec.d();
  const int L = spec.L();
  const int nz = spec.kernel_dim();
  const double m = spec.trace_budget();

  GamePoint c;
  c.P = SymMatrix::identity(d);
  c.P *= m / static_cast<double>(d);
  c.P_eig = scaled_identity_eig(d, m / static_cast<double>(d));
  c.W = SymMatrix(L);
  c.Z = SymMatrix::identity(nz);
  c.Z *= 1.0 / static_cast<double>(nz);
  c.Z_eig = scaled_identity_eig(nz, 1.0 / static_cast<double>(nz));
  double uni = 1.0 / (2.0 * static_cast<double>(L) * L);
  c.u = uniform_grid(L, uni);
  c.v = uniform_grid(L, uni);
  return c;
}

namespace {

// Largest singular value of the bilinear coupling, by power iteration on the
// (Z, Y) side. Fixed internal seed keeps solve() seedless-deterministic.
double estimate_field_norm(const GameSpec& spec, int iters = 20) {
  const Eigen::MatrixXd& U = spec.U_hat();
  const Eigen::MatrixXd& Q = spec.Q();
  const double lam = spec.lambda_pen();
  const int L = spec.L();
  const int nz = spec.kernel_dim();

  Rng rng(0x5eedULL);
  Eigen::MatrixXd Z(nz, nz), Y(L, L);
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j <= i; ++j) Z(i, j) = Z(j, i) = rng.normal();
  for (int i = 0; i < L; ++i)
    for (int j = 0; j <= i; ++j) Y(i, j) = Y(j, i) = rng.normal();
  double n0 = frobenius_pair(Z, Y);
  Z /= n0;
  Y /= n0;

  double sigma2 = 0.0;
  for (int it = 0; it < iters; ++it) {
    // x = B y
    Eigen::MatrixXd Pd = -(U * Y) * U.transpose();
    Eigen::MatrixXd Wd = lam * (Q.transpose() * (Z * Q) - Y);
    // y = B^T x
    Eigen::MatrixXd Zn = lam * (Q * (Wd * Q.transpose()));
    Eigen::MatrixXd Yn = -(U.transpose() * (Pd * U)) - lam * Wd;
    sigma2 = frobenius_pair(Zn, Yn);
    if (sigma2 <= 0.0) break;
    Z = Zn / sigma2;
    Y = Yn / sigma2;
  }
  return std::sqrt(std::max(sigma2, 1e-30));
}

}  // namespace

SolveResult solve(const GameSpec& spec, const ProxWeights& weights,
                  const SolveOptions& opts) {
  weights.validate();
  const double m = spec.trace_budget();

  GamePoint center = prox_center(spec);
  DualVector s;
  s.P = SymMatrix(spec.d());
  s.W = SymMatrix(spec.L());
  s.Z = SymMatrix(spec.kernel_dim());
  s.Y = SymMatrix(spec.L());

  double field_norm = estimate_field_norm(spec);
  double alpha_V = std::min({weights.beta_P / m, weights.beta_W, weights.beta_Z,
                             0.5 * weights.beta_Y});
  double scale = opts.step_scale > 0.0 ? opts.step_scale : 1.0;
  double step = scale * alpha_V / (2.0 * std::max(field_norm, 1e-30));

  SolveResult out;
  out.step = step;

  GamePoint z_avg;
  GamePoint best;
  GapCertificate best_cert;
  bool have_best = false;
  auto t0 = clock_type::now();

  for (long k = 1; k <= opts.max_iter; ++k) {
    GamePoint z = prox_joint(center, s, weights, m);
    DualVector f = field_F(spec, z);
    f *= step;
    GamePoint z_plus = prox_joint(z, f, weights, m);
    DualVector f_plus = field_F(spec, z_plus);
    f_plus *= step;
    s += f_plus;
    average_into(z_avg, z_plus, k);

    if (k % opts.check_every == 0 || k == opts.max_iter) {
      GapCertificate cert = gap_oracle(spec, z_avg);
      out.gap_history.emplace_back(k, cert.gap);
      if (opts.progress) opts.progress(k, cert.gap, elapsed_seconds(t0));
      if (!have_best || cert.gap < best_cert.gap) {
        best = z_avg;
        best_cert = cert;
        have_best = true;
      }
      if (cert.gap <= opts.eps) {
        out.z = z_avg;
        out.cert = cert;
        out.iterations = k;
        out.converged = true;
        return out;
      }
    }
  }

  out.z = have_best ? best : z_avg;
  out.cert = gap_oracle(spec, out.z);
  out.iterations = opts.max_iter;
  out.converged = false;
  return out;
}

std::pair<SymMatrix, SymMatrix> round_Z(const GameSpec& spec, const GamePoint& z) {
  Eigen::MatrixXd QtZQ = spec.Q().transpose() * (z.Z.dense() * spec.Q());
  double l1 = QtZQ.cwiseAbs().sum();
  SymMatrix z_tilde = z.Z;
  if (l1 > 1.0) z_tilde *= 1.0 / l1;
  return {z.P, z_tilde};
}

double constrained_lower(const GameSpec& spec, const SymMatrix& Z_tilde) {
  const Eigen::MatrixXd& U = spec.U_hat();
  Eigen::MatrixXd X = spec.Q().transpose() * (Z_tilde.dense() * spec.Q());
  Eigen::MatrixXd MP = (U * X) * U.transpose();
  return (spec.gram().cwiseProduct(X)).sum() -
         spectral_budget_max(SymMatrix::from_dense(MP), spec.trace_budget());
}

ResidualBound certified_residual(const Eigen::MatrixXd& U_hat,
                                 const Eigen::MatrixXd& Q, const SymMatrix& P,
                                 double lambda_pen, double eps, long max_iter) {
  const int L = static_cast<int>(U_hat.cols());
  const int nz = static_cast<int>(Q.rows());
  const double lam = lambda_pen;

  Eigen::MatrixXd C =
      U_hat.transpose() * ((Eigen::MatrixXd::Identity(P.dim(), P.dim()) -
                            P.dense()) *
                           U_hat);
  C = (0.5 * (C + C.transpose())).eval();

  double beta_W = 1.0;
  double beta_Z = 1.0 / std::max(std::log(static_cast<double>(nz)), 0.1);
  double beta_Y = 1.0 / std::log(2.0 * static_cast<double>(L) * L);

  // The coupling is W against (Z, Y): <W, lam (Q^T Z Q - Y)>.
  Rng rng(0x5eedULL);
  Eigen::MatrixXd Z(nz, nz), Y(L, L);
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j <= i; ++j) Z(i, j) = Z(j, i) = rng.normal();
  for (int i = 0; i < L; ++i)
    for (int j = 0; j <= i; ++j) Y(i, j) = Y(j, i) = rng.normal();
  double n0 = frobenius_pair(Z, Y);
  Z /= n0;
  Y /= n0;
  double sigma = 0.0;
  for (int it = 0; it < 20; ++it) {
    Eigen::MatrixXd Wd = lam * (Q.transpose() * (Z * Q) - Y);
    Eigen::MatrixXd Zn = lam * (Q * (Wd * Q.transpose()));
    Eigen::MatrixXd Yn = -lam * Wd;
    sigma = frobenius_pair(Zn, Yn);
    if (sigma <= 0.0) break;
    Z = Zn / sigma;
    Y = Yn / sigma;
  }
  double field_norm = std::sqrt(std::max(sigma, 1e-30));
  double alpha_V = std::min({beta_W, beta_Z, 0.5 * beta_Y});
  double step = alpha_V / (2.0 * std::max(field_norm, 1e-30));

  // Center and zero dual.
  SymMatrix W0(L);
  SymMatrix Z0 = SymMatrix::identity(nz);
  Z0 *= 1.0 / nz;
  EigenDecomp Z0_eig = scaled_identity_eig(nz, 1.0 / nz);
  double uni = 1.0 / (2.0 * static_cast<double>(L) * L);
  SymMatrix u0 = uniform_grid(L, uni), v0 = uniform_grid(L, uni);

  SymMatrix sW(L), sZ(nz), sY(L);
  SymMatrix W_avg(L), Z_avg(nz), u_avg(L), v_avg(L);

  ResidualBound out;
  out.upper = std::numeric_limits<double>::infinity();
  out.lower = -std::numeric_limits<double>::infinity();

  auto field3 = [&](const SymMatrix& W, const SymMatrix& Z, const SymMatrix& u,
                    const SymMatrix& v, SymMatrix& fW, SymMatrix& fZ,
                    SymMatrix& fY) {
    Eigen::MatrixXd Yd = (u.dense() - v.dense()).eval();
    Eigen::MatrixXd QtZQ = Q.transpose() * (Z.dense() * Q);
    fW = SymMatrix::from_dense(-lam * (QtZQ - Yd));
    fZ = SymMatrix::from_dense(lam * (Q * (W.dense() * Q.transpose())));
    fY = SymMatrix::from_dense(C - lam * W.dense());
  };

  const int check_every = 25;
  for (long k = 1; k <= max_iter; ++k) {
    SymMatrix W1 = prox_W(W0, sW, beta_W);
    SpectralSym Z1 = prox_Z(Z0, sZ, beta_Z, &Z0_eig);
    auto [u1, v1] = prox_Y(u0, v0, sY, beta_Y);

    SymMatrix fW(L), fZ(nz), fY(L);
    field3(W1, Z1.mat, u1, v1, fW, fZ, fY);
    fW *= step;
    fZ *= step;
    fY *= step;
    SymMatrix W1p = prox_W(W1, fW, beta_W);
    SpectralSym Z1p = prox_Z(Z1.mat, fZ, beta_Z, &Z1.eig);
    auto [u1p, v1p] = prox_Y(u1, v1, fY, beta_Y);

    field3(W1p, Z1p.mat, u1p, v1p, fW, fZ, fY);
    fW *= step;
    fZ *= step;
    fY *= step;
    sW += fW;
    sZ += fZ;
    sY += fY;

    if (k == 1) {
      W_avg = W1p;
      Z_avg = Z1p.mat;
      u_avg = u1p;
      v_avg = v1p;
    } else {
      double kk = static_cast<double>(k);
      average_block(W_avg, W1p, kk);
      average_block(Z_avg, Z1p.mat, kk);
      average_block(u_avg, u1p, kk);
      average_block(v_avg, v1p, kk);
    }

    if (k % check_every == 0 || k == max_iter) {
      Eigen::MatrixXd Wd = W_avg.dense();
      Eigen::MatrixXd QWQt = Q * (Wd * Q.transpose());
      EigenDecomp wz = eig_sym(SymMatrix::from_dense(QWQt));
      double up = (C - lam * Wd).cwiseAbs().maxCoeff() +
                  lam * std::max(0.0, wz.eigenvalues[0]);
      Eigen::MatrixXd Yd = (u_avg.dense() - v_avg.dense()).eval();
      Eigen::MatrixXd QtZQ = Q.transpose() * (Z_avg.dense() * Q);
      double lo = (C.cwiseProduct(Yd)).sum() - lam * (QtZQ - Yd).norm();
      out.upper = std::min(out.upper, up);
      out.lower = std::max(out.lower, lo);
      out.iterations = k;
      if (out.upper - out.lower <= eps) {
        out.converged = true;
        return out;
      }
    }
  }
  return out;
}

}  // namespace sngca
