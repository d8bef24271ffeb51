#pragma once

#include <optional>
#include <utility>

#include "sngca/sym_matrix.hpp"

namespace sngca {

/// Weights of the per-block distance-generating functions.
struct ProxWeights {
  double beta_P = 1.0;
  double beta_W = 1.0;
  double beta_Z = 1.0;
  double beta_Y = 1.0;

  /// Balanced defaults: each block's DGF variation over its domain is about
  /// one. m is the trace budget, d the ambient dimension, L the number of
  /// test functions, kernel_dim the order of the Z block.
  static ProxWeights defaults(double m, int d, int L, int kernel_dim);

  void validate() const;
};

/// Joint primal point of the penalized game. P lives in the trace-budgeted
/// spectahedron slice {0 <= P <= I, trace P <= m}, W in the unit Frobenius
/// ball, Z in the standard spectahedron, and Y = u - v with (u, v) a point
/// of the 2 L^2 simplex (nonnegative symmetric grids, full-grid sum 1).
struct GamePoint {
  SymMatrix P;
  SymMatrix W;
  SymMatrix Z;
  SymMatrix u;
  SymMatrix v;

  // Spectral caches of P and Z; filled by the prox transforms, consumed by
  // the next entropy prox so matrix logs never need a fresh factorization.
  std::optional<EigenDecomp> P_eig;
  std::optional<EigenDecomp> Z_eig;

  SymMatrix Y() const {
    SymMatrix y = u;
    y -= v;
    return y;
  }
};

/// Dual direction with one component per game block (the Y component acts on
/// Y itself, not on the (u, v) split).
struct DualVector {
  SymMatrix P;
  SymMatrix W;
  SymMatrix Z;
  SymMatrix Y;

  DualVector& operator+=(const DualVector& o);
  DualVector& operator*=(double c);
  double norm() const;
};

/// Result of an entropy prox step: the point plus its spectral form (the
/// eigenbasis used to build it, eigenvalues descending).
struct SpectralSym {
  SymMatrix mat;
  EigenDecomp eig;
};

/// argmax over {0 <= P <= I, trace P <= m} of trace[S (P - P0)] - beta V_P(P0, P),
/// V_P the Bregman divergence of (1/m) trace[P ln(P/m)]. Solved spectrally;
/// the trace constraint's multiplier is located by bisection, with the slack
/// branch taken when the unconstrained solution already fits the budget.
SpectralSym prox_P(const SymMatrix& P0, const SymMatrix& S, double m, double beta,
                   const EigenDecomp* P0_eig = nullptr);

/// argmax over the unit Frobenius ball: W0 + S/beta, radially projected.
SymMatrix prox_W(const SymMatrix& W0, const SymMatrix& S, double beta);

/// argmax over the standard spectahedron of trace[S (Z - Z0)] - beta V_Z(Z0, Z),
/// V_Z the Bregman divergence of trace[Z ln Z]. Softmax of the eigenvalues of
/// S + beta ln Z0 when the trace constraint binds, plain exponential otherwise.
SpectralSym prox_Z(const SymMatrix& Z0, const SymMatrix& S, double beta,
                   const EigenDecomp* Z0_eig = nullptr);

/// argmax over the 2 L^2 simplex; exact exponential reweighting
/// a = u0 exp(S/beta), b = v0 exp(-S/beta), jointly normalized last.
std::pair<SymMatrix, SymMatrix> prox_Y(const SymMatrix& u0, const SymMatrix& v0,
                                       const SymMatrix& S, double beta);

/// Componentwise prox-transform T(z0, s) on all four blocks.
GamePoint prox_joint(const GamePoint& z0, const DualVector& s,
                     const ProxWeights& w, double m);

// Bregman divergences of the four DGFs (unweighted); shared by the prox
// objectives and their test oracles. Spectra are floored at 1e-14 before
// any logarithm.
double bregman_P(const SymMatrix& P0, const SymMatrix& P, double m);
double bregman_W(const SymMatrix& W0, const SymMatrix& W);
double bregman_Z(const SymMatrix& Z0, const SymMatrix& Z);
double bregman_Y(const SymMatrix& u0, const SymMatrix& v0, const SymMatrix& u,
                 const SymMatrix& v);

/// V diag(ln max(w, floor)) V^T from a spectral factorization.
Eigen::MatrixXd matrix_log(const EigenDecomp& ed, double floor = 1e-14);

}  // namespace sngca
