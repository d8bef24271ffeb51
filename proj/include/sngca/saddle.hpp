#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "sngca/prox.hpp"
#include "sngca/sym_matrix.hpp"

namespace sngca {

/// Data of the penalized bilinear game
///   F(P, W; Z, Y) = trace[U^T (I - P) U Y] + lambda trace[W (Q^T Z Q - Y)]
/// minimized over (P, W) and maximized over (Z, Y). The penalty multiplier
/// must exceed L |U|_2^2 (max column norm squared), which makes the rounding
/// of Proposition-style guarantees exact.
class GameSpec {
 public:
  GameSpec(Eigen::MatrixXd U_hat, Eigen::MatrixXd Q, double trace_budget,
           double lambda_pen);

  int d() const { return static_cast<int>(U_hat_.rows()); }
  int L() const { return static_cast<int>(U_hat_.cols()); }
  int kernel_dim() const { return static_cast<int>(Q_.rows()); }
  double trace_budget() const { return m_; }
  double lambda_pen() const { return lambda_; }
  const Eigen::MatrixXd& U_hat() const { return U_hat_; }
  const Eigen::MatrixXd& Q() const { return Q_; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  /// trace[U^T (I - P) U] coefficient matrix of Y, as a dense L x L matrix.
  Eigen::MatrixXd y_coefficient(const SymMatrix& P) const;

 private:
  Eigen::MatrixXd U_hat_;  // d x L
  Eigen::MatrixXd Q_;      // (L - r) x L, orthonormal rows
  Eigen::MatrixXd gram_;   // U^T U
  double m_;
  double lambda_;
};

/// Computable optimality certificate: upper = max over (Z, Y) at the point's
/// (P, W); lower = min over (P, W) at the point's (Z, Y).
struct GapCertificate {
  double upper = 0.0;
  double lower = 0.0;
  double gap = 0.0;
};

/// Descent-ascent field of the game: the returned directions are arranged so
/// that a prox step along them descends in (P, W) and ascends in (Z, Y),
/// i.e. (-dF/dP, -dF/dW, +dF/dZ, +dF/dY).
DualVector field_F(const GameSpec& spec, const GamePoint& z);

/// Exact value F(P, W; Z, Y).
double game_value(const GameSpec& spec, const GamePoint& z);

/// Closed-form inner optimizations: max over the l1 ball picks the largest
/// entry, max over the spectahedron is the positive part of the top
/// eigenvalue, min over the P slice loads the trace budget on the leading
/// positive eigenvalues, min over the Frobenius ball is minus the norm.
GapCertificate gap_oracle(const GameSpec& spec, const GamePoint& z);

/// DGF minimizers: P = (m/d) I, W = 0, Z = I/(L-r), (u, v) uniform.
GamePoint prox_center(const GameSpec& spec);

struct SolveOptions {
  double eps = 1e-4;
  long max_iter = 20000;
  int check_every = 25;
  /// Multiplies the automatic stepsize alpha_V / (2 L_F); 0 keeps 1.
  double step_scale = 1.0;
  /// Called at every gap check with (iteration, gap, elapsed seconds).
  std::function<void(long, double, double)> progress;
};

struct SolveResult {
  GamePoint z;
  GapCertificate cert;
  long iterations = 0;
  bool converged = false;
  double step = 0.0;
  std::vector<std::pair<long, double>> gap_history;
};

/// Iterate state of the dual-extrapolation scheme; exposed for tests.
struct SaddleState {
  GamePoint z;       // T(center, s)
  GamePoint z_plus;  // T(z, step * F(z))
  DualVector s;      // accumulated field
  GamePoint z_avg;   // running average of the z_plus iterates
  long k = 0;
  double step = 0.0;
};

/// Dual-extrapolation solve to certified gap <= eps; on hitting max_iter the
/// best averaged iterate seen at a gap check is returned, flagged
/// non-converged. Deterministic for fixed inputs.
SolveResult solve(const GameSpec& spec, const ProxWeights& weights,
                  const SolveOptions& opts = {});

/// Rounds a feasible point of the penalized game to the constrained game:
/// P_hat is taken as-is and Z is rescaled by |Q^T Z Q|_1 when that exceeds 1.
std::pair<SymMatrix, SymMatrix> round_Z(const GameSpec& spec, const GamePoint& z);

/// Constrained-game lower bound min over P of trace[U^T (I - P) U Q^T Z Q],
/// in closed form.
double constrained_lower(const GameSpec& spec, const SymMatrix& Z_tilde);

/// max over {0 <= P <= I, trace P <= budget} of <P, M>: fractional knapsack
/// over the positive eigenvalues.
double spectral_budget_max(const SymMatrix& M, double budget);

struct ResidualBound {
  double upper = 0.0;  // certified upper bound on the constrained inner max
  double lower = 0.0;
  bool converged = false;
  long iterations = 0;
};

/// Certified bound on max { trace[U^T (I - P) U X] : X >= 0, |X|_1 <= 1,
/// G X = 0 } for a FIXED P, via the penalized (W; Z, Y) game. Every reported
/// upper value is a valid bound regardless of convergence.
ResidualBound certified_residual(const Eigen::MatrixXd& U_hat,
                                 const Eigen::MatrixXd& Q, const SymMatrix& P,
                                 double lambda_pen, double eps, long max_iter);

}  // namespace sngca
