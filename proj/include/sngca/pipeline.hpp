#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "sngca/rng.hpp"
#include "sngca/saddle.hpp"
#include "sngca/sym_matrix.hpp"
#include "sngca/test_functions.hpp"

namespace sngca {

struct PipelineConfig {
  /// Number of test functions; 0 means 10 * d.
  int L = 0;
  int stages = 3;
  /// Target-space dimension when known a priori.
  std::optional<int> m;
  double alpha = 0.5;
  /// Share of test directions drawn from the current subspace estimate.
  double resample_fraction = 0.5;
  double eps_solver = 1e-4;
  /// Residual radius for the unknown-dimension mode.
  std::optional<double> rho;
  /// Inequality-constraint radius of the relaxed program. The solver works
  /// with the kernel-basis (equality) reduction, so this only enters reports;
  /// the plug-in default is varrho_scale * sqrt(log L / N).
  double varrho_scale = 1.0;
  std::uint64_t rng_seed = 0;
  long max_iter = 4000;
  int check_every = 25;
  double step_scale = 1.0;

  int effective_L(int d) const { return L > 0 ? L : 10 * d; }
  double varrho(int L_eff, long n) const;
  void validate() const;
};

struct StageRecord {
  int stage = 0;
  double gap = 0.0;
  bool converged = false;
  /// Frobenius distance to the oracle projector; NaN when no oracle given.
  double error = std::numeric_limits<double>::quiet_NaN();
};

struct TrialRecord {
  double t = 0.0;
  double residual_bound = 0.0;
  double gap = 0.0;
  bool feasible = false;
};

struct EstimationResult {
  SymMatrix P_hat;
  SymMatrix Pi_hat;
  int m_hat = 0;
  double gap = 0.0;
  bool converged = false;
  /// Set when no trace budget below d certifies the residual constraint
  /// (rho too small); m_hat is then d.
  bool rho_infeasible = false;
  std::vector<StageRecord> stage_history;
  std::vector<TrialRecord> trial_history;
};

/// Unit directions: floor(fraction * count) drawn as normalized Pi * g with
/// g standard normal, the rest isotropic. Degenerate draws are retried, at
/// most 100 times each.
std::vector<Eigen::VectorXd> sample_omegas(int count, const SymMatrix& Pi,
                                           double fraction, Rng& rng);

/// Multi-stage estimation with known target dimension cfg.m: per stage,
/// resample directions from the current estimate, recompute moments, solve
/// the penalized game, round, and take the top-m projector. pi_star, when
/// given, only feeds the per-stage error diagnostics.
EstimationResult estimate_known_m(const Dataset& data, const PipelineConfig& cfg,
                                  const SymMatrix* pi_star = nullptr);

/// Unknown dimension: bisects the trace budget t over a 0.25-grid of [0, d],
/// certifying for each trial whether the inner residual stays within rho^2
/// (plus certificate slack); returns the smallest feasible grid point, with
/// m_hat the smallest integer above it.
EstimationResult estimate_unknown_m(const Dataset& data, const PipelineConfig& cfg,
                                    const SymMatrix* pi_star = nullptr);

/// Frobenius distance between projectors.
double subspace_error(const SymMatrix& pi_hat, const SymMatrix& pi_star);

}  // namespace sngca
