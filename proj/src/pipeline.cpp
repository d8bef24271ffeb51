#include "sngca/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sngca {

double PipelineConfig::varrho(int L_eff, long n) const {
  return varrho_scale * std::sqrt(std::log(static_cast<double>(L_eff)) /
                                  static_cast<double>(n));
}

void PipelineConfig::validate() const {
  if (stages < 1) throw std::invalid_argument("PipelineConfig: stages must be >= 1");
  if (resample_fraction < 0.0 || resample_fraction > 1.0)
    throw std::invalid_argument("PipelineConfig: resample_fraction must be in [0, 1]");
  if (eps_solver <= 0.0)
    throw std::invalid_argument("PipelineConfig: eps_solver must be positive");
  if (alpha < 0.0) throw std::invalid_argument("PipelineConfig: alpha must be >= 0");
  if (max_iter < 1) throw std::invalid_argument("PipelineConfig: max_iter must be >= 1");
}

std::vector<Eigen::VectorXd> sample_omegas(int count, const SymMatrix& Pi,
                                           double fraction, Rng& rng) {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("sample_omegas: fraction must be in [0, 1]");
  const int d = Pi.dim();
  const int from_subspace = static_cast<int>(std::floor(fraction * count));
  Eigen::MatrixXd Pd = Pi.dense();

  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  auto draw = [&](bool project) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      Eigen::VectorXd g = rng.normal_vector(d);
      Eigen::VectorXd v = project ? (Pd * g).eval() : g;
      double n = v.norm();
      if (n > 1e-14) return (v / n).eval();
    }
    throw std::runtime_error("sample_omegas: degenerate draws (projector near zero)");
  };
  for (int i = 0; i < from_subspace; ++i) out.push_back(draw(true));
  for (int i = from_subspace; i < count; ++i) out.push_back(draw(false));
  return out;
}

namespace {

Eigen::MatrixXd omegas_matrix(const std::vector<Eigen::VectorXd>& omegas) {
  Eigen::MatrixXd m(omegas.front().size(), omegas.size());
  for (std::size_t l = 0; l < omegas.size(); ++l) m.col(l) = omegas[l];
  return m;
}

double penalty_for(const Eigen::MatrixXd& U_hat) {
  double ucol = max_col_norm(U_hat);
  return 1.01 * static_cast<double>(U_hat.cols()) * ucol * ucol + 1e-6;
}

SolveOptions solver_options(const PipelineConfig& cfg) {
  SolveOptions opts;
  opts.eps = cfg.eps_solver;
  opts.max_iter = cfg.max_iter;
  opts.check_every = cfg.check_every;
  opts.step_scale = cfg.step_scale;
  return opts;
}

}  // namespace

EstimationResult estimate_known_m(const Dataset& data, const PipelineConfig& cfg,
                                  const SymMatrix* pi_star) {
  cfg.validate();
  if (!cfg.m) throw std::invalid_argument("estimate_known_m: cfg.m required");
  if (!data.standardized)
    throw std::invalid_argument("estimate_known_m: data must be standardized");
  const int d = data.d();
  const int m = *cfg.m;
  if (m < 1 || m > d) throw std::invalid_argument("estimate_known_m: m out of range");
  const int L = cfg.effective_L(d);

  Rng rng(cfg.rng_seed);
  SymMatrix pi = SymMatrix::identity(d);
  EstimationResult result;

  for (int stage = 1; stage <= cfg.stages; ++stage) {
    auto omegas = sample_omegas(L, pi, cfg.resample_fraction, rng);
    TestFamily family(omegas_matrix(omegas), cfg.alpha);
    MomentEstimates est = estimate_moments(data, family);

    GameSpec spec(est.U_hat, est.Q, static_cast<double>(m), penalty_for(est.U_hat));
    ProxWeights weights =
        ProxWeights::defaults(static_cast<double>(m), d, L, spec.kernel_dim());
    SolveResult sol = solve(spec, weights, solver_options(cfg));

    auto [p_hat, z_tilde] = round_Z(spec, sol.z);
    pi = top_m_projector(p_hat, m);

    StageRecord rec;
    rec.stage = stage;
    rec.gap = sol.cert.gap;
    rec.converged = sol.converged;
    if (pi_star) rec.error = subspace_error(pi, *pi_star);
    result.stage_history.push_back(rec);

    result.P_hat = p_hat;
    result.gap = sol.cert.gap;
    result.converged = sol.converged;
  }

  result.Pi_hat = pi;
  result.m_hat = m;
  return result;
}

EstimationResult estimate_unknown_m(const Dataset& data, const PipelineConfig& cfg,
                                    const SymMatrix* pi_star) {
  cfg.validate();
  if (!cfg.rho) throw std::invalid_argument("estimate_unknown_m: cfg.rho required");
  if (!data.standardized)
    throw std::invalid_argument("estimate_unknown_m: data must be standardized");
  const int d = data.d();
  const int L = cfg.effective_L(d);
  const double rho2 = (*cfg.rho) * (*cfg.rho);

  Rng rng(cfg.rng_seed);
  auto omegas = sample_omegas(L, SymMatrix::identity(d), cfg.resample_fraction, rng);
  TestFamily family(omegas_matrix(omegas), cfg.alpha);
  MomentEstimates est = estimate_moments(data, family);
  const double lambda = penalty_for(est.U_hat);

  EstimationResult result;
  SymMatrix p_feasible = SymMatrix::identity(d);
  double gap_feasible = 0.0;
  bool have_feasible = false;

  // Certify one trace budget; returns feasibility and records the trial.
  auto try_budget = [&](double t) {
    TrialRecord rec;
    rec.t = t;
    if (t <= 0.0) {
      ResidualBound rb = certified_residual(est.U_hat, est.Q, SymMatrix(d), lambda,
                                            cfg.eps_solver, cfg.max_iter);
      rec.residual_bound = rb.upper;
      rec.gap = rb.upper - rb.lower;
      rec.feasible = rb.upper <= rho2 + std::clamp(rec.gap, 0.0, cfg.eps_solver);
      if (rec.feasible) {
        p_feasible = SymMatrix(d);
        gap_feasible = rec.gap;
        have_feasible = true;
      }
    } else {
      GameSpec spec(est.U_hat, est.Q, t, lambda);
      ProxWeights weights = ProxWeights::defaults(t, d, L, spec.kernel_dim());
      SolveResult sol = solve(spec, weights, solver_options(cfg));
      rec.residual_bound = sol.cert.upper;
      rec.gap = sol.cert.gap;
      rec.feasible = sol.cert.upper <= rho2 + std::clamp(sol.cert.gap, 0.0, cfg.eps_solver);
      if (rec.feasible) {
        p_feasible = sol.z.P;
        gap_feasible = sol.cert.gap;
        have_feasible = true;
      }
    }
    result.trial_history.push_back(rec);
    return rec.feasible;
  };

  const double grid = 0.25;
  double t_hat = static_cast<double>(d);
  if (try_budget(0.0)) {
    t_hat = 0.0;
  } else {
    // Bisection on the grid; lo infeasible, hi feasible (d is trivially
    // feasible: P = I gives zero residual, no solve needed).
    double lo = 0.0, hi = static_cast<double>(d);
    while (hi - lo > grid + 1e-12) {
      double mid = std::round(0.5 * (lo + hi) / grid) * grid;
      if (mid <= lo) mid = lo + grid;
      if (mid >= hi) mid = hi - grid;
      if (try_budget(mid))
        hi = mid;
      else
        lo = mid;
    }
    t_hat = hi;
  }

  if (t_hat >= static_cast<double>(d) && !have_feasible) {
    // No budget below d was certified: report the full space and flag it.
    result.rho_infeasible = true;
    result.m_hat = d;
    result.P_hat = SymMatrix::identity(d);
    result.Pi_hat = SymMatrix::identity(d);
    result.gap = 0.0;
    result.converged = true;
  } else {
    result.m_hat = static_cast<int>(std::ceil(t_hat - 1e-9));
    result.P_hat = p_feasible;
    result.gap = gap_feasible;
    result.converged = true;
    if (result.m_hat <= 0) {
      result.m_hat = 0;
      result.Pi_hat = SymMatrix(d);
    } else {
      result.Pi_hat = top_m_projector(p_feasible, result.m_hat);
    }
  }

  if (pi_star && result.Pi_hat.dim() == pi_star->dim()) {
    StageRecord rec;
    rec.stage = 1;
    rec.gap = result.gap;
    rec.converged = result.converged;
    rec.error = subspace_error(result.Pi_hat, *pi_star);
    result.stage_history.push_back(rec);
  }
  return result;
}

double subspace_error(const SymMatrix& pi_hat, const SymMatrix& pi_star) {
  if (pi_hat.dim() != pi_star.dim())
    throw std::invalid_argument("subspace_error: dimension mismatch");
  SymMatrix diff = pi_hat;
  diff -= pi_star;
  return diff.frobenius_norm();
}

}  // namespace sngca
