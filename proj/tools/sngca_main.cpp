#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sngca/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Non-Gaussian subspace estimation via a semidefinite-relaxed "
               "matrix game"};
  app.require_subcommand(1);

  sngca::GenerateOptions gen;
  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic dataset");
  generate->add_option("--model", gen.model, "Model A..E")->required();
  generate->add_option("--d", gen.d, "Ambient dimension")->required();
  generate->add_option("--n", gen.n, "Sample count")->required();
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--out", gen.out_dir, "Output directory");
  generate->add_option("--noise-r", gen.noise_r,
                       "Geometric noise profile 10^-r..10^r for the d-2 "
                       "Gaussian coordinates");

  sngca::EstimateOptions est;
  CLI::App* estimate =
      app.add_subcommand("estimate", "Estimate the non-Gaussian subspace");
  estimate->add_option("input", est.input, "Input CSV (rows = samples)")
      ->required();
  int est_m = -1;
  estimate->add_option("--m", est_m, "Known target dimension");
  estimate->add_flag("--unknown-m", est.unknown_m, "Estimate the dimension");
  double est_rho = -1.0;
  estimate->add_option("--rho", est_rho, "Residual radius for --unknown-m");
  estimate->add_option("--alpha", est.alpha, "Test-function damping");
  estimate->add_option("--stages", est.stages, "Adaptation stages");
  estimate->add_option("--l-per-d", est.l_per_d, "Test functions per dimension");
  estimate->add_option("--eps", est.eps, "Solver gap target");
  estimate->add_option("--fraction", est.fraction,
                       "Share of directions resampled from the estimate");
  estimate->add_option("--seed", est.seed, "Pipeline RNG seed");
  estimate->add_option("--max-iter", est.max_iter, "Solver iteration cap");
  estimate->add_option("--out", est.out, "Report path (default stdout)");

  sngca::SweepOptions sweep;
  CLI::App* sw = app.add_subcommand("sweep", "Benchmark sweep over an axis");
  sw->add_option("--model", sweep.model, "Model A..E")->required();
  sw->add_option("--axis", sweep.axis, "dimension or noise-r")->required();
  sw->add_option("--values", sweep.values, "Axis values")->required();
  sw->add_option("--reps", sweep.reps, "Repetitions per value");
  sw->add_option("--d", sweep.d, "Dimension (noise-r axis)");
  sw->add_option("--n", sweep.n, "Sample count");
  sw->add_option("--m", sweep.m, "Target dimension");
  sw->add_option("--alpha", sweep.alpha, "Test-function damping");
  sw->add_option("--stages", sweep.stages, "Adaptation stages");
  sw->add_option("--l-per-d", sweep.l_per_d, "Test functions per dimension");
  sw->add_option("--eps", sweep.eps, "Solver gap target");
  sw->add_option("--fraction", sweep.fraction, "Resample fraction");
  sw->add_option("--seed", sweep.base_seed, "Base seed (seeds are seed..seed+reps-1)");
  sw->add_option("--max-iter", sweep.max_iter, "Solver iteration cap");
  sw->add_option("--threads", sweep.threads,
                 "Worker threads (default: SNGCA_THREADS, then hardware)");
  sw->add_option("--out", sweep.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return sngca::kExitUsage;
  }

  try {
    if (generate->parsed()) return sngca::run_generate(gen);
    if (estimate->parsed()) {
      if (est_m >= 0) est.m = est_m;
      if (est_rho >= 0.0) est.rho = est_rho;
      return sngca::run_estimate(est);
    }
    if (sw->parsed()) return sngca::run_sweep(sweep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sngca::kExitUsage;
  }
  return sngca::kExitUsage;
}
