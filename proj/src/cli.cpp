#include "sngca/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sngca/io.hpp"
#include "sngca/pipeline.hpp"
#include "sngca/synthetic.hpp"

namespace sngca {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string dataset_basename(const SyntheticSpec& spec) {
  std::ostringstream name;
  name << "model" << model_to_string(spec.model) << "_d" << spec.d << "_n"
       << spec.n << "_seed" << spec.seed;
  return name.str();
}

std::vector<std::string> coordinate_header(int d) {
  std::vector<std::string> h(d);
  for (int j = 0; j < d; ++j) h[j] = "x" + std::to_string(j);
  return h;
}

json matrix_json(const SymMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json stage_history_json(const EstimationResult& result) {
  json arr = json::array();
  for (const StageRecord& rec : result.stage_history) {
    json r;
    r["stage"] = rec.stage;
    r["gap"] = rec.gap;
    r["converged"] = rec.converged;
    if (std::isfinite(rec.error)) r["frobenius_error"] = rec.error;
    arr.push_back(r);
  }
  return arr;
}

json trial_history_json(const EstimationResult& result) {
  json arr = json::array();
  for (const TrialRecord& rec : result.trial_history) {
    json r;
    r["t"] = rec.t;
    r["residual_bound"] = rec.residual_bound;
    r["gap"] = rec.gap;
    r["feasible"] = rec.feasible;
    arr.push_back(r);
  }
  return arr;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SNGCA_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int run_generate(const GenerateOptions& opts) {
  SyntheticSpec spec;
  spec.model = model_from_string(opts.model);
  spec.d = opts.d;
  spec.n = opts.n;
  spec.seed = opts.seed;
  if (opts.noise_r > 0.0)
    spec.noise_stds = geometric_noise_profile(opts.noise_r, opts.d - 2);
  spec.validate();

  GeneratedData data = generate(spec);

  fs::create_directories(opts.out_dir);
  std::string base = (fs::path(opts.out_dir) / dataset_basename(spec)).string();
  write_csv(base + ".csv", data.samples, coordinate_header(spec.d));
  write_dataset_sidecar(base + ".json", spec, data.pi_star);
  std::cout << base << ".csv\n" << base << ".json\n";
  return kExitOk;
}

int run_estimate(const EstimateOptions& opts) {
  if (!opts.unknown_m && !opts.m)
    throw std::invalid_argument("estimate: need either --m or --unknown-m with --rho");
  if (opts.unknown_m && !opts.rho)
    throw std::invalid_argument("estimate: --unknown-m requires --rho");

  Eigen::MatrixXd raw = read_csv(opts.input);
  Dataset data = standardize(raw);

  std::string sidecar_path = fs::path(opts.input).replace_extension(".json").string();
  std::optional<Sidecar> sidecar = read_dataset_sidecar(sidecar_path);

  PipelineConfig cfg;
  cfg.L = opts.l_per_d * data.d();
  cfg.stages = opts.stages;
  cfg.m = opts.m;
  cfg.alpha = opts.alpha;
  cfg.resample_fraction = opts.fraction;
  cfg.eps_solver = opts.eps;
  cfg.rho = opts.rho;
  cfg.rng_seed = opts.seed;
  cfg.max_iter = opts.max_iter;

  const SymMatrix* pi_star = sidecar ? &sidecar->pi_star : nullptr;
  EstimationResult result = opts.unknown_m
                                ? estimate_unknown_m(data, cfg, pi_star)
                                : estimate_known_m(data, cfg, pi_star);

  json report;
  report["version"] = kToolVersion;
  report["input"] = opts.input;
  json config;
  config["mode"] = opts.unknown_m ? "unknown-m" : "known-m";
  if (opts.m) config["m"] = *opts.m;
  if (opts.rho) config["rho"] = *opts.rho;
  config["alpha"] = cfg.alpha;
  config["stages"] = cfg.stages;
  config["L"] = cfg.effective_L(data.d());
  config["eps"] = cfg.eps_solver;
  config["fraction"] = cfg.resample_fraction;
  config["seed"] = cfg.rng_seed;
  config["max_iter"] = cfg.max_iter;
  config["varrho"] = cfg.varrho(cfg.effective_L(data.d()), data.n());
  report["config"] = config;
  report["m_hat"] = result.m_hat;
  report["gap"] = result.gap;
  report["converged"] = result.converged;
  report["rho_infeasible"] = result.rho_infeasible;
  report["p_hat"] = matrix_json(result.P_hat);
  report["pi_hat"] = matrix_json(result.Pi_hat);
  report["stage_history"] = stage_history_json(result);
  if (!result.trial_history.empty())
    report["trial_history"] = trial_history_json(result);
  if (pi_star)
    report["frobenius_error"] = subspace_error(result.Pi_hat, *pi_star);

  std::string text = report.dump(2) + "\n";
  if (opts.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opts.out);
    if (!out) throw std::runtime_error("estimate: cannot open " + opts.out);
    out << text;
  }
  return result.converged ? kExitOk : kExitNotConverged;
}

namespace {

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  double error = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  int m_hat = 0;
  double seconds = 0.0;
  bool converged = false;
  std::string status = "ok";
};

SweepRow sweep_one(const SweepOptions& opts, double value, std::uint64_t seed) {
  SweepRow row;
  row.value = value;
  row.seed = seed;
  auto t0 = std::chrono::steady_clock::now();
  try {
    SyntheticSpec spec;
    spec.model = model_from_string(opts.model);
    spec.d = opts.axis == "dimension" ? static_cast<int>(value) : opts.d;
    spec.n = opts.n;
    spec.seed = seed;
    if (opts.axis == "noise-r" && value > 0.0)
      spec.noise_stds = geometric_noise_profile(value, spec.d - 2);
    GeneratedData gen = generate(spec);
    Dataset data = standardize(gen.samples);

    PipelineConfig cfg;
    cfg.L = opts.l_per_d * spec.d;
    cfg.stages = opts.stages;
    cfg.m = opts.m;
    cfg.alpha = opts.alpha;
    cfg.resample_fraction = opts.fraction;
    cfg.eps_solver = opts.eps;
    cfg.rng_seed = seed;
    cfg.max_iter = opts.max_iter;

    EstimationResult res = estimate_known_m(data, cfg, &gen.pi_star);
    row.error = subspace_error(res.Pi_hat, gen.pi_star);
    row.gap = res.gap;
    row.m_hat = res.m_hat;
    row.converged = res.converged;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == ',' || c == '\n') c = ';';
    row.status = msg;
  }
  row.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

int run_sweep(const SweepOptions& opts) {
  if (opts.axis != "dimension" && opts.axis != "noise-r")
    throw std::invalid_argument("sweep: axis must be 'dimension' or 'noise-r'");
  if (opts.values.empty()) throw std::invalid_argument("sweep: need --values");
  if (opts.reps < 1) throw std::invalid_argument("sweep: reps must be >= 1");

  struct Task {
    double value;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double v : opts.values)
    for (int r = 0; r < opts.reps; ++r)
      tasks.push_back({v, opts.base_seed + static_cast<std::uint64_t>(r)});

  std::vector<SweepRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  int nthreads = std::min<int>(resolve_threads(opts.threads),
                               static_cast<int>(tasks.size()));
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      rows[i] = sweep_one(opts, tasks[i].value, tasks[i].seed);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  fs::create_directories(opts.out_dir);
  std::string results_path = (fs::path(opts.out_dir) / "results.csv").string();
  std::ofstream out(results_path);
  if (!out) throw std::runtime_error("sweep: cannot open " + results_path);
  out << "model,axis,value,seed,error,gap,seconds,converged,status\n";
  for (const SweepRow& r : rows) {
    out << opts.model << ',' << opts.axis << ',' << format_double(r.value) << ','
        << r.seed << ',' << format_double(r.error) << ',' << format_double(r.gap)
        << ',' << format_double(r.seconds) << ',' << (r.converged ? 1 : 0) << ','
        << r.status << '\n';
  }
  out.close();

  std::string summary_path = (fs::path(opts.out_dir) / "summary.csv").string();
  std::ofstream sum(summary_path);
  if (!sum) throw std::runtime_error("sweep: cannot open " + summary_path);
  sum << "model,axis,value,median_error\n";
  for (double v : opts.values) {
    std::vector<double> errs;
    for (const SweepRow& r : rows)
      if (r.value == v && r.status == "ok") errs.push_back(r.error);
    sum << opts.model << ',' << opts.axis << ',' << format_double(v) << ','
        << format_double(median(errs)) << '\n';
  }
  sum.close();

  json manifest;
  manifest["version"] = kToolVersion;
  manifest["command"] = "sweep";
  json config;
  config["model"] = opts.model;
  config["axis"] = opts.axis;
  config["values"] = opts.values;
  config["reps"] = opts.reps;
  config["d"] = opts.d;
  config["n"] = opts.n;
  config["m"] = opts.m;
  config["alpha"] = opts.alpha;
  config["stages"] = opts.stages;
  config["l_per_d"] = opts.l_per_d;
  config["eps"] = opts.eps;
  config["fraction"] = opts.fraction;
  config["base_seed"] = opts.base_seed;
  config["max_iter"] = opts.max_iter;
  manifest["config"] = config;
  json seeds = json::array();
  for (int r = 0; r < opts.reps; ++r)
    seeds.push_back(opts.base_seed + static_cast<std::uint64_t>(r));
  manifest["seeds"] = seeds;
  json outputs = json::array();
  for (const SweepRow& r : rows) {
    json o;
    o["value"] = r.value;
    o["seed"] = r.seed;
    if (std::isfinite(r.error)) o["error"] = r.error;
    if (std::isfinite(r.gap)) o["gap"] = r.gap;
    o["m_hat"] = r.m_hat;
    o["seconds"] = r.seconds;
    o["status"] = r.status;
    outputs.push_back(o);
  }
  manifest["outputs"] = outputs;
  std::string manifest_path = (fs::path(opts.out_dir) / "manifest.json").string();
  std::ofstream man(manifest_path);
  if (!man) throw std::runtime_error("sweep: cannot open " + manifest_path);
  man << manifest.dump(2) << '\n';

  std::cout << results_path << '\n' << summary_path << '\n' << manifest_path << '\n';
  return kExitOk;
}

}  // namespace sngca
