#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sngca {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;

struct GenerateOptions {
  std::string model = "A";
  int d = 10;
  long n = 1000;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  /// Geometric noise profile exponent; 0 keeps unit noise.
  double noise_r = 0.0;
};

struct EstimateOptions {
  std::string input;
  std::optional<int> m;
  bool unknown_m = false;
  std::optional<double> rho;
  double alpha = 0.5;
  int stages = 3;
  int l_per_d = 10;
  double eps = 1e-4;
  double fraction = 0.5;
  std::uint64_t seed = 0;
  long max_iter = 4000;
  /// Report destination; empty writes to stdout.
  std::string out;
};

struct SweepOptions {
  std::string model = "A";
  std::string axis = "dimension";  // or "noise-r"
  std::vector<double> values;
  int reps = 5;
  int d = 10;  // fixed dimension for the noise-r axis
  long n = 1000;
  int m = 2;
  double alpha = 0.5;
  int stages = 3;
  int l_per_d = 10;
  double eps = 1e-4;
  double fraction = 0.5;
  std::uint64_t base_seed = 1;
  long max_iter = 4000;
  int threads = 0;  // 0: SNGCA_THREADS env var, then hardware count
  std::string out_dir = ".";
};

int run_generate(const GenerateOptions& opts);
int run_estimate(const EstimateOptions& opts);
int run_sweep(const SweepOptions& opts);

}  // namespace sngca
