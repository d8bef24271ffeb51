#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sngca/sym_matrix.hpp"

namespace sngca {

/// Benchmark families: two non-Gaussian coordinates plus independent
/// Gaussian noise in the remaining d - 2.
enum class Model { A, B, C, D, E };

Model model_from_string(const std::string& s);
std::string model_to_string(Model m);

struct SyntheticSpec {
  Model model = Model::A;
  int d = 10;
  long n = 1000;
  /// Per-coordinate standard deviations of the d - 2 noise coordinates;
  /// empty means all ones.
  std::vector<double> noise_stds;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Standard deviations 10^-r .. 10^r in geometric progression.
std::vector<double> geometric_noise_profile(double r, int count);

struct GeneratedData {
  Eigen::MatrixXd samples;  // n x d, raw (not standardized)
  SymMatrix pi_star;        // projector on span(e1, e2)
};

/// Draws n samples. The two leading coordinates follow the model law,
/// rescaled to unit variance (model E excepted: heavy-tailed, radius
/// truncated at 1e3, no rescale). Bit-reproducible for a fixed seed.
GeneratedData generate(const SyntheticSpec& spec);

/// diag(1, 1, 0, ..., 0); unchanged by per-coordinate standardization.
SymMatrix oracle_projector(int d);

}  // namespace sngca
