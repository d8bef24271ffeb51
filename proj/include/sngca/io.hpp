#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sngca/synthetic.hpp"

namespace sngca {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

void write_csv(const std::string& path, const Eigen::MatrixXd& data,
               const std::vector<std::string>& header);

/// Reads a CSV with a mandatory header row.
Eigen::MatrixXd read_csv(const std::string& path);

/// JSON sidecar carrying the generating spec and the oracle projector.
void write_dataset_sidecar(const std::string& json_path, const SyntheticSpec& spec,
                           const SymMatrix& pi_star);

struct Sidecar {
  SyntheticSpec spec;
  SymMatrix pi_star;
};

std::optional<Sidecar> read_dataset_sidecar(const std::string& json_path);

}  // namespace sngca
