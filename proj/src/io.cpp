#include "sngca/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sngca {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const Eigen::MatrixXd& data,
               const std::vector<std::string>& header) {
  if (static_cast<long>(header.size()) != data.cols())
    throw std::invalid_argument("write_csv: header size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t j = 0; j < header.size(); ++j)
    out << (j ? "," : "") << header[j];
  out << '\n';
  for (long i = 0; i < data.rows(); ++i) {
    for (long j = 0; j < data.cols(); ++j)
      out << (j ? "," : "") << format_double(data(i, j));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

Eigen::MatrixXd read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file " + path);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      double v = 0.0;
      auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc())
        throw std::runtime_error("read_csv: bad number in " + path);
      row.push_back(v);
      p = res.ptr;
      if (p < end && *p == ',') ++p;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("read_csv: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("read_csv: no data rows in " + path);

  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j) m(i, j) = rows[i][j];
  return m;
}

namespace {

nlohmann::json matrix_to_json(const SymMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

SymMatrix matrix_from_json(const nlohmann::json& rows) {
  int d = static_cast<int>(rows.size());
  SymMatrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

}  // namespace

void write_dataset_sidecar(const std::string& json_path, const SyntheticSpec& spec,
                           const SymMatrix& pi_star) {
  nlohmann::json j;
  j["model"] = model_to_string(spec.model);
  j["d"] = spec.d;
  j["n"] = spec.n;
  j["seed"] = spec.seed;
  j["noise_stds"] = spec.noise_stds.empty()
                        ? std::vector<double>(spec.d - 2, 1.0)
                        : spec.noise_stds;
  j["pi_star"] = matrix_to_json(pi_star);
  std::ofstream out(json_path);
  if (!out) throw std::runtime_error("write_dataset_sidecar: cannot open " + json_path);
  out << j.dump(2) << '\n';
}

std::optional<Sidecar> read_dataset_sidecar(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  in >> j;
  Sidecar s;
  s.spec.model = model_from_string(j.at("model").get<std::string>());
  s.spec.d = j.at("d").get<int>();
  s.spec.n = j.at("n").get<long>();
  s.spec.seed = j.at("seed").get<std::uint64_t>();
  s.spec.noise_stds = j.at("noise_stds").get<std::vector<double>>();
  s.pi_star = matrix_from_json(j.at("pi_star"));
  return s;
}

}  // namespace sngca
