#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "darboux/flow.hpp"
#include "json.hpp"

namespace darboux {

// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }

 private:
  size_t width_;
  std::string out_;
};

// Columns s, t, u, v, alpha, x, y, z, then one per monitor.
std::string trajectory_csv(const Trajectory& tr);
nlohmann::json trajectory_summary(const Trajectory& tr);

// 64-bit FNV-1a of the canonical (sorted-key, compact) JSON dump.
std::uint64_t config_hash(const nlohmann::json& config);
std::string hex(std::uint64_t x);

// Run metadata: tool version, config hash, seed, tolerances.
nlohmann::json run_metadata(const nlohmann::json& config, std::uint64_t seed, double rel_tol, double abs_tol);

void write_file(const std::string& path, const std::string& content);

}  // namespace darboux
