#include "darboux/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "darboux/surface.hpp"

namespace darboux {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double x : values) cells.push_back(format_double(x));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("csv row width does not match the header");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
}

std::string trajectory_csv(const Trajectory& tr) {
  std::vector<std::string> header{"s", "t", "u", "v", "alpha", "x", "y", "z"};
  header.insert(header.end(), tr.monitor_names.begin(), tr.monitor_names.end());
  CsvWriter w(header);
  for (const auto& sm : tr.samples) {
    std::vector<double> r{sm.s, sm.t, sm.state.u, sm.state.v, sm.alpha_lift,
                          sm.position.x(), sm.position.y(), sm.position.z()};
    r.insert(r.end(), sm.monitors.begin(), sm.monitors.end());
    w.row(r);
  }
  return w.str();
}

nlohmann::json trajectory_summary(const Trajectory& tr) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : tr.events)
    events.push_back({{"name", e.name}, {"s", e.s}, {"u", e.state.u}, {"v", e.state.v}, {"alpha", e.state.alpha}});
  return {{"kind", tr.kind},
          {"termination", to_string(tr.reason)},
          {"arc_length", tr.arc_length()},
          {"samples", tr.samples.size()},
          {"accepted_steps", tr.accepted},
          {"rejected_steps", tr.rejected},
          {"events", std::move(events)}};
}

std::uint64_t config_hash(const nlohmann::json& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t x) {
  char buf[17];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, 16);
  return std::string(16 - (r.ptr - buf), '0') + std::string(buf, r.ptr);
}

nlohmann::json run_metadata(const nlohmann::json& config, std::uint64_t seed, double rel_tol, double abs_tol) {
  return {{"tool", "darboux"},
          {"version", "0.1.0"},
          {"config_hash", hex(config_hash(config))},
          {"seed", seed},
          {"rel_tol", rel_tol},
          {"abs_tol", abs_tol}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace darboux
