#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "emfnet/config.hpp"
#include "emfnet/errors.hpp"
#include "emfnet/harness.hpp"

namespace emfnet {

inline constexpr const char* kResultsCsvHeader =
    "architecture,sweep_name,sweep_value,metric,mean,std,p05,p95,n_iters";

// Numbers are serialized with 9 significant digits; parsing one of these
// strings and re-serializing reproduces it, so CSV round-trips are stable.
inline std::string format_sig9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::string results_csv_string(const ResultTable& table) {
  std::ostringstream out;
  out << kResultsCsvHeader << '\n';
  for (const ResultRow& r : table) {
    out << r.architecture << ',' << r.sweep_name << ',' << format_sig9(r.sweep_value) << ','
        << r.metric << ',' << format_sig9(r.mean) << ',' << format_sig9(r.stddev) << ','
        << format_sig9(r.p05) << ',' << format_sig9(r.p95) << ',' << r.n_iters << '\n';
  }
  return out.str();
}

inline void write_results_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write results file: " + path);
  out << results_csv_string(table);
}

inline ResultTable parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw io_error("results CSV is empty");
  if (line != kResultsCsvHeader) throw io_error("results CSV has an unexpected header: " + line);

  ResultTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw io_error("results CSV row has " + std::to_string(cells.size()) +
                                          " cells: " + line);
    ResultRow r;
    r.architecture = cells[0];
    r.sweep_name = cells[1];
    r.sweep_value = std::strtod(cells[2].c_str(), nullptr);
    r.metric = cells[3];
    r.mean = std::strtod(cells[4].c_str(), nullptr);
    r.stddev = std::strtod(cells[5].c_str(), nullptr);
    r.p05 = std::strtod(cells[6].c_str(), nullptr);
    r.p95 = std::strtod(cells[7].c_str(), nullptr);
    r.n_iters = std::atoi(cells[8].c_str());
    table.push_back(std::move(r));
  }
  return table;
}

inline ResultTable read_results_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open results file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_results_csv(buf.str());
}

inline constexpr const char* kCodeVersion = "0.1.0";

// Metadata sidecar: the full config echo plus run provenance. No timestamps,
// so repeated runs with one master seed are byte-identical.
inline json make_sidecar(const Config& cfg, std::uint64_t master_seed, int n_iters,
                         Objective objective, const PowerPolicy& policy) {
  json j;
  j["config"] = to_json(cfg);
  j["master_seed"] = master_seed;
  j["n_iters"] = n_iters;
  j["objective"] = objective == Objective::MinExposure ? "emf" : "rate";
  j["power_mode"] = policy.mode == PowerMode::PrimalRateTarget ? "primal_rate_target" : "dual_sar_cap";
  j["sar_limit"] = policy.sar_limit;
  j["sar_dl_placeholder"] = !cfg.sar_dl_user_set;
  j["code_version"] = kCodeVersion;
  return j;
}

inline void write_sidecar(const json& meta, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write sidecar file: " + path);
  out << meta.dump(2) << '\n';
}

}  // namespace emfnet
