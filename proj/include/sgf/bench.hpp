#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgf/distribution.hpp"
#include "sgf/gnns.hpp"
#include "sgf/graph.hpp"

namespace sgf {

struct BenchConfig {
  std::vector<std::string> methods{"naive", "mhrw", "gnns"};
  std::string dataset = "dataset";
  // GNNS draws M; per-size draws for naive; per-size recorded steps for mhrw.
  std::uint64_t samples = 1024;
  std::optional<std::uint64_t> burn_in;
  std::uint64_t seed = 0;
  std::string checkpoint;  // required when gnns is requested
  // Baselines get the GNNS kept count of the same graph, half per size
  // (naive: accepted sets, mhrw: recorded steps). Requires gnns first.
  bool match_kept = false;
  gnns::EstimateOptions gnns;
  std::size_t workers = 1;  // graphs evaluated concurrently
};

struct BenchRow {
  std::string method;
  std::string dataset;
  double mse_mean = 0.0;
  double mse_std = 0.0;
  double wall_time_s = 0.0;  // summed over graphs
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t graphs = 0;
};

struct BenchGraphResult {
  std::size_t graph = 0;
  std::string method;
  double mse = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t kept = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchGraphResult> per_graph;
  // Mean frequency per code over the graph set, by method ("exact" included).
  std::map<std::string, std::map<CanonicalCode, double>> mean_frequencies;
  nlohmann::json environment;
  std::vector<std::string> warnings;  // e.g. MSE of two empty distributions
};

// Exact oracle once per graph, then every method in order on that graph.
// Throws ConfigError for unknown methods, or for gnns without params or a
// checkpoint path. `params`, when given, takes precedence over the path.
BenchReport run_benchmark(std::span<const Graph> graphs, const BenchConfig& config,
                          const gnns::GnnsParams* params = nullptr);

nlohmann::json to_json(const BenchReport& report, bool include_timing = true);
std::string to_csv(const BenchReport& report);
// method,code,alias,k,mean_freq rows for external bar charts.
std::string histogram_csv(const BenchReport& report);

}  // namespace sgf
