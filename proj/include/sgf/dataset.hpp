#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgf/graph.hpp"

namespace sgf {

struct SwapResult {
  Graph graph;
  std::uint64_t requested = 0;
  std::uint64_t achieved = 0;
  std::uint64_t attempts = 0;
};

// Degree-preserving rewiring: picks edges (a,b),(c,d) and replaces them with
// (a,d),(c,b) when that creates no self-loop or duplicate. Stops after
// n_swaps successes or 100 * n_swaps + 1000 attempts (best effort, e.g. on
// stars); `achieved` reports how many swaps happened.
SwapResult double_edge_swap(const Graph& g, std::uint64_t n_swaps, std::uint64_t seed);

struct DatasetSplit {
  std::vector<Graph> train;
  std::vector<Graph> valid;
  std::vector<Graph> test;
  std::string source_hash;
  std::uint64_t seed = 0;
  std::uint64_t swaps = 0;
  std::size_t num_nodes = 0;

  std::size_t size() const { return train.size() + valid.size() + test.size(); }
};

// Split sizes for an 8:1:1 ratio; train takes the rounding remainder.
struct SplitSizes {
  std::size_t train, valid, test;
};
SplitSizes split_sizes(std::size_t count);

// `count` graphs from independent swap chains over the source (default
// 10 * |E| swaps each), seeded per graph so the result does not depend on
// `workers`.
DatasetSplit generate_dataset(const Graph& source, std::size_t count, std::uint64_t seed,
                              std::optional<std::uint64_t> n_swaps = std::nullopt,
                              std::size_t workers = 1);

// FNV-1a over node count and sorted edge list, as 16 hex digits.
std::string graph_hash(const Graph& g);

// Uniform random simple graph with exactly m edges (G(n, m)).
Graph random_gnm(std::size_t n, std::size_t m, std::uint64_t seed);

// Directory layout: manifest.json, source.edges, train/0000.edges, ...
// Files use the dense node indices as labels so one-hot identity survives.
void write_dataset(const DatasetSplit& split, const std::string& dir,
                   const Graph* source = nullptr);
DatasetSplit read_dataset(const std::string& dir);

}  // namespace sgf
