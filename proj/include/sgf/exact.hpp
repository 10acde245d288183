#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>

#include "sgf/distribution.hpp"
#include "sgf/graph.hpp"
#include "sgf/graphlet_types.hpp"

namespace sgf {

using CodeCounts = std::map<CanonicalCode, std::uint64_t>;

// ESU: calls visit(nodes) once for every connected k-node induced subgraph
// whose smallest node lies in [root_begin, root_end). `nodes` lists the set in
// discovery order (root first).
void esu_enumerate(const Graph& g, int k, NodeId root_begin, NodeId root_end,
                   const std::function<void(std::span<const NodeId>)>& visit);

// Exact per-type counts of connected k-node induced subgraphs, 3 <= k <= 5.
// Roots are split across `workers` threads; results do not depend on it.
CodeCounts enumerate_connected(const Graph& g, int k, std::size_t workers = 1);

// Combined 4- and 5-node exact distribution with one shared denominator.
// meta.empty is set when the graph has no connected 4-node subgraph.
FrequencyDistribution exact_distribution(const Graph& g, std::size_t workers = 1);

inline constexpr std::size_t kBruteForceMaxNodes = 20;

// Test oracle: scans all C(n,k) node subsets. Throws ArgumentError for
// graphs above kBruteForceMaxNodes.
FrequencyDistribution brute_force_distribution(const Graph& g, int k);

}  // namespace sgf
