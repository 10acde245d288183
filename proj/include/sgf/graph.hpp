#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sgf {

using NodeId = std::uint32_t;

// Sorted list of distinct node indices.
using NodeSet = std::vector<NodeId>;

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected simple graph on nodes 0..n-1. Immutable once built: every
// "mutation" (rewiring, induced subgraphs) constructs a new Graph, so values
// are safe to share read-only across threads.
class Graph {
 public:
  Graph() = default;

  // Self-loops and duplicate edges (in either orientation) are dropped.
  // Throws ArgumentError when an endpoint is >= num_nodes.
  Graph(std::size_t num_nodes, std::span<const std::pair<NodeId, NodeId>> edges);
  Graph(std::size_t num_nodes, std::span<const Edge> edges);

  std::size_t num_nodes() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  // Edges with u < v, sorted.
  const std::vector<Edge>& edges() const { return edges_; }

  // Sorted neighbor list.
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

  bool has_edge(NodeId u, NodeId v) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.num_nodes() == b.num_nodes() && a.edges_ == b.edges_;
  }

 private:
  void build(std::size_t num_nodes, std::vector<Edge> edges);

  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<Edge> edges_;
  // Dense adjacency bit matrix for graphs up to kDenseLimit nodes.
  std::vector<std::uint64_t> bits_;
  std::size_t words_per_row_ = 0;

  static constexpr std::size_t kDenseLimit = 16384;
};

struct ParsedGraph {
  Graph graph;
  // labels[i] is the file label of dense node i.
  std::vector<std::string> labels;
};

struct EdgeListOptions {
  // Treat labels as non-negative integers and use them directly as indices.
  bool numeric_ids = false;
  // With numeric_ids: node count (ids must be below it). Defaults to max id + 1.
  std::optional<std::size_t> num_nodes;
};

// One edge per line, two whitespace-separated labels. '#' lines and blank
// lines are skipped. Labels map to dense indices in first-appearance order.
ParsedGraph parse_edge_list(std::istream& in, const EdgeListOptions& options = {});
ParsedGraph parse_edge_list(const std::string& text, const EdgeListOptions& options = {});
ParsedGraph read_edge_list_file(const std::string& path, const EdgeListOptions& options = {});

// Writes one "u v" line per edge. Labels default to the node indices.
void write_edge_list(std::ostream& out, const Graph& g,
                     const std::vector<std::string>* labels = nullptr);
void write_edge_list_file(const std::string& path, const Graph& g,
                          const std::vector<std::string>* labels = nullptr);

// Nodes relabeled 0..|nodes|-1 in sorted order. Throws ArgumentError on
// out-of-range or repeated indices.
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

// Maximal connected node sets, each sorted, ordered by smallest member.
std::vector<NodeSet> connected_components(const Graph& g);

// Largest component of the subgraph induced by `nodes`, in host indices.
// Ties go to the component holding the smallest index.
NodeSet largest_connected_component(const Graph& g, std::span<const NodeId> nodes);

std::vector<std::size_t> degree_sequence(const Graph& g);

// Connectivity of the subgraph induced by a small node set (<= 64 nodes).
bool is_connected_subset(const Graph& g, std::span<const NodeId> nodes);

}  // namespace sgf
