#include "sgf/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "sgf/error.hpp"

namespace sgf {

Graph::Graph(std::size_t num_nodes, std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const auto& [u, v] : edges) list.push_back({u, v});
  build(num_nodes, std::move(list));
}

Graph::Graph(std::size_t num_nodes, std::span<const Edge> edges) {
  build(num_nodes, std::vector<Edge>(edges.begin(), edges.end()));
}

void Graph::build(std::size_t num_nodes, std::vector<Edge> edges) {
  std::vector<Edge> clean;
  clean.reserve(edges.size());
  for (auto e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes)
      throw ArgumentError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                          ") out of range for " + std::to_string(num_nodes) + " nodes");
    if (e.u == e.v) continue;
    if (e.u > e.v) std::swap(e.u, e.v);
    clean.push_back(e);
  }
  std::sort(clean.begin(), clean.end());
  clean.erase(std::unique(clean.begin(), clean.end()), clean.end());
  edges_ = std::move(clean);

  adjacency_.assign(num_nodes, {});
  for (const auto& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());

  bits_.clear();
  words_per_row_ = 0;
  if (num_nodes <= kDenseLimit) {
    words_per_row_ = (num_nodes + 63) / 64;
    bits_.assign(num_nodes * words_per_row_, 0);
    for (const auto& e : edges_) {
      bits_[e.u * words_per_row_ + e.v / 64] |= std::uint64_t{1} << (e.v % 64);
      bits_[e.v * words_per_row_ + e.u / 64] |= std::uint64_t{1} << (e.u % 64);
    }
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (words_per_row_ != 0)
    return (bits_[u * words_per_row_ + v / 64] >> (v % 64)) & 1U;
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

ParsedGraph parse_edge_list(std::istream& in, const EdgeListOptions& options) {
  ParsedGraph out;
  std::unordered_map<std::string, NodeId> index;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t max_id = 0;
  bool any = false;

  auto lookup = [&](const std::string& label, std::size_t line) -> NodeId {
    if (options.numeric_ids) {
      std::size_t pos = 0;
      unsigned long long id = 0;
      try {
        id = std::stoull(label, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != label.size() || label.empty() || label[0] == '-')
        throw ParseError(line, "expected a non-negative integer node id, got '" + label + "'");
      if (options.num_nodes && id >= *options.num_nodes)
        throw ParseError(line, "node id " + label + " exceeds node count " +
                                   std::to_string(*options.num_nodes));
      max_id = std::max<std::size_t>(max_id, id);
      any = true;
      return static_cast<NodeId>(id);
    }
    auto [it, inserted] = index.try_emplace(label, static_cast<NodeId>(out.labels.size()));
    if (inserted) out.labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream tokens(line);
    std::string a, b, extra;
    tokens >> a >> b;
    if (b.empty() || (tokens >> extra))
      throw ParseError(line_no, "expected exactly two node labels");
    const NodeId u = lookup(a, line_no);
    const NodeId v = lookup(b, line_no);
    edges.emplace_back(u, v);
  }

  std::size_t n = out.labels.size();
  if (options.numeric_ids) {
    n = options.num_nodes.value_or(any ? max_id + 1 : 0);
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.labels[i] = std::to_string(i);
  }
  out.graph = Graph(n, edges);
  return out;
}

ParsedGraph parse_edge_list(const std::string& text, const EdgeListOptions& options) {
  std::istringstream in(text);
  return parse_edge_list(in, options);
}

ParsedGraph read_edge_list_file(const std::string& path, const EdgeListOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file '" + path + "'");
  return parse_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>* labels) {
  for (const auto& e : g.edges()) {
    if (labels)
      out << (*labels)[e.u] << ' ' << (*labels)[e.v] << '\n';
    else
      out << e.u << ' ' << e.v << '\n';
  }
}

void write_edge_list_file(const std::string& path, const Graph& g,
                          const std::vector<std::string>* labels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write graph file '" + path + "'");
  write_edge_list(out, g, labels);
}

namespace {

std::vector<NodeId> checked_sorted(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ArgumentError("node set contains a repeated index");
  if (!sorted.empty() && sorted.back() >= g.num_nodes())
    throw ArgumentError("node index " + std::to_string(sorted.back()) + " out of range");
  return sorted;
}

}  // namespace

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  const auto sorted = checked_sorted(g, nodes);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (NodeId w : g.neighbors(sorted[i])) {
      if (w <= sorted[i]) continue;
      auto it = std::lower_bound(sorted.begin(), sorted.end(), w);
      if (it != sorted.end() && *it == w)
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(it - sorted.begin())});
    }
  }
  return Graph(sorted.size(), edges);
}

std::vector<NodeSet> connected_components(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<bool> seen(n, false);
  std::vector<NodeSet> components;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    NodeSet comp;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (NodeId w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

NodeSet largest_connected_component(const Graph& g, std::span<const NodeId> nodes) {
  const auto sorted = checked_sorted(g, nodes);
  if (sorted.empty()) return {};
  const Graph sub = induced_subgraph(g, sorted);
  const auto comps = connected_components(sub);
  // Components arrive ordered by smallest member, so strict '>' keeps the
  // lowest-index component among equally large ones.
  const NodeSet* best = &comps.front();
  for (const auto& c : comps)
    if (c.size() > best->size()) best = &c;
  NodeSet out;
  out.reserve(best->size());
  for (NodeId local : *best) out.push_back(sorted[local]);
  return out;
}

std::vector<std::size_t> degree_sequence(const Graph& g) {
  std::vector<std::size_t> deg(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) deg[v] = g.degree(v);
  return deg;
}

bool is_connected_subset(const Graph& g, std::span<const NodeId> nodes) {
  const std::size_t k = nodes.size();
  if (k == 0) return false;
  if (k > 64) throw ArgumentError("is_connected_subset supports at most 64 nodes");
  std::uint64_t reached = 1, frontier = 1;
  const std::uint64_t all = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  while (frontier) {
    const int i = std::countr_zero(frontier);
    frontier &= frontier - 1;
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      if (!(reached & bit) && g.has_edge(nodes[i], nodes[j])) {
        reached |= bit;
        frontier |= bit;
      }
    }
  }
  return reached == all;
}

}  // namespace sgf
