#include "sgf/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "sgf/error.hpp"
#include "sgf/parallel.hpp"
#include "sgf/random.hpp"

namespace sgf {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (std::uint64_t{u} << 32) | v;
}

}  // namespace

SwapResult double_edge_swap(const Graph& g, std::uint64_t n_swaps, std::uint64_t seed) {
  SwapResult out;
  out.requested = n_swaps;
  if (n_swaps == 0) {
    out.graph = g;
    return out;
  }
  if (g.num_edges() < 2) throw ArgumentError("double edge swap needs at least 2 edges");

  std::vector<Edge> edges = g.edges();
  std::unordered_set<std::uint64_t> present;
  present.reserve(edges.size() * 2);
  for (const auto& e : edges) present.insert(edge_key(e.u, e.v));

  Rng rng(seed);
  const std::uint64_t max_attempts = 100 * n_swaps + 1000;
  const std::size_t m = edges.size();
  while (out.achieved < n_swaps && out.attempts < max_attempts) {
    ++out.attempts;
    const std::size_t i = uniform_below(rng, m);
    const std::size_t j = uniform_below(rng, m);
    if (i == j) continue;
    NodeId a = edges[i].u, b = edges[i].v;
    NodeId c = edges[j].u, d = edges[j].v;
    // Random orientation of the second edge reaches both rewirings.
    if (rng() & 1U) std::swap(c, d);
    if (a == d || c == b) continue;
    if (present.count(edge_key(a, d)) || present.count(edge_key(c, b))) continue;
    present.erase(edge_key(a, b));
    present.erase(edge_key(c, d));
    present.insert(edge_key(a, d));
    present.insert(edge_key(c, b));
    edges[i] = {std::min(a, d), std::max(a, d)};
    edges[j] = {std::min(c, b), std::max(c, b)};
    ++out.achieved;
  }
  out.graph = Graph(g.num_nodes(), edges);
  return out;
}

SplitSizes split_sizes(std::size_t count) {
  const std::size_t tenth = count / 10;
  return {count - 2 * tenth, tenth, tenth};
}

DatasetSplit generate_dataset(const Graph& source, std::size_t count, std::uint64_t seed,
                              std::optional<std::uint64_t> n_swaps, std::size_t workers) {
  if (count < 10) throw ArgumentError("dataset count must be at least 10");
  const std::uint64_t swaps = n_swaps.value_or(10 * source.num_edges());
  std::vector<Graph> graphs(count);
  parallel_chunks(count, resolve_workers(workers), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      graphs[i] = double_edge_swap(source, swaps, derive_seed(seed, i)).graph;
  });

  DatasetSplit split;
  const auto sizes = split_sizes(count);
  auto it = std::make_move_iterator(graphs.begin());
  split.train.assign(it, it + sizes.train);
  split.valid.assign(it + sizes.train, it + sizes.train + sizes.valid);
  split.test.assign(it + sizes.train + sizes.valid, std::make_move_iterator(graphs.end()));
  split.source_hash = graph_hash(source);
  split.seed = seed;
  split.swaps = swaps;
  split.num_nodes = source.num_nodes();
  return split;
}

std::string graph_hash(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(g.num_nodes());
  for (const auto& e : g.edges()) feed(edge_key(e.u, e.v));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Graph random_gnm(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2 && m > 0) throw ArgumentError("G(n,m) needs at least 2 nodes for any edge");
  const double max_edges = 0.5 * double(n) * double(n - 1);
  if (double(m) > max_edges) throw ArgumentError("G(n,m): too many edges requested");
  Rng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  std::vector<Edge> edges;
  while (edges.size() < m) {
    const auto u = static_cast<NodeId>(uniform_below(rng, n));
    const auto v = static_cast<NodeId>(uniform_below(rng, n));
    if (u == v || !chosen.insert(edge_key(u, v)).second) continue;
    edges.push_back({std::min(u, v), std::max(u, v)});
  }
  return Graph(n, edges);
}

namespace fs = std::filesystem;

namespace {

std::string graph_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu.edges", index);
  return buf;
}

}  // namespace

void write_dataset(const DatasetSplit& split, const std::string& dir, const Graph* source) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create dataset directory '" + dir + "': " + ec.message());
  nlohmann::json manifest = {{"schema", 1},
                             {"source_hash", split.source_hash},
                             {"seed", split.seed},
                             {"swaps", split.swaps},
                             {"num_nodes", split.num_nodes},
                             {"counts",
                              {{"train", split.train.size()},
                               {"valid", split.valid.size()},
                               {"test", split.test.size()}}}};
  for (const auto& [name, graphs] : {std::pair{"train", &split.train},
                                     std::pair{"valid", &split.valid},
                                     std::pair{"test", &split.test}}) {
    const fs::path sub = fs::path(dir) / name;
    fs::create_directories(sub);
    for (std::size_t i = 0; i < graphs->size(); ++i)
      write_edge_list_file((sub / graph_file_name(i)).string(), (*graphs)[i]);
  }
  if (source) write_edge_list_file((fs::path(dir) / "source.edges").string(), *source);
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw DataError("cannot write dataset manifest in '" + dir + "'");
  out << manifest.dump(2) << '\n';
}

DatasetSplit read_dataset(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw DataError("dataset manifest not found in '" + dir + "'");
  DatasetSplit split;
  try {
    const auto manifest = nlohmann::json::parse(in);
    split.source_hash = manifest.at("source_hash").get<std::string>();
    split.seed = manifest.at("seed").get<std::uint64_t>();
    split.swaps = manifest.at("swaps").get<std::uint64_t>();
    split.num_nodes = manifest.at("num_nodes").get<std::size_t>();
    EdgeListOptions options;
    options.numeric_ids = true;
    options.num_nodes = split.num_nodes;
    for (const auto& [name, graphs] : {std::pair{"train", &split.train},
                                       std::pair{"valid", &split.valid},
                                       std::pair{"test", &split.test}}) {
      const auto count = manifest.at("counts").at(name).get<std::size_t>();
      for (std::size_t i = 0; i < count; ++i)
        graphs->push_back(
            read_edge_list_file((fs::path(dir) / name / graph_file_name(i)).string(), options)
                .graph);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed dataset manifest: ") + e.what());
  }
  return split;
}

}  // namespace sgf
