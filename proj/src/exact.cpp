#include "sgf/exact.hpp"

#include <array>
#include <vector>

#include "sgf/error.hpp"
#include "sgf/parallel.hpp"

namespace sgf {

namespace {

class EsuWalker {
 public:
  EsuWalker(const Graph& g, int k, const std::function<void(std::span<const NodeId>)>& visit)
      : g_(g), k_(k), visit_(visit) {}

  void run_root(NodeId root) {
    sub_[0] = root;
    std::vector<NodeId> ext;
    for (NodeId w : g_.neighbors(root))
      if (w > root) ext.push_back(w);
    extend(1, std::move(ext), root);
  }

 private:
  bool in_sub(NodeId u, int size) const {
    for (int i = 0; i < size; ++i)
      if (sub_[i] == u) return true;
    return false;
  }

  bool adjacent_to_sub(NodeId u, int size) const {
    for (int i = 0; i < size; ++i)
      if (g_.has_edge(u, sub_[i])) return true;
    return false;
  }

  void extend(int size, std::vector<NodeId> ext, NodeId root) {
    if (size == k_) {
      visit_(std::span<const NodeId>(sub_.data(), k_));
      return;
    }
    while (!ext.empty()) {
      const NodeId w = ext.back();
      ext.pop_back();
      // Exclusive neighborhood of w: neighbors above the root that are neither
      // in the current set nor adjacent to it.
      std::vector<NodeId> next = ext;
      for (NodeId u : g_.neighbors(w)) {
        if (u <= root || in_sub(u, size) || adjacent_to_sub(u, size)) continue;
        next.push_back(u);
      }
      sub_[size] = w;
      extend(size + 1, std::move(next), root);
    }
  }

  const Graph& g_;
  int k_;
  const std::function<void(std::span<const NodeId>)>& visit_;
  std::array<NodeId, kMaxGraphletSize> sub_{};
};

void check_k(int k) {
  if (k < kMinGraphletSize || k > kMaxGraphletSize)
    throw ArgumentError("graphlet size must be in [3,5], got " + std::to_string(k));
}

}  // namespace

void esu_enumerate(const Graph& g, int k, NodeId root_begin, NodeId root_end,
                   const std::function<void(std::span<const NodeId>)>& visit) {
  if (k < 1 || k > kMaxGraphletSize) throw ArgumentError("ESU supports 1 <= k <= 5");
  EsuWalker walker(g, k, visit);
  for (NodeId v = root_begin; v < root_end && v < g.num_nodes(); ++v) walker.run_root(v);
}

CodeCounts enumerate_connected(const Graph& g, int k, std::size_t workers) {
  check_k(k);
  const std::size_t table_size = std::size_t{1} << pair_count(k);
  workers = resolve_workers(workers);
  std::vector<std::vector<std::uint64_t>> per_worker(workers,
                                                     std::vector<std::uint64_t>(table_size, 0));
  // Interleave roots so low-index (typically higher-work) roots spread evenly.
  const std::size_t n = g.num_nodes();
  parallel_chunks(workers, workers, [&](std::size_t w, std::size_t, std::size_t) {
    auto& counts = per_worker[w];
    std::function<void(std::span<const NodeId>)> visit = [&](std::span<const NodeId> nodes) {
      ++counts[adjacency_bits(g, nodes)];
    };
    for (std::size_t v = w; v < n; v += workers)
      esu_enumerate(g, k, static_cast<NodeId>(v), static_cast<NodeId>(v + 1), visit);
  });

  CodeCounts out;
  for (std::size_t bits = 0; bits < table_size; ++bits) {
    std::uint64_t total = 0;
    for (const auto& counts : per_worker) total += counts[bits];
    if (total) out[canonicalize_bits(k, static_cast<std::uint16_t>(bits))] += total;
  }
  return out;
}

FrequencyDistribution exact_distribution(const Graph& g, std::size_t workers) {
  FrequencyDistribution d;
  d.k_set = {4, 5};
  std::uint64_t four = 0;
  for (int k : {4, 5}) {
    for (const auto& [code, count] : enumerate_connected(g, k, workers)) {
      d.counts[code] = static_cast<double>(count);
      if (k == 4) four += count;
    }
  }
  d.meta["method"] = "exact";
  d.meta["no_connected_4_subgraph"] = four == 0;
  d.meta["empty"] = four == 0;
  return d;
}

FrequencyDistribution brute_force_distribution(const Graph& g, int k) {
  check_k(k);
  const std::size_t n = g.num_nodes();
  if (n > kBruteForceMaxNodes)
    throw ArgumentError("brute force enumeration refused for " + std::to_string(n) +
                        " nodes (cap " + std::to_string(kBruteForceMaxNodes) + ")");
  FrequencyDistribution d;
  d.k_set = {k};
  d.meta["method"] = "brute_force";
  if (n < static_cast<std::size_t>(k)) return d;
  // Walk all k-subsets in lexicographic order.
  std::vector<NodeId> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = static_cast<NodeId>(i);
  while (true) {
    const Graph sub = induced_subgraph(g, idx);
    if (connected_components(sub).size() == 1) d.counts[canonical_code(sub)] += 1.0;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return d;
}

}  // namespace sgf
