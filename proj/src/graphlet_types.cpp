#include "sgf/graphlet_types.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <map>
#include <numeric>

#include "sgf/error.hpp"

namespace sgf {

namespace {

std::uint16_t permute_bits(int k, std::uint16_t bits, const std::array<int, 5>& perm) {
  std::uint16_t out = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      int a = perm[i], b = perm[j];
      if (a > b) std::swap(a, b);
      if ((bits >> pair_bit(k, a, b)) & 1U) out |= std::uint16_t(1U << pair_bit(k, i, j));
    }
  return out;
}

std::uint16_t minimize_over_permutations(int k, std::uint16_t bits) {
  std::array<int, 5> perm{};
  std::iota(perm.begin(), perm.begin() + k, 0);
  std::uint16_t best = 0xffff;
  do {
    best = std::min(best, permute_bits(k, bits, perm));
  } while (std::next_permutation(perm.begin(), perm.begin() + k));
  return best;
}

void check_size(int k) {
  if (k < kMinGraphletSize || k > kMaxGraphletSize)
    throw ArgumentError("graphlet size must be in [3,5], got " + std::to_string(k));
}

struct Tables {
  // canonical[k][labeled bits]
  std::array<std::vector<std::uint16_t>, 6> canonical;
  std::array<std::vector<CanonicalCode>, 6> connected;

  Tables() {
    for (int k = kMinGraphletSize; k <= kMaxGraphletSize; ++k) {
      const std::size_t count = std::size_t{1} << pair_count(k);
      canonical[k].resize(count);
      for (std::size_t b = 0; b < count; ++b) {
        canonical[k][b] = minimize_over_permutations(k, static_cast<std::uint16_t>(b));
        if (canonical[k][b] == b && bits_connected(k, static_cast<std::uint16_t>(b)))
          connected[k].push_back({static_cast<std::uint8_t>(k), static_cast<std::uint16_t>(b)});
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

// Named representatives, given as edge lists on nodes 0..k-1.
struct NamedGraph {
  const char* name;
  int k;
  std::vector<std::pair<int, int>> edges;
};

const std::vector<NamedGraph>& named_graphs() {
  static const std::vector<NamedGraph> list = {
      {"3-path", 3, {{0, 1}, {1, 2}}},
      {"triangle", 3, {{0, 1}, {1, 2}, {0, 2}}},
      {"4-path", 4, {{0, 1}, {1, 2}, {2, 3}}},
      {"claw", 4, {{0, 1}, {0, 2}, {0, 3}}},
      {"4-cycle", 4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}},
      {"paw", 4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}},
      {"diamond", 4, {{0, 1}, {1, 2}, {0, 2}, {1, 3}, {2, 3}}},
      {"K4", 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}},
      {"5-path", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}},
      {"fork", 5, {{0, 1}, {0, 2}, {0, 3}, {3, 4}}},
      {"4-star(K1,4)", 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}},
      {"5-cycle", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}},
      {"bull", 5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 4}}},
      {"cricket", 5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {0, 4}}},
      {"tadpole", 5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}}},
      {"banner", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}}},
      {"house", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {1, 4}}},
      {"K2,3", 5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}},
      {"bowtie", 5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {0, 4}, {3, 4}}},
      {"dart", 5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 3}, {0, 4}}},
      {"kite", 5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 3}, {3, 4}}},
      {"gem", 5, {{0, 1}, {1, 2}, {2, 3}, {4, 0}, {4, 1}, {4, 2}, {4, 3}}},
      {"book", 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}},
      {"K4-tail", 5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}}},
      {"K2,3+e", 5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}}},
      {"wheel", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 0}, {4, 1}, {4, 2}, {4, 3}}},
      {"K5-P3", 5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}}},
      {"K5-e", 5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}},
      {"K5", 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}},
  };
  return list;
}

const std::map<CanonicalCode, std::string>& alias_table() {
  static const std::map<CanonicalCode, std::string> table = [] {
    std::map<CanonicalCode, std::string> out;
    for (const auto& named : named_graphs()) {
      std::uint16_t bits = 0;
      for (auto [a, b] : named.edges) {
        if (a > b) std::swap(a, b);
        bits |= std::uint16_t(1U << pair_bit(named.k, a, b));
      }
      out.emplace(canonicalize_bits(named.k, bits), named.name);
    }
    return out;
  }();
  return table;
}

}  // namespace

std::string CanonicalCode::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%d:%x", int(k), unsigned(bits));
  return buf;
}

CanonicalCode CanonicalCode::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
    throw DataError("malformed canonical code '" + text + "'");
  try {
    std::size_t pos = 0;
    const int k = std::stoi(text.substr(0, colon), &pos);
    const unsigned long bits = std::stoul(text.substr(colon + 1), &pos, 16);
    if (k < 1 || k > kMaxGraphletSize || bits >= (1UL << pair_count(k)))
      throw DataError("canonical code out of range '" + text + "'");
    return {static_cast<std::uint8_t>(k), static_cast<std::uint16_t>(bits)};
  } catch (const std::logic_error&) {
    throw DataError("malformed canonical code '" + text + "'");
  }
}

std::uint16_t adjacency_bits(const Graph& g, std::span<const NodeId> nodes) {
  const int k = static_cast<int>(nodes.size());
  std::uint16_t bits = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (g.has_edge(nodes[i], nodes[j])) bits |= std::uint16_t(1U << pair_bit(k, i, j));
  return bits;
}

bool bits_connected(int k, std::uint16_t bits) {
  unsigned reached = 1, frontier = 1;
  while (frontier) {
    const int i = std::countr_zero(frontier);
    frontier &= frontier - 1;
    for (int j = 0; j < k; ++j) {
      if (j == i || (reached >> j) & 1U) continue;
      const int a = std::min(i, j), b = std::max(i, j);
      if ((bits >> pair_bit(k, a, b)) & 1U) {
        reached |= 1U << j;
        frontier |= 1U << j;
      }
    }
  }
  return reached == (1U << k) - 1;
}

CanonicalCode canonical_code(const Graph& g) {
  const int k = static_cast<int>(g.num_nodes());
  check_size(k);
  std::array<NodeId, 5> nodes{};
  std::iota(nodes.begin(), nodes.begin() + k, 0);
  const std::uint16_t labeled = adjacency_bits(g, std::span(nodes.data(), k));
  return {static_cast<std::uint8_t>(k), minimize_over_permutations(k, labeled)};
}

CanonicalCode canonicalize_bits(int k, std::uint16_t labeled_bits) {
  check_size(k);
  return {static_cast<std::uint8_t>(k), tables().canonical[k][labeled_bits]};
}

CanonicalCode classify_connected(const Graph& g, std::span<const NodeId> nodes) {
  const int k = static_cast<int>(nodes.size());
  check_size(k);
  for (NodeId v : nodes)
    if (v >= g.num_nodes()) throw ArgumentError("node index out of range");
  const std::uint16_t labeled = adjacency_bits(g, nodes);
  if (!bits_connected(k, labeled))
    throw ClassificationError("induced subgraph on " + std::to_string(k) +
                              " nodes is disconnected");
  return canonicalize_bits(k, labeled);
}

const std::vector<CanonicalCode>& connected_types(int k) {
  check_size(k);
  return tables().connected[k];
}

std::string alias(const CanonicalCode& code) {
  const auto& table = alias_table();
  auto it = table.find(code);
  return it == table.end() ? code.str() : it->second;
}

Graph code_graph(const CanonicalCode& code) {
  std::vector<Edge> edges;
  for (int i = 0; i < code.k; ++i)
    for (int j = i + 1; j < code.k; ++j)
      if ((code.bits >> pair_bit(code.k, i, j)) & 1U)
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
  return Graph(code.k, edges);
}

TypeRegistry::TypeRegistry(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ArgumentError("type registry capacity must be positive");
}

TypeRegistry::TypeRegistry(std::size_t capacity, std::vector<CanonicalCode> codes)
    : TypeRegistry(capacity) {
  if (codes.size() >= capacity) throw DataError("type registry holds more codes than its capacity");
  codes_ = std::move(codes);
}

std::size_t TypeRegistry::index(const CanonicalCode& code) {
  if (auto found = find(code)) return *found;
  // The last slot is reserved for codes that arrive after the registry fills.
  if (codes_.size() + 1 < capacity_) {
    codes_.push_back(code);
    return codes_.size() - 1;
  }
  return capacity_ - 1;
}

std::optional<std::size_t> TypeRegistry::find(const CanonicalCode& code) const {
  auto it = std::find(codes_.begin(), codes_.end(), code);
  if (it == codes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

}  // namespace sgf
