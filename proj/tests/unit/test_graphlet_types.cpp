#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "helpers.hpp"
#include "sgf/error.hpp"
#include "sgf/graphlet_types.hpp"
#include "sgf/random.hpp"

using namespace sgf;
using testg::make;

namespace {

// Independent reference: adjacency matrix, every permutation, bit-string
// built pair by pair with (0,1) first.
unsigned reference_code(int k, const std::vector<std::vector<int>>& adj) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  unsigned best = ~0u;
  do {
    unsigned bits = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) bits = (bits << 1) | unsigned(adj[perm[i]][perm[j]]);
    best = std::min(best, bits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<std::vector<int>> adjacency_of(const Graph& g) {
  std::vector<std::vector<int>> a(g.num_nodes(), std::vector<int>(g.num_nodes(), 0));
  for (const auto& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = 1;
  return a;
}

Graph from_mask(int k, unsigned mask) {
  std::vector<std::pair<NodeId, NodeId>> e;
  int bit = 0;
  for (NodeId i = 0; i < NodeId(k); ++i)
    for (NodeId j = i + 1; j < NodeId(k); ++j, ++bit)
      if (mask >> bit & 1u) e.emplace_back(i, j);
  return make(static_cast<std::size_t>(k), e);
}

bool connected_dfs(const Graph& g) {
  std::vector<int> seen(g.num_nodes(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.num_nodes();
}

Graph relabel(const Graph& g, const std::vector<NodeId>& perm) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (const auto& x : g.edges()) e.emplace_back(perm[x.u], perm[x.v]);
  return make(g.num_nodes(), e);
}

}  // namespace

TEST_CASE("brute force over labeled graphs gives 6 and 21 connected classes") {
  for (const auto [k, expected] : {std::pair{4, 6}, std::pair{5, 21}, std::pair{3, 2}}) {
    std::set<CanonicalCode> codes;
    std::set<unsigned> reference;
    for (unsigned mask = 0; mask < (1u << pair_count(k)); ++mask) {
      const Graph g = from_mask(k, mask);
      if (!connected_dfs(g)) continue;
      const CanonicalCode c = canonical_code(g);
      CHECK(c.bits == reference_code(k, adjacency_of(g)));
      std::vector<NodeId> ident(static_cast<std::size_t>(k));
      std::iota(ident.begin(), ident.end(), 0);
      CHECK(canonicalize_bits(k, adjacency_bits(g, ident)) == c);
      CHECK(bits_connected(k, adjacency_bits(g, ident)));
      codes.insert(c);
      reference.insert(reference_code(k, adjacency_of(g)));
    }
    CHECK(codes.size() == static_cast<std::size_t>(expected));
    CHECK(reference.size() == static_cast<std::size_t>(expected));
    CHECK(connected_types(k) == std::vector<CanonicalCode>(codes.begin(), codes.end()));
  }
}

TEST_CASE("canonical code is permutation invariant") {
  CHECK(canonical_code(make(4, {{0, 1}, {1, 2}, {2, 3}})) ==
        canonical_code(make(4, {{3, 2}, {2, 1}, {1, 0}})));
  CHECK(canonical_code(testg::path(4)) != canonical_code(testg::cycle(4)));

  Rng rng(42);
  std::set<CanonicalCode> seen;
  for (int k : {4, 5}) {
    for (const CanonicalCode& c : connected_types(k)) {
      const Graph g = code_graph(c);
      CHECK(canonical_code(g) == c);
      std::vector<NodeId> perm(static_cast<std::size_t>(k));
      std::iota(perm.begin(), perm.end(), 0);
      for (int t = 0; t < 1000; ++t) {
        std::shuffle(perm.begin(), perm.end(), rng);
        REQUIRE(canonical_code(relabel(g, perm)) == c);
      }
      seen.insert(c);
    }
  }
  CHECK(seen.size() == 27);
}

TEST_CASE("canonical code rejects sizes outside 3..5") {
  CHECK_THROWS_AS(canonical_code(testg::path(2)), ArgumentError);
  CHECK_THROWS_AS(canonical_code(testg::path(6)), ArgumentError);
}

TEST_CASE("code strings") {
  const CanonicalCode k4 = canonical_code(testg::complete(4));
  CHECK(k4.str() == "4:3f");
  CHECK(CanonicalCode::parse("4:3f") == k4);
  for (int k : {4, 5})
    for (const auto& c : connected_types(k)) CHECK(CanonicalCode::parse(c.str()) == c);
  CHECK_THROWS_AS(CanonicalCode::parse("4"), DataError);
  CHECK_THROWS_AS(CanonicalCode::parse("7:1"), DataError);
  CHECK_THROWS_AS(CanonicalCode::parse("4:zz"), DataError);
  CHECK_THROWS_AS(CanonicalCode::parse("4:ff"), DataError);
}

TEST_CASE("aliases name every connected type once") {
  CHECK(alias(canonical_code(testg::path(4))) == "4-path");
  CHECK(alias(canonical_code(testg::cycle(4))) == "4-cycle");
  CHECK(alias(canonical_code(testg::star(3))) == "claw");
  CHECK(alias(canonical_code(testg::star(4))) == "4-star(K1,4)");
  CHECK(alias(canonical_code(testg::cycle(5))) == "5-cycle");
  CHECK(alias(canonical_code(testg::complete(5))) == "K5");
  std::set<std::string> names;
  for (int k : {4, 5})
    for (const auto& c : connected_types(k)) names.insert(alias(c));
  CHECK(names.size() == 27);
}

TEST_CASE("classify_connected") {
  const Graph c5 = testg::cycle(5);
  CHECK(classify_connected(c5, std::vector<NodeId>{0, 1, 2, 3}) == canonical_code(testg::path(4)));
  const Graph k4 = testg::complete(4);
  CHECK(classify_connected(k4, std::vector<NodeId>{0, 1, 2, 3}) == canonical_code(k4));
  CHECK_THROWS_AS(classify_connected(c5, std::vector<NodeId>{0, 1, 3}), ClassificationError);

  // Agrees with canonical_code(induced_subgraph) on random connected sets.
  Rng rng(8);
  const Graph g = testg::make(12, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 6},
                                   {6, 7}, {7, 8}, {8, 9}, {9, 10}, {10, 11}, {11, 6}, {2, 8}, {1, 7}});
  int checked = 0;
  for (int t = 0; t < 2000; ++t) {
    std::vector<NodeId> all(12);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    const int k = 4 + static_cast<int>(uniform_below(rng, 2));
    std::vector<NodeId> s(all.begin(), all.begin() + k);
    std::sort(s.begin(), s.end());
    if (!is_connected_subset(g, s)) {
      CHECK_THROWS_AS(classify_connected(g, s), ClassificationError);
      continue;
    }
    CHECK(classify_connected(g, s) == canonical_code(induced_subgraph(g, s)));
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("registry indices and overflow") {
  TypeRegistry r;
  CHECK(r.capacity() == 16);
  const auto& t5 = connected_types(5);
  CHECK(r.index(t5[0]) == 0);
  CHECK(r.index(t5[0]) == 0);
  for (std::size_t i = 1; i < 15; ++i) CHECK(r.index(t5[i]) == i);
  CHECK(r.size() == 15);
  CHECK(r.index(t5[15]) == 15);
  CHECK(r.index(t5[16]) == 15);
  CHECK(r.size() == 15);
  CHECK(r.index(t5[3]) == 3);
  CHECK_FALSE(r.find(t5[16]).has_value());
  CHECK(r.find(t5[4]) == std::optional<std::size_t>(4));

  const TypeRegistry restored(16, r.codes());
  CHECK(restored.codes() == r.codes());
  std::vector<CanonicalCode> too_many(t5.begin(), t5.begin() + 16);
  CHECK_THROWS_AS(TypeRegistry(16, too_many), DataError);
}
