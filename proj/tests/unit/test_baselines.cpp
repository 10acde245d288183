#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sgf/baselines.hpp"
#include "sgf/dataset.hpp"
#include "sgf/error.hpp"
#include "sgf/exact.hpp"

using namespace sgf;

namespace {

const Graph two_triangles = testg::make(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});

// Connected random graph on n nodes: a random spanning path plus extra edges.
Graph connected_random(std::size_t n, std::size_t extra, std::uint64_t seed) {
  const Graph base = random_gnm(n, extra, seed);
  std::vector<std::pair<NodeId, NodeId>> e;
  for (const auto& x : base.edges()) e.emplace_back(x.u, x.v);
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return testg::make(n, e);
}

}  // namespace

TEST_CASE("naive: K5 gives K4 only, acceptance 1") {
  const auto d = naive_sample(testg::complete(5), 4, 500, 1);
  CHECK(d.freq(canonical_code(testg::complete(4))) == 1.0);
  CHECK(d.meta["acceptance_rate"].get<double>() == 1.0);
  // Scaled counts estimate C(5,4) = 5 subgraphs.
  CHECK(d.total() == doctest::Approx(5.0));
}

TEST_CASE("naive: C5 gives paths only") {
  const auto d = naive_sample(testg::cycle(5), 4, 10000, 2);
  CHECK(d.freq(canonical_code(testg::path(4))) == 1.0);
  CHECK(d.meta["acceptance_rate"].get<double>() == 1.0);
}

TEST_CASE("naive: nothing connected flags empty") {
  const auto d = naive_sample(two_triangles, 4, 2000, 3);
  CHECK(d.meta["acceptance_rate"].get<double>() == 0.0);
  CHECK(d.empty());
  CHECK(d.meta["empty"].get<bool>());
  CHECK_THROWS_AS(naive_sample(two_triangles, 4, 0, 3), ArgumentError);
  CHECK_THROWS_AS(naive_sample(two_triangles, 3, 10, 3), ArgumentError);
}

TEST_CASE("naive: per-type frequencies inside a confidence interval") {
  const Graph g = connected_random(10, 8, 4);
  for (int k : {4, 5}) {
    const auto exact = exact_distribution(g).restricted_to(k);
    const std::uint64_t draws = 200000;
    const auto d = naive_sample(g, k, draws, 10 + k);
    const double accepted = d.meta["accepted"].get<double>();
    for (const auto& [code, p] : exact.frequencies()) {
      const double sd = std::sqrt(p * (1 - p) / accepted);
      CHECK(std::abs(d.freq(code) - p) < 5 * sd + 1e-9);
    }
    // Acceptance rate estimates the connected fraction of k-subsets.
    const double c = exact.total() / (k == 4 ? 210.0 : 252.0);
    CHECK(d.meta["acceptance_rate"].get<double>() ==
          doctest::Approx(c).epsilon(5 * std::sqrt(c * (1 - c) / draws) / c));
  }
}

TEST_CASE("naive_sample_until stops at the target") {
  const Graph g = connected_random(30, 10, 6);
  const auto d = naive_sample_until(g, 5, 300, 1000000, 9);
  CHECK(d.meta["accepted"].get<std::uint64_t>() == 300);
  const auto capped = naive_sample_until(two_triangles, 4, 10, 500, 9);
  CHECK(capped.meta["draws"].get<std::uint64_t>() == 500);
  CHECK(capped.empty());
}

TEST_CASE("mhrw: C5 cases") {
  const auto d4 = mhrw_sample(testg::cycle(5), 4, 10000, std::nullopt, 1);
  CHECK(d4.freq(canonical_code(testg::path(4))) == 1.0);
  const auto d5 = mhrw_sample(testg::cycle(5), 5, 1000, std::nullopt, 1);
  CHECK(d5.freq(canonical_code(testg::cycle(5))) == 1.0);
  CHECK(d5.meta["acceptance_rate"].get<double>() == 0.0);
  CHECK_THROWS_AS(mhrw_sample(two_triangles, 4, 100, 0, 1), InitializationError);
  CHECK_THROWS_AS(mhrw_sample(testg::cycle(5), 4, 0, 0, 1), ArgumentError);
}

TEST_CASE("mhrw: acceptance rule and chain invariants") {
  CHECK(MhrwChain::acceptance(3, 6) == 0.5);
  CHECK(MhrwChain::acceptance(6, 3) == 1.0);
  CHECK(MhrwChain::acceptance(4, 4) == 1.0);

  const Graph g = connected_random(25, 30, 8);
  for (int k : {4, 5}) {
    MhrwChain chain(g, k, 77);
    for (int i = 0; i < 3000; ++i) {
      const ChainState before = chain.state();
      const StateInfo info = chain.info(before);
      chain.step();
      const ChainState& s = chain.state();
      REQUIRE(s.k == k);
      REQUIRE(std::is_sorted(s.nodes.begin(), s.nodes.begin() + k));
      REQUIRE(is_connected_subset(g, std::span<const NodeId>(s.nodes.data(), k)));
      if (!(s == before)) {
        // Moves go to neighbor states sharing k-1 nodes.
        REQUIRE(std::find(info.neighbors.begin(), info.neighbors.end(), s) != info.neighbors.end());
        int shared = 0;
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) shared += before.nodes[a] == s.nodes[b];
        REQUIRE(shared == k - 1);
      }
    }
  }
}

TEST_CASE("mhrw: neighbor relation is symmetric") {
  const Graph g = connected_random(15, 15, 3);
  MhrwChain chain(g, 4, 5);
  for (int i = 0; i < 200; ++i) {
    chain.step();
    const ChainState x = chain.state();
    const auto xs = chain.info(x).neighbors;
    for (const auto& y : xs) {
      const auto ys = chain.info(y).neighbors;
      REQUIRE(std::find(ys.begin(), ys.end(), x) != ys.end());
    }
  }
}

TEST_CASE("mhrw: converges to the exact per-size distribution on a small graph") {
  const Graph g = connected_random(12, 12, 31);
  for (int k : {4, 5}) {
    const auto exact = exact_distribution(g).restricted_to(k);
    const auto d = mhrw_sample(g, k, 200000, std::nullopt, 100 + k);
    CHECK(max_abs_difference(d, exact) < 0.02);
  }
}

TEST_CASE("combined baselines") {
  const Graph c5 = testg::cycle(5);
  const auto m = combined_baseline_distribution(c5, BaselineMethod::mhrw, 5000, 5000, 3);
  CHECK(m.freq(canonical_code(testg::path(4))) == doctest::Approx(5.0 / 6.0));
  CHECK(m.freq(canonical_code(c5)) == doctest::Approx(1.0 / 6.0));

  const auto n = combined_baseline_distribution(c5, BaselineMethod::naive, 2000, 2000, 3);
  CHECK(n.freq(canonical_code(testg::path(4))) == doctest::Approx(5.0 / 6.0));

  const Graph g = connected_random(12, 14, 2);
  for (auto method : {BaselineMethod::naive, BaselineMethod::mhrw}) {
    const auto a = combined_baseline_distribution(g, method, 3000, 3000, 42);
    const auto b = combined_baseline_distribution(g, method, 3000, 3000, 42);
    CHECK(to_json(a, false).dump() == to_json(b, false).dump());
    double sum = 0;
    for (const auto& [c, f] : a.frequencies()) sum += f;
    CHECK(sum == doctest::Approx(1.0));

    const auto partial = combined_baseline_distribution(g, method, 2000, 0, 1);
    CHECK(partial.meta["partial"].get<bool>());
    CHECK(partial.k_set == std::vector<int>{4});
    for (const auto& [c, f] : partial.counts) CHECK(c.k == 4);
  }
  CHECK_THROWS_AS(combined_baseline_distribution(g, BaselineMethod::naive, 0, 0, 1), ArgumentError);
  CHECK_THROWS_AS(parse_baseline_method("wrw"), ConfigError);
}

TEST_CASE("combined mhrw: cross-size ratio tracks the exact ratio") {
  const Graph g = connected_random(12, 10, 17);
  const auto exact = exact_distribution(g);
  const auto d = combined_baseline_distribution(g, BaselineMethod::mhrw, 300000, 300000, 5);
  const double n4 = exact.restricted_to(4).total(), n5 = exact.restricted_to(5).total();
  CHECK(d.meta["ratio_5_to_4"].get<double>() == doctest::Approx(n5 / n4).epsilon(0.03));
  CHECK(max_abs_difference(d, exact) < 0.01);
}

TEST_CASE("combined mhrw without any 5-node component") {
  const Graph k4 = testg::complete(4);
  const auto d = combined_baseline_distribution(k4, BaselineMethod::mhrw, 100, 100, 1);
  CHECK(d.freq(canonical_code(k4)) == 1.0);
}

TEST_CASE("same seed gives identical sampler output") {
  const Graph g = random_gnm(40, 70, 9);
  CHECK(to_json(naive_sample(g, 5, 5000, 3), false) == to_json(naive_sample(g, 5, 5000, 3), false));
  CHECK(to_json(mhrw_sample(g, 4, 5000, 100, 3), false) ==
        to_json(mhrw_sample(g, 4, 5000, 100, 3), false));
  CHECK(to_json(naive_sample(g, 5, 5000, 3), false) != to_json(naive_sample(g, 5, 5000, 4), false));
}
