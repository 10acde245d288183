// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sgf/baselines.hpp"
#include "sgf/bench.hpp"
#include "sgf/dataset.hpp"
#include "sgf/exact.hpp"
#include "sgf/gnns.hpp"
#include "sgf/random.hpp"

using namespace sgf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Graph from_pairs(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& e) {
  return Graph(n, std::span<const std::pair<NodeId, NodeId>>(e));
}

// Random connected graph: random spanning tree plus `extra` uniform edges.
Graph connected_random(std::size_t n, std::size_t extra, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId v = 1; v < n; ++v) e.emplace_back(static_cast<NodeId>(uniform_below(rng, v)), v);
  const Graph more = random_gnm(n, extra, derive_seed(seed, 1));
  for (const auto& x : more.edges()) e.emplace_back(x.u, x.v);
  return from_pairs(n, e);
}

bool dfs_connected(int k, unsigned mask) {
  // mask bit b = pair index b in row-major (i<j) order.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(k));
  int b = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j, ++b)
      if (mask >> b & 1u) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  std::vector<int> seen(static_cast<std::size_t>(k), 0), stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == k;
}

Graph mask_graph(int k, unsigned mask) {
  std::vector<std::pair<NodeId, NodeId>> e;
  int b = 0;
  for (NodeId i = 0; i < NodeId(k); ++i)
    for (NodeId j = i + 1; j < NodeId(k); ++j, ++b)
      if (mask >> b & 1u) e.emplace_back(i, j);
  return from_pairs(static_cast<std::size_t>(k), e);
}

CodeCounts brute_counts(const Graph& g, int k) {
  CodeCounts out;
  for (const auto& [c, n] : brute_force_distribution(g, k).counts)
    out[c] = static_cast<std::uint64_t>(n);
  return out;
}

Graph path_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return from_pairs(n, e);
}

Graph cycle_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i) e.emplace_back(i, static_cast<NodeId>((i + 1) % n));
  return from_pairs(n, e);
}

Graph star_graph(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return from_pairs(leaves + 1, e);
}

Graph complete_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return from_pairs(n, e);
}

// Preferential attachment, so the degree-preservation check also sees a
// heavy-tailed sequence.
Graph preferential_attachment(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> e;
  std::vector<NodeId> ends;
  for (NodeId i = 0; i <= m; ++i)
    for (NodeId j = i + 1; j <= m; ++j) {
      e.emplace_back(i, j);
      ends.push_back(i);
      ends.push_back(j);
    }
  for (NodeId v = static_cast<NodeId>(m + 1); v < n; ++v) {
    std::set<NodeId> targets;
    while (targets.size() < m) targets.insert(ends[uniform_below(rng, ends.size())]);
    for (NodeId t : targets) {
      e.emplace_back(t, v);
      ends.push_back(t);
      ends.push_back(v);
    }
  }
  return from_pairs(n, e);
}

// ---------------------------------------------------------------------------

Outcome canonical_completeness() {
  const auto start = Clock::now();
  std::ostringstream detail;
  bool ok = true;
  for (const auto [k, expected] : {std::pair{4, 6}, std::pair{5, 21}}) {
    std::set<CanonicalCode> classes;
    for (unsigned mask = 0; mask < (1u << pair_count(k)); ++mask)
      if (dfs_connected(k, mask)) classes.insert(canonical_code(mask_graph(k, mask)));
    detail << "k=" << k << ": " << classes.size() << " classes; ";
    ok = ok && classes.size() == static_cast<std::size_t>(expected);
  }
  const double t = seconds_since(start);
  detail << t << " s";
  return {ok && t < 5.0, detail.str()};
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::size_t mismatches = 0, compared = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::size_t n = 6 + i % 9;  // 6..14
    const std::size_t max_m = n * (n - 1) / 2;
    Rng rng(derive_seed(2024, i));
    const std::size_t m = 1 + uniform_below(rng, std::min<std::size_t>(max_m, 3 * n));
    const Graph g = random_gnm(n, m, derive_seed(2025, i));
    for (int k : {4, 5}) {
      ++compared;
      if (enumerate_connected(g, k) != brute_counts(g, k)) ++mismatches;
    }
  }
  const double t = seconds_since(start);
  std::ostringstream detail;
  detail << compared << " (graph, k) pairs, " << mismatches << " mismatches; " << t << " s";
  return {mismatches == 0 && t < 60.0, detail.str()};
}

Outcome closed_forms() {
  std::ostringstream detail;
  const auto expect = [&](const std::string& name, const Graph& g,
                          std::vector<std::pair<Graph, std::uint64_t>> parts) {
    const auto d = exact_distribution(g);
    std::uint64_t total = 0;
    for (const auto& [h, c] : parts) total += c;
    bool ok = d.counts.size() == parts.size() && d.total() == static_cast<double>(total);
    for (const auto& [h, c] : parts) {
      const CanonicalCode code = canonical_code(h);
      const auto it = d.counts.find(code);
      ok = ok && it != d.counts.end() && it->second == static_cast<double>(c);
      // freq = c / total exactly in double arithmetic
      ok = ok && d.freq(code) == static_cast<double>(c) / static_cast<double>(total);
    }
    detail << name << (ok ? " ok; " : " MISMATCH; ");
    return ok;
  };
  bool ok = true;
  ok &= expect("C5 {4-path 5/6, 5-cycle 1/6}", cycle_graph(5),
               {{path_graph(4), 5}, {cycle_graph(5), 1}});
  ok &= expect("star {claw 4/5, K1,4 1/5}", star_graph(4), {{star_graph(3), 4}, {star_graph(4), 1}});
  ok &= expect("K4 {K4 1}", complete_graph(4), {{complete_graph(4), 1}});
  return {ok, detail.str()};
}

Outcome mhrw_convergence() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const std::size_t n = 8 + i % 5;  // 8..12
    const Graph g = connected_random(n, n / 2 + i % 4, derive_seed(77, i));
    const auto exact = exact_distribution(g);
    for (int k : {4, 5}) {
      const auto d = mhrw_sample(g, k, 1000000, std::nullopt, derive_seed(78, i * 8 + k));
      worst = std::max(worst, max_abs_difference(d, exact.restricted_to(k)));
    }
  }
  const double t = seconds_since(start);
  std::ostringstream detail;
  detail << "max L-inf " << worst << " over 20 graphs x k in {4,5}; " << t << " s";
  return {worst < 0.01 && t < 300.0, detail.str()};
}

Outcome gradient_correctness() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const Graph g = random_gnm(6, 6 + i % 6, derive_seed(31, i));
    gnns::ModelConfig c;
    c.num_nodes = 6;
    c.hidden = 8;
    c.embed_dim = 6;
    c.mlp_hidden = 6;
    c.num_types = 4;
    c.temperature = 0.5;
    const auto p = gnns::GnnsParams::initialize(c, derive_seed(32, i), {0.6});
    worst = std::max(worst, gnns::gradient_check(p, g, derive_seed(33, i)).max_relative_error);
  }
  const double t = seconds_since(start);
  std::ostringstream detail;
  detail << "max relative error " << worst << " on 10 six-node graphs; " << t << " s";
  return {worst < 1e-4 && t < 60.0, detail.str()};
}

Outcome training_progress() {
  const auto start = Clock::now();
  const Graph source = random_gnm(50, 100, 50);
  const DatasetSplit data = generate_dataset(source, 50, 51);
  std::vector<Graph> graphs(data.train);
  graphs.insert(graphs.end(), data.valid.begin(), data.valid.end());
  graphs.insert(graphs.end(), data.test.begin(), data.test.end());
  std::ostringstream detail;
  bool ok = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    gnns::TrainConfig tc;
    tc.epochs = 5;
    tc.seed = seed;
    const auto r = gnns::train(graphs, tc);
    const double first = r.log.front().mean_loss, last = r.log.back().mean_loss;
    detail << "seed " << seed << ": " << first << " -> " << last << "; ";
    ok = ok && last < first;
  }
  const double t = seconds_since(start);
  detail << t << " s";
  return {ok && t < 600.0, detail.str()};
}

struct ElecRun {
  BenchReport report;
  gnns::GnnsParams params;
  std::vector<Graph> test;
  double seconds = 0.0;
};

ElecRun elec_run() {
  const auto start = Clock::now();
  ElecRun run;
  const Graph source = random_gnm(252, 397, 7);
  const DatasetSplit data = generate_dataset(source, 100, 11);
  gnns::TrainConfig tc;
  tc.seed = 3;
  run.params = gnns::train(data.train, tc).params;
  run.test = data.test;
  BenchConfig config;
  config.methods = {"gnns", "naive", "mhrw"};
  config.samples = 1024;
  config.seed = 5;
  config.match_kept = true;
  config.dataset = "elec-scale synthetic";
  run.report = run_benchmark(run.test, config, &run.params);
  run.seconds = seconds_since(start);
  return run;
}

const BenchRow* row_of(const BenchReport& r, const std::string& method) {
  for (const auto& row : r.rows)
    if (row.method == method) return &row;
  return nullptr;
}

Outcome end_to_end_accuracy(const ElecRun& run) {
  const BenchRow* g = row_of(run.report, "gnns");
  const BenchRow* n = row_of(run.report, "naive");
  const BenchRow* m = row_of(run.report, "mhrw");
  if (!g || !n || !m) return {false, "missing benchmark rows"};
  std::ostringstream detail;
  detail << "GNNS MSE " << g->mse_mean << ", naive " << n->mse_mean << " (ratio "
         << g->mse_mean / n->mse_mean << "), MHRW " << m->mse_mean << "; " << run.seconds
         << " s incl. training";
  const bool ok = g->mse_mean <= 1e-2 && g->mse_mean <= 2.0 * n->mse_mean && run.seconds < 1800.0;
  return {ok, detail.str()};
}

Outcome speed_ordering(const ElecRun& run) {
  const BenchRow* g = row_of(run.report, "gnns");
  const BenchRow* m = row_of(run.report, "mhrw");
  if (!g || !m) return {false, "missing benchmark rows"};
  std::ostringstream detail;
  detail << "GNNS " << g->wall_time_s << " s, MHRW " << m->wall_time_s << " s (speedup "
         << m->wall_time_s / g->wall_time_s << "x) over " << g->graphs << " test graphs";
  return {g->wall_time_s * 10.0 <= m->wall_time_s, detail.str()};
}

Outcome determinism(const ElecRun& run) {
  const Graph& g = run.test.front();
  std::vector<std::pair<std::string, std::function<FrequencyDistribution()>>> runs = {
      {"exact", [&] { return exact_distribution(g, 1); }},
      {"naive k=4", [&] { return naive_sample(g, 4, 20000, 9); }},
      {"naive k=5", [&] { return naive_sample(g, 5, 20000, 9); }},
      {"mhrw k=4", [&] { return mhrw_sample(g, 4, 20000, std::nullopt, 9); }},
      {"mhrw k=5", [&] { return mhrw_sample(g, 5, 20000, std::nullopt, 9); }},
      {"naive combined",
       [&] { return combined_baseline_distribution(g, BaselineMethod::naive, 20000, 20000, 9); }},
      {"mhrw combined",
       [&] { return combined_baseline_distribution(g, BaselineMethod::mhrw, 20000, 20000, 9); }},
      {"gnns", [&] { return gnns::estimate_distribution(g, run.params, 1024, 9); }},
      {"gnns largest/uniform",
       [&] {
         return gnns::estimate_distribution(
             g, run.params, 1024, 9, {gnns::Harvest::largest, gnns::Weighting::uniform, 1});
       }},
  };
  std::ostringstream detail;
  bool ok = true;
  for (const auto& [name, fn] : runs) {
    const std::string a = to_json(fn(), false).dump();
    const std::string b = to_json(fn(), false).dump();
    if (a != b) {
      ok = false;
      detail << name << " differs; ";
    }
  }
  detail << runs.size() << " estimators compared";
  return {ok, detail.str()};
}

Outcome degree_preservation() {
  const auto start = Clock::now();
  std::size_t checked = 0, bad = 0;
  for (const Graph& source : {random_gnm(252, 397, 7), preferential_attachment(200, 2, 5)}) {
    const auto degrees = degree_sequence(source);
    const DatasetSplit data = generate_dataset(source, 1000, 13);
    for (const auto* part : {&data.train, &data.valid, &data.test})
      for (const Graph& g : *part) {
        ++checked;
        if (g.num_nodes() != source.num_nodes() || degree_sequence(g) != degrees) ++bad;
      }
  }
  std::ostringstream detail;
  detail << checked << " graphs from 2 sources, " << bad << " with a different degree sequence; "
         << seconds_since(start) << " s";
  return {bad == 0 && checked == 2000, detail.str()};
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const std::string& name, const Outcome& o) {
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  const auto guarded = [](const std::function<Outcome()>& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "canonical type completeness", guarded(canonical_completeness));
  report(2, "exact oracle equivalence", guarded(oracle_equivalence));
  report(3, "closed-form distributions", guarded(closed_forms));
  report(4, "MHRW convergence", guarded(mhrw_convergence));
  report(5, "gradient correctness", guarded(gradient_correctness));
  report(6, "training progress", guarded(training_progress));

  ElecRun run;
  std::string elec_error;
  try {
    run = elec_run();
  } catch (const std::exception& e) {
    elec_error = e.what();
  }
  const auto elec = [&](const std::function<Outcome()>& fn) {
    if (!elec_error.empty()) return Outcome{false, "exception: " + elec_error};
    return guarded(fn);
  };
  report(7, "end-to-end accuracy", elec([&] { return end_to_end_accuracy(run); }));
  report(8, "speed ordering", elec([&] { return speed_ordering(run); }));
  report(9, "determinism", elec([&] { return determinism(run); }));
  report(10, "degree preservation", guarded(degree_preservation));

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
