#include <doctest.h>

#include "helpers.hpp"
#include "sgf/bench.hpp"
#include "sgf/dataset.hpp"
#include "sgf/error.hpp"
#include "sgf/exact.hpp"
#include "sgf/random.hpp"

using namespace sgf;

namespace {

FrequencyDistribution dist(std::map<CanonicalCode, double> counts) {
  FrequencyDistribution d;
  d.k_set = {4, 5};
  d.counts = std::move(counts);
  return d;
}

}  // namespace

TEST_CASE("mse") {
  const auto& t4 = connected_types(4);
  const auto x = t4[0], y = t4[1];
  const auto a = dist({{x, 1.0}});
  const auto b = dist({{x, 0.8}, {y, 0.2}});
  CHECK(mse(a, a) == 0.0);
  CHECK(mse(a, b) == doctest::Approx(0.04));
  // Scale of the counts does not matter, only frequencies.
  CHECK(mse(dist({{x, 50.0}}), dist({{x, 4.0}, {y, 1.0}})) == doctest::Approx(0.04));

  bool both_empty = false;
  CHECK(mse(dist({}), dist({}), &both_empty) == 0.0);
  CHECK(both_empty);
  CHECK(mse(a, dist({}), &both_empty) == doctest::Approx(1.0));
  CHECK_FALSE(both_empty);

  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    std::map<CanonicalCode, double> ca, cb;
    for (const auto& c : connected_types(5)) {
      if (uniform01(rng) < 0.5) ca[c] = uniform01(rng);
      if (uniform01(rng) < 0.5) cb[c] = uniform01(rng);
    }
    CHECK(mse(dist(ca), dist(cb)) == mse(dist(cb), dist(ca)));
  }
  CHECK(max_abs_difference(a, b) == doctest::Approx(0.2));
}

TEST_CASE("distribution json round trip and timing strip") {
  const auto d = exact_distribution(testg::cycle(5));
  const auto j = to_json(d);
  CHECK(j["schema"] == 1);
  CHECK(j["total"] == 6.0);
  CHECK(j["entries"][0]["alias"] == "4-path");
  CHECK(j["entries"][0]["freq"].get<double>() == doctest::Approx(5.0 / 6.0));
  const auto back = distribution_from_json(j);
  CHECK(back.counts == d.counts);
  auto timed = d;
  timed.meta["wall_time_s"] = 1.5;
  CHECK(to_json(timed).contains("meta"));
  CHECK(to_json(timed)["meta"].contains("wall_time_s"));
  CHECK_FALSE(to_json(timed, false)["meta"].contains("wall_time_s"));
  const std::string csv = to_csv(d);
  CHECK(csv.rfind("code,alias,k,count,freq\n", 0) == 0);
}

TEST_CASE("benchmark harness") {
  const Graph src = random_gnm(24, 40, 2);
  const auto data = generate_dataset(src, 10, 3);
  std::vector<Graph> graphs(data.train);
  graphs.insert(graphs.end(), data.test.begin(), data.test.end());
  graphs.insert(graphs.end(), data.valid.begin(), data.valid.end());

  gnns::TrainConfig tc;
  tc.model.hidden = 8;
  tc.model.embed_dim = 8;
  tc.model.mlp_hidden = 8;
  tc.samples = 32;
  tc.epochs = 1;
  const auto trained = gnns::train(graphs, tc);

  BenchConfig config;
  config.samples = 2000;
  config.seed = 4;
  const auto report = run_benchmark(graphs, config, &trained.params);
  REQUIRE(report.rows.size() == 3);
  for (const auto& row : report.rows) {
    CHECK(row.wall_time_s > 0.0);
    CHECK(row.graphs == 10);
    CHECK(row.mse_mean >= 0.0);
  }
  CHECK(report.rows[0].method == "naive");
  CHECK(report.rows[2].method == "gnns");
  CHECK(report.per_graph.size() == 30);
  CHECK(report.mean_frequencies.count("exact") == 1);

  const auto again = run_benchmark(graphs, config, &trained.params);
  CHECK(to_json(report, false) == to_json(again, false));
  CHECK(to_json(report)["schema"] == 1);
  CHECK(to_csv(report).find("naive") != std::string::npos);
  CHECK(histogram_csv(report).rfind("method,code,alias,k,mean_freq\n", 0) == 0);

  BenchConfig matched = config;
  matched.methods = {"gnns", "naive", "mhrw"};
  matched.match_kept = true;
  const auto m = run_benchmark(graphs, matched, &trained.params);
  CHECK(m.rows.size() == 3);

  BenchConfig no_ckpt;
  CHECK_THROWS_AS(run_benchmark(graphs, no_ckpt), ConfigError);
  BenchConfig unknown;
  unknown.methods = {"wrw"};
  CHECK_THROWS_AS(run_benchmark(graphs, unknown), ConfigError);
  BenchConfig wrong_order = matched;
  wrong_order.methods = {"naive", "gnns"};
  CHECK_THROWS_AS(run_benchmark(graphs, wrong_order, &trained.params), ConfigError);
}
