// sgf: command-line front end for exact counting, sampling, training,
// dataset generation and benchmarking.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgf/baselines.hpp"
#include "sgf/bench.hpp"
#include "sgf/dataset.hpp"
#include "sgf/error.hpp"
#include "sgf/exact.hpp"
#include "sgf/gnns.hpp"

namespace {

using namespace sgf;

struct Common {
  std::string graph;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool no_timing = false;
  bool numeric_ids = false;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
}

void emit_distribution(const FrequencyDistribution& d, const Common& c) {
  if (c.format == "csv")
    emit(to_csv(d), c.out);
  else
    emit(to_json(d, !c.no_timing).dump(2) + "\n", c.out);
}

Graph load_graph(const Common& c, std::optional<std::size_t> num_nodes = std::nullopt) {
  if (c.graph.empty()) throw ConfigError("--graph is required");
  EdgeListOptions options;
  options.numeric_ids = c.numeric_ids || num_nodes.has_value();
  options.num_nodes = num_nodes;
  return read_edge_list_file(c.graph, options).graph;
}

int parse_k(const std::string& k) {
  if (k == "both") return 0;
  if (k == "4") return 4;
  if (k == "5") return 5;
  throw ConfigError("--k must be 4, 5 or both");
}

void add_common(CLI::App* cmd, Common& c, bool graph = true) {
  if (graph) cmd->add_option("--graph", c.graph, "Edge-list file");
  cmd->add_option("--out", c.out, "Output file (default stdout)");
  cmd->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  cmd->add_flag("--no-timing", c.no_timing, "Omit wall times so output is reproducible");
  cmd->add_flag("--numeric-ids", c.numeric_ids, "Use integer labels as node indices");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subgraph frequency distribution estimation"};
  app.require_subcommand(1);

  Common common;
  std::string k = "both";
  std::string method = "naive";
  std::uint64_t samples = 1024;
  std::optional<std::uint64_t> burn_in;
  std::string checkpoint;
  std::string harvest = "all", weighting = "inclusion";
  std::string dataset_dir;

  auto* exact_cmd = app.add_subcommand("exact", "Exact 4/5-node distribution by enumeration");
  add_common(exact_cmd, common);
  exact_cmd->add_option("--k", k, "4, 5 or both");

  auto* sample_cmd = app.add_subcommand("sample", "Estimate the distribution by sampling");
  add_common(sample_cmd, common);
  sample_cmd->add_option("--method", method, "naive, mhrw or gnns");
  sample_cmd->add_option("--k", k, "4, 5 or both (baselines)");
  sample_cmd->add_option("--samples", samples, "Draws per size (baselines) or M (gnns)");
  sample_cmd->add_option("--burn-in", burn_in, "MHRW burn-in steps (default 10|E|)");
  sample_cmd->add_option("--checkpoint", checkpoint, "Trained GNNS checkpoint");
  sample_cmd->add_option("--harvest", harvest, "gnns: all or largest");
  sample_cmd->add_option("--weighting", weighting, "gnns: inclusion or uniform");

  gnns::TrainConfig tc;
  std::string log_path;
  auto* train_cmd = app.add_subcommand("train", "Train the GNNS sampler on a dataset");
  add_common(train_cmd, common, false);
  train_cmd->add_option("--dataset-dir", dataset_dir, "Directory written by gen-dataset")->required();
  train_cmd->add_option("--checkpoint", checkpoint, "Checkpoint output path")->required();
  train_cmd->add_option("--samples", tc.samples, "M subgraphs per graph per step");
  train_cmd->add_option("--epochs", tc.epochs);
  train_cmd->add_option("--lr", tc.learning_rate);
  train_cmd->add_option("--embed-dim", tc.model.embed_dim, "K");
  train_cmd->add_option("--hidden", tc.model.hidden);
  train_cmd->add_option("--types", tc.model.num_types, "T");
  train_cmd->add_option("--temperature", tc.model.temperature);
  train_cmd->add_option("--threshold", tc.model.threshold);
  train_cmd->add_option("--kl-weight", tc.loss.kl);
  train_cmd->add_option("--size-weight", tc.loss.size);
  train_cmd->add_option("--aux-weight", tc.loss.aux);
  train_cmd->add_option("--init-keep", tc.init.keep_prob, "Initial keep probability (0 = auto)");
  train_cmd->add_option("--log", log_path, "Training log CSV");

  std::size_t count = 1000;
  std::optional<std::uint64_t> swaps;
  std::size_t gnm_nodes = 0, gnm_edges = 0;
  auto* gen_cmd = app.add_subcommand("gen-dataset", "Degree-preserving rewired dataset");
  add_common(gen_cmd, common);
  gen_cmd->add_option("--dataset-dir", dataset_dir, "Output directory")->required();
  gen_cmd->add_option("--count", count, "Number of graphs (split 8:1:1)");
  gen_cmd->add_option("--swaps", swaps, "Swaps per graph (default 10|E|)");
  gen_cmd->add_option("--gnm-nodes", gnm_nodes, "Synthetic G(n,m) source: n");
  gen_cmd->add_option("--gnm-edges", gnm_edges, "Synthetic G(n,m) source: m");

  std::string methods = "naive,mhrw,gnns";
  std::string histogram_path;
  bool match_kept = false;
  std::string split = "test";
  auto* bench_cmd = app.add_subcommand("bench", "MSE and runtime table on a dataset split");
  add_common(bench_cmd, common, false);
  bench_cmd->add_option("--dataset-dir", dataset_dir)->required();
  bench_cmd->add_option("--split", split)->check(CLI::IsMember({"train", "valid", "test"}));
  bench_cmd->add_option("--methods", methods, "Comma-separated list");
  bench_cmd->add_option("--samples", samples);
  bench_cmd->add_option("--burn-in", burn_in);
  bench_cmd->add_option("--checkpoint", checkpoint);
  bench_cmd->add_option("--histogram-csv", histogram_path, "Mean per-type frequencies");
  bench_cmd->add_flag("--match-kept", match_kept, "Baselines get the GNNS kept count");
  bench_cmd->add_option("--harvest", harvest);
  bench_cmd->add_option("--weighting", weighting);

  auto* inspect_cmd = app.add_subcommand("inspect-checkpoint", "Print a checkpoint header");
  inspect_cmd->add_option("--checkpoint", checkpoint)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*exact_cmd) {
      const int kk = parse_k(k);
      const Graph g = load_graph(common);
      FrequencyDistribution d = exact_distribution(g, common.workers);
      if (kk) {
        nlohmann::json meta = d.meta;
        d = d.restricted_to(kk);
        d.meta = meta;
      }
      emit_distribution(d, common);
    } else if (*sample_cmd) {
      const int kk = parse_k(k);
      if (method == "gnns") {
        if (checkpoint.empty()) throw ConfigError("--method gnns requires --checkpoint");
        const auto params = gnns::load_checkpoint(checkpoint);
        const Graph g = load_graph(common, params.config.num_nodes);
        gnns::EstimateOptions options{gnns::parse_harvest(harvest), gnns::parse_weighting(weighting),
                                      common.workers};
        const auto d = gnns::estimate_distribution(g, params, samples, common.seed, options);
        if (d.empty()) std::cerr << "warning: no 4/5-node subgraph was kept\n";
        emit_distribution(d, common);
      } else {
        const BaselineMethod bm = parse_baseline_method(method);
        const Graph g = load_graph(common);
        FrequencyDistribution d;
        if (kk == 0)
          d = combined_baseline_distribution(g, bm, samples, samples, common.seed, burn_in);
        else if (bm == BaselineMethod::naive)
          d = naive_sample(g, kk, samples, common.seed);
        else
          d = mhrw_sample(g, kk, samples, burn_in, common.seed);
        if (d.empty()) std::cerr << "warning: no connected subgraph was sampled\n";
        emit_distribution(d, common);
      }
    } else if (*train_cmd) {
      const DatasetSplit data = read_dataset(dataset_dir);
      tc.seed = common.seed;
      tc.workers = common.workers;
      const auto result = gnns::train(data.train, tc);
      gnns::save_checkpoint(result.params, checkpoint);
      const std::string log = gnns::training_log_csv(result.log);
      if (!log_path.empty())
        emit(log, log_path);
      else
        std::cout << log;
    } else if (*gen_cmd) {
      Graph source;
      if (gnm_nodes > 0) {
        if (!common.graph.empty()) throw ConfigError("use either --graph or --gnm-nodes, not both");
        source = random_gnm(gnm_nodes, gnm_edges, derive_seed(common.seed, 0x5eed));
      } else {
        source = load_graph(common);
      }
      const DatasetSplit data = generate_dataset(source, count, common.seed, swaps, common.workers);
      write_dataset(data, dataset_dir, &source);
      std::cout << "wrote " << data.size() << " graphs (" << data.train.size() << '/'
                << data.valid.size() << '/' << data.test.size() << ") to " << dataset_dir << '\n';
    } else if (*bench_cmd) {
      const DatasetSplit data = read_dataset(dataset_dir);
      BenchConfig config;
      config.methods.clear();
      std::stringstream list(methods);
      for (std::string m; std::getline(list, m, ',');)
        if (!m.empty()) config.methods.push_back(m);
      config.dataset = dataset_dir;
      config.samples = samples;
      config.burn_in = burn_in;
      config.seed = common.seed;
      config.checkpoint = checkpoint;
      config.match_kept = match_kept;
      config.gnns = {gnns::parse_harvest(harvest), gnns::parse_weighting(weighting), 1};
      config.workers = common.workers;
      const auto& graphs = split == "train" ? data.train : split == "valid" ? data.valid : data.test;
      const BenchReport report = run_benchmark(graphs, config);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
      if (common.format == "csv")
        emit(to_csv(report), common.out);
      else
        emit(to_json(report, !common.no_timing).dump(2) + "\n", common.out);
      if (!histogram_path.empty()) emit(histogram_csv(report), histogram_path);
    } else if (*inspect_cmd) {
      std::cout << gnns::checkpoint_header(checkpoint).dump(2) << '\n';
    }
  } catch (const sgf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
