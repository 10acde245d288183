#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgf/baselines.hpp"
#include "sgf/dataset.hpp"
#include "sgf/error.hpp"
#include "sgf/exact.hpp"
#include "sgf/gnns.hpp"

namespace py = pybind11;
using namespace sgf;

namespace {

std::string dump(const FrequencyDistribution& d, bool include_timing) {
  return to_json(d, include_timing).dump();
}

FrequencyDistribution load(const std::string& text) {
  return distribution_from_json(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_sgf, m) {
  m.doc() = "Subgraph frequency distribution estimation (C++ core)";

  static py::exception<Error> base(m, "SgfError");
  static py::exception<ConfigError> config(m, "ConfigError", base.ptr());
  static py::exception<DataError> data(m, "DataError", base.ptr());
  static py::exception<NumericError> numeric(m, "NumericError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config, e.what());
    } catch (const DataError& e) {
      py::set_error(data, e.what());
    } catch (const NumericError& e) {
      py::set_error(numeric, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<Graph>(m, "Graph")
      .def(py::init([](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
             return Graph(n, edges);
           }),
           py::arg("num_nodes"), py::arg("edges"))
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def("edges",
           [](const Graph& g) {
             std::vector<std::pair<NodeId, NodeId>> out;
             for (const auto& e : g.edges()) out.emplace_back(e.u, e.v);
             return out;
           })
      .def("neighbors",
           [](const Graph& g, NodeId v) {
             if (v >= g.num_nodes()) throw ArgumentError("node out of range");
             auto span = g.neighbors(v);
             return std::vector<NodeId>(span.begin(), span.end());
           })
      .def("degree_sequence", [](const Graph& g) { return degree_sequence(g); })
      .def("has_edge", &Graph::has_edge)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.num_nodes()) + " m=" + std::to_string(g.num_edges()) + ">";
      });

  m.def(
      "read_edge_list",
      [](const std::string& path, bool numeric_ids) {
        EdgeListOptions options;
        options.numeric_ids = numeric_ids;
        auto parsed = read_edge_list_file(path, options);
        return py::make_tuple(parsed.graph, parsed.labels);
      },
      py::arg("path"), py::arg("numeric_ids") = false);
  m.def(
      "parse_edge_list",
      [](const std::string& text) {
        auto parsed = parse_edge_list(text);
        return py::make_tuple(parsed.graph, parsed.labels);
      },
      py::arg("text"));
  m.def(
      "induced_subgraph",
      [](const Graph& g, const std::vector<NodeId>& nodes) { return induced_subgraph(g, nodes); },
      py::arg("graph"), py::arg("nodes"));
  m.def("connected_components", &connected_components, py::arg("graph"));

  m.def("canonical_code", [](const Graph& g) { return canonical_code(g).str(); }, py::arg("graph"));
  m.def("alias", [](const std::string& code) { return alias(CanonicalCode::parse(code)); }, py::arg("code"));
  m.def(
      "connected_types",
      [](int k) {
        std::vector<std::string> out;
        for (const auto& c : connected_types(k)) out.push_back(c.str());
        return out;
      },
      py::arg("k"));

  m.def(
      "exact_distribution_json",
      [](const Graph& g, std::size_t workers) {
        py::gil_scoped_release release;
        return dump(exact_distribution(g, workers), true);
      },
      py::arg("graph"), py::arg("workers") = 1);
  m.def(
      "naive_sample_json",
      [](const Graph& g, int k, std::uint64_t samples, std::uint64_t seed) {
        py::gil_scoped_release release;
        return dump(naive_sample(g, k, samples, seed), true);
      },
      py::arg("graph"), py::arg("k"), py::arg("samples"), py::arg("seed") = 0);
  m.def(
      "mhrw_sample_json",
      [](const Graph& g, int k, std::uint64_t steps, std::optional<std::uint64_t> burn_in,
         std::uint64_t seed) {
        py::gil_scoped_release release;
        return dump(mhrw_sample(g, k, steps, burn_in, seed), true);
      },
      py::arg("graph"), py::arg("k"), py::arg("steps"), py::arg("burn_in") = py::none(),
      py::arg("seed") = 0);
  m.def(
      "baseline_json",
      [](const Graph& g, const std::string& method, std::uint64_t s4, std::uint64_t s5,
         std::uint64_t seed, std::optional<std::uint64_t> burn_in) {
        const BaselineMethod bm = parse_baseline_method(method);
        py::gil_scoped_release release;
        return dump(combined_baseline_distribution(g, bm, s4, s5, seed, burn_in), true);
      },
      py::arg("graph"), py::arg("method"), py::arg("samples_4"), py::arg("samples_5"),
      py::arg("seed") = 0, py::arg("burn_in") = py::none());
  m.def(
      "mse_json", [](const std::string& a, const std::string& b) { return mse(load(a), load(b)); },
      py::arg("a"), py::arg("b"));
  m.def(
      "strip_timing_json",
      [](const std::string& text) { return dump(load(text), false); }, py::arg("distribution"));

  m.def(
      "double_edge_swap",
      [](const Graph& g, std::uint64_t n_swaps, std::uint64_t seed) {
        return double_edge_swap(g, n_swaps, seed).graph;
      },
      py::arg("graph"), py::arg("n_swaps"), py::arg("seed") = 0);
  m.def("random_gnm", &random_gnm, py::arg("n"), py::arg("m"), py::arg("seed") = 0);
  m.def(
      "generate_dataset",
      [](const Graph& source, std::size_t count, std::uint64_t seed,
         std::optional<std::uint64_t> n_swaps) {
        auto split = generate_dataset(source, count, seed, n_swaps);
        py::dict out;
        out["train"] = split.train;
        out["valid"] = split.valid;
        out["test"] = split.test;
        out["source_hash"] = split.source_hash;
        return out;
      },
      py::arg("source"), py::arg("count"), py::arg("seed") = 0, py::arg("n_swaps") = py::none());

  py::class_<gnns::GnnsParams>(m, "Model")
      .def_static(
          "initialize",
          [](std::size_t num_nodes, std::uint64_t seed, std::size_t embed_dim, std::size_t hidden,
             std::size_t num_types, double temperature) {
            gnns::ModelConfig c;
            c.num_nodes = num_nodes;
            c.embed_dim = embed_dim;
            c.hidden = hidden;
            c.num_types = num_types;
            c.temperature = temperature;
            return gnns::GnnsParams::initialize(c, seed);
          },
          py::arg("num_nodes"), py::arg("seed") = 0, py::arg("embed_dim") = 256,
          py::arg("hidden") = 64, py::arg("num_types") = 16, py::arg("temperature") = 0.5)
      .def_property_readonly("num_nodes", [](const gnns::GnnsParams& p) { return p.config.num_nodes; })
      .def_property_readonly("embed_dim", [](const gnns::GnnsParams& p) { return p.config.embed_dim; })
      .def_property_readonly("num_types", [](const gnns::GnnsParams& p) { return p.config.num_types; })
      .def_property_readonly("registry",
                             [](const gnns::GnnsParams& p) {
                               std::vector<std::string> out;
                               for (const auto& c : p.registry.codes()) out.push_back(c.str());
                               return out;
                             })
      .def("save", [](const gnns::GnnsParams& p, const std::string& path) { gnns::save_checkpoint(p, path); })
      .def("node_embeddings", [](const gnns::GnnsParams& p, const Graph& g) { return gnns::gcn_forward(g, p); });

  m.def("load_checkpoint", &gnns::load_checkpoint, py::arg("path"), py::arg("expected_nodes") = 0);
  m.def(
      "train",
      [](const std::vector<Graph>& graphs, std::size_t epochs, std::size_t samples,
         std::uint64_t seed, std::size_t embed_dim, std::size_t hidden, double learning_rate,
         double kl_weight) {
        gnns::TrainConfig c;
        c.epochs = epochs;
        c.samples = samples;
        c.seed = seed;
        c.model.embed_dim = embed_dim;
        c.model.hidden = hidden;
        c.learning_rate = learning_rate;
        c.loss.kl = kl_weight;
        gnns::TrainResult result;
        {
          py::gil_scoped_release release;
          result = gnns::train(graphs, c);
        }
        py::list log;
        for (const auto& e : result.log) {
          py::dict row;
          row["epoch"] = e.epoch;
          row["mean_loss"] = e.mean_loss;
          row["recon"] = e.recon;
          row["kl"] = e.kl;
          row["aux_type_acc"] = e.aux_type_acc;
          row["mean_component_size"] = e.mean_component_size;
          row["kept_fraction"] = e.kept_fraction;
          log.append(row);
        }
        return py::make_tuple(result.params, log);
      },
      py::arg("graphs"), py::arg("epochs") = 10, py::arg("samples") = 1024, py::arg("seed") = 0,
      py::arg("embed_dim") = 256, py::arg("hidden") = 64, py::arg("learning_rate") = 1e-3,
      py::arg("kl_weight") = 0.0);
  m.def(
      "estimate_distribution_json",
      [](const Graph& g, const gnns::GnnsParams& p, std::size_t samples, std::uint64_t seed,
         const std::string& harvest, const std::string& weighting, std::size_t workers) {
        gnns::EstimateOptions options{gnns::parse_harvest(harvest), gnns::parse_weighting(weighting),
                                      workers};
        py::gil_scoped_release release;
        return dump(gnns::estimate_distribution(g, p, samples, seed, options), true);
      },
      py::arg("graph"), py::arg("model"), py::arg("samples") = 1024, py::arg("seed") = 0,
      py::arg("harvest") = "all", py::arg("weighting") = "inclusion", py::arg("workers") = 1);
  m.def(
      "gradient_check",
      [](const gnns::GnnsParams& p, const Graph& g, std::uint64_t seed) {
        return gnns::gradient_check(p, g, seed).max_relative_error;
      },
      py::arg("model"), py::arg("graph"), py::arg("seed") = 0);
}
