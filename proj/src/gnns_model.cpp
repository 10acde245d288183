#include <algorithm>
#include <cmath>

#include "sgf/error.hpp"
#include "sgf/gnns.hpp"
#include "sgf/parallel.hpp"
#include "sgf/random.hpp"

namespace sgf::gnns {

std::vector<std::pair<std::string, Eigen::MatrixXd*>> Weights::tensors() {
  std::vector<std::pair<std::string, Eigen::MatrixXd*>> out = {
      {"w0", &w0},         {"w1", &w1},         {"keep_w", &keep_w}, {"keep_b", &keep_b},
      {"mlp_w1", &mlp_w1}, {"mlp_b1", &mlp_b1}, {"mlp_w2", &mlp_w2}, {"mlp_b2", &mlp_b2}};
  for (std::size_t t = 0; t < interactions.size(); ++t)
    out.emplace_back("interaction_" + std::to_string(t), &interactions[t]);
  return out;
}

std::vector<std::pair<std::string, const Eigen::MatrixXd*>> Weights::tensors() const {
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> out;
  for (auto& [name, ptr] : const_cast<Weights*>(this)->tensors()) out.emplace_back(name, ptr);
  return out;
}

Weights Weights::zeros_like() const {
  Weights out = *this;
  for (auto& [name, t] : out.tensors()) t->setZero();
  return out;
}

bool Weights::all_finite() const {
  for (const auto& [name, t] : tensors())
    if (!t->allFinite()) return false;
  return true;
}

std::size_t Weights::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : tensors()) n += static_cast<std::size_t>(t->size());
  return n;
}

namespace {

Eigen::MatrixXd glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = (2.0 * uniform01(rng) - 1.0) * limit;
  return m;
}

double automatic_keep_prob(const Graph* g) {
  if (!g || g->num_edges() == 0) return 0.1;
  double k1 = 0.0, k2 = 0.0;
  for (NodeId v = 0; v < g->num_nodes(); ++v) {
    const double d = static_cast<double>(g->degree(v));
    k1 += d;
    k2 += d * (d - 1.0);
  }
  if (k2 <= 0.0) return 0.5;
  return std::clamp(0.5 * k1 / k2, 0.01, 0.5);
}

}  // namespace

GnnsParams GnnsParams::initialize(const ModelConfig& config, std::uint64_t seed,
                                  const InitOptions& init, const Graph* reference) {
  if (config.num_nodes == 0 || config.hidden == 0 || config.embed_dim == 0 ||
      config.mlp_hidden == 0 || config.num_types == 0)
    throw ConfigError("model dimensions must be positive");
  if (!(config.temperature > 0.0)) throw ConfigError("temperature must be positive");
  if (!(config.threshold > 0.0 && config.threshold < 1.0))
    throw ConfigError("threshold must lie in (0, 1)");

  const auto n = static_cast<Eigen::Index>(config.num_nodes);
  const auto h = static_cast<Eigen::Index>(config.hidden);
  const auto k = static_cast<Eigen::Index>(config.embed_dim);
  const auto hm = static_cast<Eigen::Index>(config.mlp_hidden);
  const auto t = static_cast<Eigen::Index>(config.num_types);

  Rng rng(seed);
  GnnsParams p;
  p.config = config;
  p.registry = TypeRegistry(config.num_types);
  auto& w = p.weights;
  w.w0 = glorot(n, h, rng);
  w.w1 = glorot(h, k, rng);
  w.keep_w = glorot(k, 1, rng) * 0.1;
  const double keep = init.keep_prob > 0.0 ? init.keep_prob : automatic_keep_prob(reference);
  // The hard mask keeps node i with probability sigmoid(l_i - tau*logit(theta)).
  const double theta_shift = config.temperature * std::log(config.threshold / (1 - config.threshold));
  w.keep_b = Eigen::MatrixXd::Constant(1, 1, std::log(keep / (1.0 - keep)) + theta_shift);
  w.mlp_w1 = glorot(hm, k, rng);
  w.mlp_b1 = Eigen::MatrixXd::Zero(hm, 1);
  w.mlp_w2 = glorot(t, hm, rng);
  w.mlp_b2 = Eigen::MatrixXd::Zero(t, 1);
  w.interactions.resize(config.num_types);
  for (auto& m : w.interactions)
    m = init.zero_interactions ? Eigen::MatrixXd::Zero(k, k) : glorot(k, k, rng);
  return p;
}

Eigen::SparseMatrix<double> normalized_adjacency(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  std::vector<double> inv_sqrt(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v) + 1));
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.num_nodes() + 2 * g.num_edges());
  for (NodeId v = 0; v < g.num_nodes(); ++v) triplets.emplace_back(v, v, inv_sqrt[v] * inv_sqrt[v]);
  for (const auto& e : g.edges()) {
    const double value = inv_sqrt[e.u] * inv_sqrt[e.v];
    triplets.emplace_back(e.u, e.v, value);
    triplets.emplace_back(e.v, e.u, value);
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

namespace {

void check_node_count(const Graph& g, const GnnsParams& params) {
  if (g.num_nodes() != params.config.num_nodes)
    throw ConfigError("graph has " + std::to_string(g.num_nodes()) + " nodes but the model expects " +
                      std::to_string(params.config.num_nodes));
}

}  // namespace

Encoding encode(const GraphInput& input, const GnnsParams& params) {
  check_node_count(*input.graph, params);
  const auto& w = params.weights;
  Encoding enc;
  enc.h0 = input.a_hat * w.w0;
  enc.p = input.a_hat * enc.h0.cwiseMax(0.0);
  enc.z = enc.p * w.w1;
  enc.keep_logits = keep_logits(enc.z, params);
  return enc;
}

Eigen::MatrixXd gcn_forward(const Graph& g, const GnnsParams& params) {
  return encode(GraphInput(g), params).z;
}

Eigen::VectorXd keep_logits(const Eigen::MatrixXd& z_n, const GnnsParams& params) {
  if (z_n.cols() != params.weights.keep_w.rows())
    throw ConfigError("node embedding width does not match the keep head");
  return (z_n * params.weights.keep_w).col(0).array() + params.weights.keep_b(0, 0);
}

double relaxed_bernoulli(double logit, double tau, double u) {
  if (!(tau > 0.0)) throw ArgumentError("relaxed Bernoulli temperature must be positive");
  if (!(u > 0.0 && u < 1.0)) throw ArgumentError("relaxed Bernoulli draw must lie in (0, 1)");
  return sigmoid((logit + std::log(u) - std::log1p(-u)) / tau);
}

Eigen::VectorXd subgraph_embedding(const Eigen::MatrixXd& z_n, std::span<const NodeId> nodes,
                                   const Eigen::VectorXd& soft_mask) {
  Eigen::VectorXd z_s = Eigen::VectorXd::Zero(z_n.cols());
  for (NodeId i : nodes) z_s += soft_mask[i] * z_n.row(i).transpose();
  return z_s;
}

Eigen::VectorXd type_logits(const GnnsParams& params, const Eigen::VectorXd& z_s) {
  const auto& w = params.weights;
  const Eigen::VectorXd hidden = (w.mlp_w1 * z_s + w.mlp_b1.col(0)).cwiseMax(0.0);
  return w.mlp_w2 * hidden + w.mlp_b2.col(0);
}

namespace {

SampledSubgraph sample_with_logits(const Graph& g, const Eigen::MatrixXd& z_n,
                                   const Eigen::VectorXd& logits, const GnnsParams& params,
                                   std::uint64_t seed) {
  const double tau = params.config.temperature;
  const auto n = static_cast<Eigen::Index>(g.num_nodes());

  SampledSubgraph s;
  s.soft_mask.resize(n);
  s.noise.resize(n);
  SplitMix64 rng(seed);
  std::vector<NodeId> hard;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = uniform_open01(rng);
    s.noise[i] = std::log(u) - std::log1p(-u);
    s.soft_mask[i] = sigmoid((logits[i] + s.noise[i]) / tau);
    if (s.soft_mask[i] > params.config.threshold) hard.push_back(static_cast<NodeId>(i));
  }
  s.nodes = largest_connected_component(g, hard);
  s.z_s = subgraph_embedding(z_n, s.nodes, s.soft_mask);
  s.z_t = type_logits(params, s.z_s);
  return s;
}

void check_embeddings(const Graph& g, const Eigen::MatrixXd& z_n, const GnnsParams& params) {
  check_node_count(g, params);
  if (z_n.rows() != static_cast<Eigen::Index>(g.num_nodes()))
    throw ConfigError("node embeddings do not match the graph");
}

}  // namespace

SampledSubgraph sample_subgraph(const Graph& g, const Eigen::MatrixXd& z_n,
                                const GnnsParams& params, std::uint64_t seed) {
  check_embeddings(g, z_n, params);
  return sample_with_logits(g, z_n, keep_logits(z_n, params), params, seed);
}

std::vector<SampledSubgraph> draw_subgraphs(const Graph& g, const Eigen::MatrixXd& z_n,
                                            const GnnsParams& params, std::size_t count,
                                            std::uint64_t seed, std::size_t workers) {
  check_embeddings(g, z_n, params);
  const Eigen::VectorXd logits = keep_logits(z_n, params);
  std::vector<SampledSubgraph> slots(count);
  parallel_chunks(count, resolve_workers(workers), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t slot = b; slot < e; ++slot) {
      const std::uint64_t slot_seed = derive_seed(seed, slot);
      for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
        slots[slot] = sample_with_logits(g, z_n, logits, params, derive_seed(slot_seed, attempt));
        if (!slots[slot].empty()) break;
      }
    }
  });
  std::erase_if(slots, [](const SampledSubgraph& s) { return s.empty(); });
  return slots;
}

Eigen::MatrixXd type_mixture(const GnnsParams& params, const Eigen::VectorXd& z_t) {
  const Eigen::VectorXd shifted = (z_t.array() - z_t.maxCoeff()).exp().matrix();
  const Eigen::VectorXd probs = shifted / shifted.sum();
  const auto& inter = params.weights.interactions;
  Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(inter.front().rows(), inter.front().cols());
  for (std::size_t t = 0; t < inter.size(); ++t) mix += probs[static_cast<Eigen::Index>(t)] * inter[t];
  return mix;
}

EdgeProbabilities decode_edges(const Eigen::MatrixXd& z_n,
                               std::span<const SampledSubgraph> subgraphs,
                               const GnnsParams& params) {
  EdgeProbabilities out;
  std::map<std::pair<NodeId, NodeId>, std::pair<double, int>> sums;
  for (const auto& s : subgraphs) {
    const auto c = static_cast<Eigen::Index>(s.nodes.size());
    Eigen::MatrixXd zc(c, z_n.cols());
    for (Eigen::Index a = 0; a < c; ++a) zc.row(a) = z_n.row(s.nodes[a]);
    const Eigen::MatrixXd mix = type_mixture(params, s.z_t);
    const Eigen::MatrixXd sym = 0.5 * (mix + mix.transpose());
    Eigen::MatrixXd probs = (zc * sym * zc.transpose()).unaryExpr([](double x) { return sigmoid(x); });
    for (Eigen::Index a = 0; a < c; ++a)
      for (Eigen::Index b = a + 1; b < c; ++b) {
        auto& [sum, count] = sums[{s.nodes[a], s.nodes[b]}];
        sum += probs(a, b);
        ++count;
      }
    out.per_subgraph.push_back(std::move(probs));
  }
  for (const auto& [pair, acc] : sums) out.aggregate[pair] = acc.first / acc.second;
  return out;
}

namespace {

double bernoulli_kl_to_half(double logit) {
  // p log 2p + (1-p) log 2(1-p) with p = sigmoid(logit), in log-space.
  const double p = sigmoid(logit);
  const double log_p = -std::log1p(std::exp(-std::abs(logit))) + std::min(logit, 0.0);
  const double log_q = -std::log1p(std::exp(-std::abs(logit))) + std::min(-logit, 0.0);
  return p * log_p + (1.0 - p) * log_q + std::log(2.0);
}

}  // namespace

double kl_to_half_prior(const Eigen::VectorXd& logits) {
  double kl = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) kl += bernoulli_kl_to_half(logits[i]);
  return kl;
}

ElboTerms elbo_loss(const Graph& g, std::span<const SampledSubgraph> subgraphs,
                    const EdgeProbabilities& edge_probs, const Eigen::MatrixXd& z_n,
                    const GnnsParams& params, double clamp) {
  if (edge_probs.per_subgraph.size() != subgraphs.size())
    throw ArgumentError("edge probabilities do not match the subgraph list");
  double recon_sum = 0.0;
  std::size_t used = 0;
  for (std::size_t m = 0; m < subgraphs.size(); ++m) {
    const auto& nodes = subgraphs[m].nodes;
    if (nodes.size() < 2) continue;
    const auto& probs = edge_probs.per_subgraph[m];
    double ll = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        const double p = std::clamp(probs(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)),
                                    clamp, 1.0 - clamp);
        ll += g.has_edge(nodes[a], nodes[b]) ? std::log(p) : std::log1p(-p);
        ++pairs;
      }
    recon_sum += ll / static_cast<double>(pairs);
    ++used;
  }
  if (used == 0) throw ArgumentError("ELBO undefined: no sampled subgraph has two or more nodes");
  ElboTerms terms;
  terms.recon = recon_sum / static_cast<double>(used);
  terms.kl = kl_to_half_prior(keep_logits(z_n, params));
  terms.loss = -terms.recon + terms.kl;
  return terms;
}

}  // namespace sgf::gnns
