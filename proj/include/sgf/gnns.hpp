#pragma once

// Learned subgraph sampler: a two-layer GCN encoder produces node embeddings,
// a relaxed-Bernoulli node mask selects nodes, the largest connected
// component of the mask is the sampled subgraph, and a per-type bilinear
// decoder reconstructs the edges inside sampled subgraphs.

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "sgf/distribution.hpp"
#include "sgf/graph.hpp"
#include "sgf/graphlet_types.hpp"

namespace sgf::gnns {

struct ModelConfig {
  std::size_t num_nodes = 0;    // N, width of the one-hot input
  std::size_t hidden = 64;      // GCN hidden width
  std::size_t embed_dim = 256;  // K
  std::size_t mlp_hidden = 64;
  std::size_t num_types = 16;   // T, also the registry capacity
  double temperature = 0.5;     // relaxed Bernoulli tau
  double threshold = 0.5;       // hard-mask threshold theta on the soft mask
};

// Trainable tensors; vectors are single-column matrices so every tensor can
// be visited the same way (optimizer, gradient check, checkpoint).
struct Weights {
  Eigen::MatrixXd w0;      // N x H
  Eigen::MatrixXd w1;      // H x K
  Eigen::MatrixXd keep_w;  // K x 1, node-keep logit head
  Eigen::MatrixXd keep_b;  // 1 x 1
  Eigen::MatrixXd mlp_w1;  // Hm x K
  Eigen::MatrixXd mlp_b1;  // Hm x 1
  Eigen::MatrixXd mlp_w2;  // T x Hm
  Eigen::MatrixXd mlp_b2;  // T x 1
  std::vector<Eigen::MatrixXd> interactions;  // T matrices, K x K

  std::vector<std::pair<std::string, Eigen::MatrixXd*>> tensors();
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> tensors() const;
  Weights zeros_like() const;
  bool all_finite() const;
  std::size_t parameter_count() const;
};

struct InitOptions {
  // Initial node-keep probability. 0 picks half the bond-percolation
  // threshold of the reference graph, <k>/<k(k-1)>, clamped to [0.01, 0.5].
  double keep_prob = 0.0;
  bool zero_interactions = false;
};

struct GnnsParams {
  ModelConfig config;
  Weights weights;
  TypeRegistry registry{16};

  // `reference` (optional) sets the automatic initial keep probability.
  static GnnsParams initialize(const ModelConfig& config, std::uint64_t seed,
                               const InitOptions& init = {}, const Graph* reference = nullptr);
};

// Symmetric-normalized adjacency with self-loops, D^-1/2 (A + I) D^-1/2.
Eigen::SparseMatrix<double> normalized_adjacency(const Graph& g);

struct GraphInput {
  explicit GraphInput(const Graph& g) : graph(&g), a_hat(normalized_adjacency(g)) {}
  const Graph* graph;
  Eigen::SparseMatrix<double> a_hat;
};

// Forward cache of the encoder.
struct Encoding {
  Eigen::MatrixXd h0;           // A_hat W0 (pre-activation), N x H
  Eigen::MatrixXd p;            // A_hat relu(h0), N x H
  Eigen::MatrixXd z;            // node embeddings Z_n, N x K
  Eigen::VectorXd keep_logits;  // Z_n keep_w + keep_b
};

Encoding encode(const GraphInput& input, const GnnsParams& params);

// Z_n = A_hat relu(A_hat X W0) W1 with X the identity. Throws ConfigError if
// the graph's node count differs from the model's N.
Eigen::MatrixXd gcn_forward(const Graph& g, const GnnsParams& params);

Eigen::VectorXd keep_logits(const Eigen::MatrixXd& z_n, const GnnsParams& params);

// sigmoid((logit + log u - log(1-u)) / tau). Throws ArgumentError for tau <= 0
// or u outside (0, 1).
double relaxed_bernoulli(double logit, double tau, double u);

inline double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

struct SampledSubgraph {
  NodeSet nodes;             // largest connected component of the hard mask
  Eigen::VectorXd soft_mask;  // N relaxed mask values
  Eigen::VectorXd z_s;        // sum over nodes of soft_mask_i * Z_n[i]
  Eigen::VectorXd z_t;        // type logits, mlp(z_s)
  Eigen::VectorXd noise;      // logistic noise log u - log(1-u) per node

  bool empty() const { return nodes.empty(); }
};

Eigen::VectorXd subgraph_embedding(const Eigen::MatrixXd& z_n, std::span<const NodeId> nodes,
                                   const Eigen::VectorXd& soft_mask);
Eigen::VectorXd type_logits(const GnnsParams& params, const Eigen::VectorXd& z_s);

// One draw: per-node uniform u from `seed`, soft mask via relaxed_bernoulli
// on the keep logits, hard set {i : soft_mask_i > theta}, then its largest
// connected component. An empty hard set gives an empty subgraph.
SampledSubgraph sample_subgraph(const Graph& g, const Eigen::MatrixXd& z_n,
                                const GnnsParams& params, std::uint64_t seed);

inline constexpr int kMaxResamples = 8;

// sample_subgraph with up to kMaxResamples retries on empty draws. Slots use
// seeds derived from (seed, slot), so the multiset of results does not depend
// on `workers`. Slots still empty after the retries are omitted.
std::vector<SampledSubgraph> draw_subgraphs(const Graph& g, const Eigen::MatrixXd& z_n,
                                            const GnnsParams& params, std::size_t count,
                                            std::uint64_t seed, std::size_t workers = 1);

// Edge probabilities p(e_ij | m) = sigmoid(z_i^T S_m z_j) for every pair in
// every subgraph, where S_m is the symmetrized soft type mixture
// sum_t softmax(z_t)_t I_t.
struct EdgeProbabilities {
  std::vector<Eigen::MatrixXd> per_subgraph;  // |nodes| x |nodes|, diagonal unused
  // Mean over the subgraphs containing each pair (u < v, host indices).
  std::map<std::pair<NodeId, NodeId>, double> aggregate;
};

Eigen::MatrixXd type_mixture(const GnnsParams& params, const Eigen::VectorXd& z_t);

EdgeProbabilities decode_edges(const Eigen::MatrixXd& z_n,
                               std::span<const SampledSubgraph> subgraphs,
                               const GnnsParams& params);

inline constexpr double kLikelihoodClamp = 1e-7;

// sum_i KL(Bernoulli(sigmoid(l_i)) || Bernoulli(0.5)).
double kl_to_half_prior(const Eigen::VectorXd& logits);

struct ElboTerms {
  double recon = 0.0;  // mean Bernoulli log-likelihood (<= 0)
  double kl = 0.0;     // sum_i KL(Bernoulli(sigmoid(l_i)) || Bernoulli(0.5))
  double loss = 0.0;   // -recon + kl
};

// Throws ArgumentError when no subgraph has at least 2 nodes.
ElboTerms elbo_loss(const Graph& g, std::span<const SampledSubgraph> subgraphs,
                    const EdgeProbabilities& edge_probs, const Eigen::MatrixXd& z_n,
                    const GnnsParams& params, double clamp = kLikelihoodClamp);

// ---- training objective with analytic gradients ---------------------------

struct LossWeights {
  // The summed KL over all N nodes outweighs the per-pair reconstruction
  // term and drags keep probabilities to 0.5 (giant components), so it is
  // reported but not weighted by default.
  double kl = 0.0;
  double size = 0.1;          // lambda of lambda * (E[mask sum] - target)^2
  double size_target = 4.5;
  double aux = 1.0;           // type cross-entropy against exact codes
  double clamp = kLikelihoodClamp;
};

// A draw with its randomness frozen: the component and the logistic noise.
// `label` is the registry index of the component's exact type, or -1.
struct Draw {
  NodeSet nodes;
  Eigen::VectorXd noise;
  int label = -1;
};

struct LossTerms {
  double total = 0.0;
  double recon = 0.0;
  double kl = 0.0;
  double size_penalty = 0.0;
  double aux = 0.0;
  double aux_accuracy = 0.0;
  double mean_component_size = 0.0;
  double mean_mask_sum = 0.0;
  std::size_t draws = 0;    // non-empty draws
  std::size_t labeled = 0;  // draws with a 4/5-node component
};

// -recon + kl_w * KL + lambda (mean mask sum - target)^2 + aux_w * CE.
// When `grad` is non-null it receives d(total)/d(weights) (overwritten).
LossTerms objective(const GraphInput& input, const GnnsParams& params,
                    std::span<const Draw> draws, const LossWeights& weights,
                    Weights* grad = nullptr);

struct GradCheckOptions {
  std::size_t draws = 4;
  double step = 1e-4;
  std::size_t max_entries_per_tensor = 0;  // 0 checks every entry
  LossWeights loss;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::map<std::string, double> per_tensor;
};

// Central differences for every scalar parameter against the analytic
// gradient, with the sampled components and noise held fixed. Per-tensor
// error is |analytic - numeric| / max(|analytic| + |numeric|, 1e-6).
GradCheckResult gradient_check(const GnnsParams& params, const Graph& g, std::uint64_t seed,
                               const GradCheckOptions& options = {});

// ---- training --------------------------------------------------------------

struct TrainConfig {
  ModelConfig model;  // num_nodes is taken from the dataset
  InitOptions init;
  LossWeights loss;
  std::size_t epochs = 10;
  std::size_t samples = 1024;  // M per graph per step
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

struct EpochLog {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double recon = 0.0;
  double kl = 0.0;
  double aux_type_acc = 0.0;
  double mean_component_size = 0.0;
  double kept_fraction = 0.0;
};

struct TrainResult {
  GnnsParams params;
  std::vector<EpochLog> log;
};

// One Adam step per graph per epoch. Throws NumericError on a non-finite
// loss or parameter, ConfigError when graphs disagree on node count.
TrainResult train(std::span<const Graph> dataset, const TrainConfig& config);

std::string training_log_csv(std::span<const EpochLog> log);

// ---- estimation ------------------------------------------------------------

enum class Harvest {
  all,      // every 4/5-node component of each hard mask
  largest,  // only the largest component (the sampled subgraph itself)
};

enum class Weighting {
  inclusion,  // 1 / P(component appears in a draw): unbiased count estimates
  uniform,    // raw histogram of kept subgraphs
};

struct EstimateOptions {
  Harvest harvest = Harvest::all;
  Weighting weighting = Weighting::inclusion;
  std::size_t workers = 1;
};

// Draws M hard masks from the trained sampler, keeps components with 4 or 5
// nodes, classifies each by exact canonical code and returns the normalized
// (optionally inclusion-weighted) histogram. meta carries kept counts,
// kept_fraction, m_effective and wall_time_s (forward + sampling).
FrequencyDistribution estimate_distribution(const Graph& g, const GnnsParams& params,
                                            std::size_t samples, std::uint64_t seed,
                                            const EstimateOptions& options = {});

Harvest parse_harvest(const std::string& name);
Weighting parse_weighting(const std::string& name);

// ---- checkpoint ------------------------------------------------------------

// Binary container: magic, version, JSON header (config, registry, tensor
// shapes), then little-endian doubles. load rejects a node-count mismatch
// when expected_nodes is non-zero.
void save_checkpoint(const GnnsParams& params, const std::string& path);
GnnsParams load_checkpoint(const std::string& path, std::size_t expected_nodes = 0);
nlohmann::json checkpoint_header(const std::string& path);

}  // namespace sgf::gnns
