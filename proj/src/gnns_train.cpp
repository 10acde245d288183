#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sgf/error.hpp"
#include "sgf/gnns.hpp"
#include "sgf/random.hpp"

namespace sgf::gnns {

namespace {

struct Adam {
  Weights m, v;
  std::size_t step = 0;

  explicit Adam(const Weights& like) : m(like.zeros_like()), v(like.zeros_like()) {}

  void update(Weights& w, Weights& grad, const TrainConfig& c) {
    ++step;
    const double b1t = 1.0 - std::pow(c.beta1, static_cast<double>(step));
    const double b2t = 1.0 - std::pow(c.beta2, static_cast<double>(step));
    auto wt = w.tensors();
    auto gt = grad.tensors();
    auto mt = m.tensors();
    auto vt = v.tensors();
    for (std::size_t i = 0; i < wt.size(); ++i) {
      auto& gi = *gt[i].second;
      *mt[i].second = c.beta1 * *mt[i].second + (1.0 - c.beta1) * gi;
      *vt[i].second = c.beta2 * *vt[i].second + (1.0 - c.beta2) * gi.cwiseProduct(gi);
      *wt[i].second -= (c.learning_rate * (*mt[i].second / b1t).array() /
                        ((*vt[i].second / b2t).array().sqrt() + c.adam_eps))
                           .matrix();
    }
  }
};

}  // namespace

TrainResult train(std::span<const Graph> dataset, const TrainConfig& config) {
  if (dataset.empty()) throw ConfigError("training needs at least one graph");
  if (config.samples == 0) throw ConfigError("samples per step must be positive");
  if (!(config.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  const std::size_t n = dataset.front().num_nodes();
  for (const auto& g : dataset)
    if (g.num_nodes() != n) throw ConfigError("training graphs disagree on node count");

  ModelConfig mc = config.model;
  mc.num_nodes = n;
  TrainResult result;
  result.params = GnnsParams::initialize(mc, derive_seed(config.seed, 0), config.init,
                                         &dataset.front());
  GnnsParams& params = result.params;

  std::vector<GraphInput> inputs;
  inputs.reserve(dataset.size());
  for (const auto& g : dataset) inputs.emplace_back(g);

  Adam adam(params.weights);
  Rng order_rng(derive_seed(config.seed, 1));
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[uniform_below(order_rng, i)]);
    EpochLog log;
    log.epoch = epoch;
    std::size_t steps = 0;
    for (std::size_t gi : order) {
      const Graph& g = dataset[gi];
      const std::uint64_t step_seed = derive_seed(derive_seed(config.seed, 2 + epoch), gi);
      const Eigen::MatrixXd z = encode(inputs[gi], params).z;
      auto sampled = draw_subgraphs(g, z, params, config.samples, step_seed, config.workers);
      std::vector<Draw> draws;
      draws.reserve(sampled.size());
      std::size_t kept = 0;
      for (auto& s : sampled) {
        Draw d{std::move(s.nodes), std::move(s.noise), -1};
        if (d.nodes.size() == 4 || d.nodes.size() == 5) {
          d.label = static_cast<int>(params.registry.index(classify_connected(g, d.nodes)));
          ++kept;
        }
        draws.push_back(std::move(d));
      }
      if (draws.empty()) continue;

      Weights grad;
      const LossTerms terms = objective(inputs[gi], params, draws, config.loss, &grad);
      if (!std::isfinite(terms.total) || !grad.all_finite())
        throw NumericError("non-finite loss or gradient at epoch " + std::to_string(epoch));
      adam.update(params.weights, grad, config);
      if (!params.weights.all_finite())
        throw NumericError("non-finite parameters at epoch " + std::to_string(epoch));

      log.mean_loss += terms.total;
      log.recon += terms.recon;
      log.kl += terms.kl;
      log.aux_type_acc += terms.aux_accuracy;
      log.mean_component_size += terms.mean_component_size;
      log.kept_fraction += static_cast<double>(kept) / static_cast<double>(config.samples);
      ++steps;
    }
    if (steps == 0) throw NumericError("every draw was empty in epoch " + std::to_string(epoch));
    const double s = static_cast<double>(steps);
    log.mean_loss /= s;
    log.recon /= s;
    log.kl /= s;
    log.aux_type_acc /= s;
    log.mean_component_size /= s;
    log.kept_fraction /= s;
    result.log.push_back(log);
  }
  return result;
}

std::string training_log_csv(std::span<const EpochLog> log) {
  std::ostringstream out;
  out.precision(10);
  out << "epoch,mean_loss,recon,kl,aux_type_acc,mean_component_size\n";
  for (const auto& e : log)
    out << e.epoch << ',' << e.mean_loss << ',' << e.recon << ',' << e.kl << ','
        << e.aux_type_acc << ',' << e.mean_component_size << '\n';
  return out.str();
}

}  // namespace sgf::gnns
