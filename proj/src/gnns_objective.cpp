#include <algorithm>
#include <cmath>

#include "sgf/error.hpp"
#include "sgf/gnns.hpp"
#include "sgf/random.hpp"

namespace sgf::gnns {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct DrawCache {
  Eigen::MatrixXd zc;      // c x K rows of Z
  Eigen::VectorXd mask;    // c soft mask values
  Eigen::VectorXd z_s;
  Eigen::VectorXd pre;     // MLP hidden pre-activation
  Eigen::VectorXd hidden;
  Eigen::VectorXd probs;   // softmax(z_t)
};

Eigen::VectorXd softmax(const Eigen::VectorXd& x) {
  const Eigen::VectorXd e = (x.array() - x.maxCoeff()).exp().matrix();
  return e / e.sum();
}

double log_sigmoid(double x) { return std::min(x, 0.0) - std::log1p(std::exp(-std::abs(x))); }

}  // namespace

LossTerms objective(const GraphInput& input, const GnnsParams& params,
                    std::span<const Draw> draws, const LossWeights& lw, Weights* grad) {
  const Graph& g = *input.graph;
  const Encoding enc = encode(input, params);
  const auto& w = params.weights;
  const RowMatrix z = enc.z;  // per-node rows are read in the draw loops
  const auto n = z.rows();
  const auto kdim = z.cols();
  const std::size_t types = w.interactions.size();
  const double tau = params.config.temperature;

  LossTerms terms;
  std::vector<DrawCache> cache;
  cache.reserve(draws.size());
  std::size_t n_recon = 0;
  double mask_sum_total = 0.0, size_total = 0.0;
  for (const auto& d : draws) {
    if (d.nodes.empty()) continue;
    if (d.noise.size() != n) throw ArgumentError("draw noise does not match the graph");
    DrawCache c;
    const auto cn = static_cast<Eigen::Index>(d.nodes.size());
    c.zc.resize(cn, kdim);
    c.mask.resize(cn);
    for (Eigen::Index a = 0; a < cn; ++a) {
      const NodeId i = d.nodes[a];
      c.zc.row(a) = z.row(i);
      c.mask[a] = sigmoid((enc.keep_logits[i] + d.noise[i]) / tau);
    }
    c.z_s = c.zc.transpose() * c.mask;
    c.pre = w.mlp_w1 * c.z_s + w.mlp_b1.col(0);
    c.hidden = c.pre.cwiseMax(0.0);
    c.probs = softmax(w.mlp_w2 * c.hidden + w.mlp_b2.col(0));
    mask_sum_total += c.mask.sum();
    size_total += static_cast<double>(cn);
    if (cn >= 2) ++n_recon;
    ++terms.draws;
    if (d.label >= 0) ++terms.labeled;
    cache.push_back(std::move(c));
  }
  if (terms.draws == 0) throw ArgumentError("objective needs at least one non-empty draw");

  // Symmetrized interaction matrices projected on Z: Qs_t = Z (I_t + I_t^T) / 2,
  // evaluated as P (W1 Isym_t) since Z = P W1 has rank at most H.
  std::vector<RowMatrix> qs(types);
  for (std::size_t t = 0; t < types; ++t) {
    const Eigen::MatrixXd v = w.w1 * (0.5 * (w.interactions[t] + w.interactions[t].transpose()));
    qs[t] = enc.p * v;
  }

  const double mean_mask = mask_sum_total / static_cast<double>(terms.draws);
  terms.mean_mask_sum = mean_mask;
  terms.mean_component_size = size_total / static_cast<double>(terms.draws);
  const double size_dev = mean_mask - lw.size_target;
  terms.size_penalty = lw.size * size_dev * size_dev;

  Eigen::VectorXd kl_grad = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = enc.keep_logits[i];
    const double p = sigmoid(l);
    terms.kl += p * log_sigmoid(l) + (1.0 - p) * log_sigmoid(-l) + std::log(2.0);
    kl_grad[i] = p * (1.0 - p) * l;
  }

  Weights* gr = grad;
  RowMatrix dz;
  Eigen::VectorXd dl;
  std::vector<std::vector<Eigen::Triplet<double>>> gt_triplets;
  if (gr) {
    *gr = w.zeros_like();
    dz = Eigen::MatrixXd::Zero(n, kdim);
    dl = lw.kl * kl_grad;
    gt_triplets.resize(types);
  }

  double recon_sum = 0.0, aux_sum = 0.0;
  std::size_t aux_hits = 0;
  std::size_t ci = 0;
  for (const auto& d : draws) {
    if (d.nodes.empty()) continue;
    const DrawCache& c = cache[ci++];
    const auto cn = c.zc.rows();
    Eigen::VectorXd dprobs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(types));
    Eigen::VectorXd dzt = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(types));

    if (cn >= 2) {
      Eigen::MatrixXd y = Eigen::MatrixXd::Zero(cn, kdim);  // Zc S
      for (std::size_t t = 0; t < types; ++t) {
        const double wt = c.probs[static_cast<Eigen::Index>(t)];
        for (Eigen::Index a = 0; a < cn; ++a) y.row(a) += wt * qs[t].row(d.nodes[a]);
      }
      const Eigen::MatrixXd x = y * c.zc.transpose();
      const double npairs = 0.5 * static_cast<double>(cn * (cn - 1));
      double ll = 0.0;
      Eigen::MatrixXd gm = Eigen::MatrixXd::Zero(cn, cn);
      for (Eigen::Index a = 0; a < cn; ++a)
        for (Eigen::Index b = a + 1; b < cn; ++b) {
          const double p = sigmoid(x(a, b));
          const bool edge = g.has_edge(d.nodes[a], d.nodes[b]);
          const double pc = std::clamp(p, lw.clamp, 1.0 - lw.clamp);
          ll += edge ? std::log(pc) : std::log1p(-pc);
          if (gr && p == pc) {
            const double gv = (p - (edge ? 1.0 : 0.0)) / (static_cast<double>(n_recon) * npairs);
            gm(a, b) = gm(b, a) = 0.5 * gv;
          }
        }
      recon_sum += ll / npairs;
      if (gr) {
        const Eigen::MatrixXd gz = gm * c.zc;  // c x K
        for (std::size_t t = 0; t < types; ++t) {
          double acc = 0.0;
          for (Eigen::Index a = 0; a < cn; ++a) acc += gz.row(a).dot(qs[t].row(d.nodes[a]));
          dprobs[static_cast<Eigen::Index>(t)] = acc;
          const double wt = c.probs[static_cast<Eigen::Index>(t)];
          for (Eigen::Index a = 0; a < cn; ++a)
            for (Eigen::Index b = 0; b < cn; ++b)
              if (gm(a, b) != 0.0)
                gt_triplets[t].emplace_back(d.nodes[a], d.nodes[b], wt * gm(a, b));
        }
        const Eigen::MatrixXd dzc = 2.0 * gm * y;
        for (Eigen::Index a = 0; a < cn; ++a) dz.row(d.nodes[a]) += dzc.row(a);
      }
    }

    if (d.label >= 0) {
      const auto label = static_cast<Eigen::Index>(d.label);
      if (label >= c.probs.size()) throw ArgumentError("draw label exceeds the type count");
      aux_sum -= std::log(std::max(c.probs[label], 1e-300));
      Eigen::Index arg;
      c.probs.maxCoeff(&arg);
      if (arg == label) ++aux_hits;
      if (gr) {
        Eigen::VectorXd ce = c.probs;
        ce[label] -= 1.0;
        dzt += lw.aux / static_cast<double>(terms.labeled) * ce;
      }
    }

    if (!gr) continue;
    // Softmax backward.
    dzt += c.probs.cwiseProduct(dprobs.array().matrix() -
                                Eigen::VectorXd::Constant(dprobs.size(), c.probs.dot(dprobs)));
    gr->mlp_w2 += dzt * c.hidden.transpose();
    gr->mlp_b2.col(0) += dzt;
    Eigen::VectorXd dh = w.mlp_w2.transpose() * dzt;
    for (Eigen::Index j = 0; j < dh.size(); ++j)
      if (c.pre[j] <= 0.0) dh[j] = 0.0;
    gr->mlp_w1 += dh * c.z_s.transpose();
    gr->mlp_b1.col(0) += dh;
    const Eigen::VectorXd dzs = w.mlp_w1.transpose() * dh;

    const double dsize = 2.0 * lw.size * size_dev / static_cast<double>(terms.draws);
    for (Eigen::Index a = 0; a < cn; ++a) {
      const NodeId i = d.nodes[a];
      dz.row(i) += c.mask[a] * dzs.transpose();
      const double dm = c.zc.row(a).dot(dzs) + dsize;
      dl[i] += dm * c.mask[a] * (1.0 - c.mask[a]) / tau;
    }
  }

  terms.recon = n_recon ? recon_sum / static_cast<double>(n_recon) : 0.0;
  terms.aux = terms.labeled ? aux_sum / static_cast<double>(terms.labeled) : 0.0;
  terms.aux_accuracy =
      terms.labeled ? static_cast<double>(aux_hits) / static_cast<double>(terms.labeled) : 0.0;
  terms.total = -terms.recon + lw.kl * terms.kl + terms.size_penalty + lw.aux * terms.aux;

  if (!gr) return terms;

  // Interaction gradients: dI_t = Z^T G_t Z = W1^T (P^T G_t P) W1 with
  // G_t = sum_m w_mt G_m.
  Eigen::SparseMatrix<double> gt(n, n);
  for (std::size_t t = 0; t < types; ++t) {
    if (gt_triplets[t].empty()) continue;
    gt.setFromTriplets(gt_triplets[t].begin(), gt_triplets[t].end());
    const Eigen::MatrixXd inner = enc.p.transpose() * (gt * enc.p);
    gr->interactions[t] = w.w1.transpose() * (inner * w.w1);
  }

  gr->keep_w = z.transpose() * dl;
  gr->keep_b(0, 0) = dl.sum();
  dz += dl * w.keep_w.transpose();

  gr->w1 = enc.p.transpose() * dz;
  const Eigen::MatrixXd dp = dz * w.w1.transpose();
  Eigen::MatrixXd dh0 = input.a_hat * dp;  // A_hat is symmetric
  dh0 = dh0.cwiseProduct((enc.h0.array() > 0.0).cast<double>().matrix());
  gr->w0 = input.a_hat * dh0;
  return terms;
}

namespace {

double tensor_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& f) {
  return (a - f).norm() / std::max(a.norm() + f.norm(), 1e-6);
}

}  // namespace

GradCheckResult gradient_check(const GnnsParams& params, const Graph& g, std::uint64_t seed,
                               const GradCheckOptions& options) {
  const GraphInput input(g);
  const Eigen::MatrixXd z = encode(input, params).z;
  TypeRegistry registry = params.registry;
  std::vector<Draw> draws;
  for (std::size_t i = 0; i < options.draws; ++i) {
    for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
      const auto s = sample_subgraph(g, z, params, derive_seed(derive_seed(seed, i), attempt));
      if (s.empty()) continue;
      Draw d{s.nodes, s.noise, -1};
      if (d.nodes.size() == 4 || d.nodes.size() == 5)
        d.label = static_cast<int>(registry.index(classify_connected(g, d.nodes)));
      draws.push_back(std::move(d));
      break;
    }
  }
  if (draws.empty()) throw NumericError("gradient check could not draw a non-empty subgraph");

  Weights analytic;
  objective(input, params, draws, options.loss, &analytic);

  GnnsParams probe = params;
  GradCheckResult result;
  auto analytic_tensors = analytic.tensors();
  auto probe_tensors = probe.weights.tensors();
  Rng pick(derive_seed(seed, 0x9c));
  for (std::size_t ti = 0; ti < probe_tensors.size(); ++ti) {
    Eigen::MatrixXd& tensor = *probe_tensors[ti].second;
    const Eigen::MatrixXd& a_full = *analytic_tensors[ti].second;
    const auto total = static_cast<std::size_t>(tensor.size());
    std::vector<std::size_t> entries(total);
    for (std::size_t e = 0; e < total; ++e) entries[e] = e;
    if (options.max_entries_per_tensor && total > options.max_entries_per_tensor) {
      for (std::size_t e = 0; e < options.max_entries_per_tensor; ++e)
        std::swap(entries[e], entries[e + uniform_below(pick, total - e)]);
      entries.resize(options.max_entries_per_tensor);
    }
    Eigen::VectorXd a(static_cast<Eigen::Index>(entries.size()));
    Eigen::VectorXd f(a.size());
    for (std::size_t e = 0; e < entries.size(); ++e) {
      double& x = tensor.data()[entries[e]];
      const double saved = x;
      x = saved + options.step;
      const double up = objective(input, probe, draws, options.loss).total;
      x = saved - options.step;
      const double down = objective(input, probe, draws, options.loss).total;
      x = saved;
      f[static_cast<Eigen::Index>(e)] = (up - down) / (2.0 * options.step);
      a[static_cast<Eigen::Index>(e)] = a_full.data()[entries[e]];
    }
    const double err = tensor_error(a, f);
    result.per_tensor[probe_tensors[ti].first] = err;
    result.max_relative_error = std::max(result.max_relative_error, err);
  }
  return result;
}

}  // namespace sgf::gnns
