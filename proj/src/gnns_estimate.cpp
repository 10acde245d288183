#include <algorithm>
#include <chrono>
#include <cmath>

#include "sgf/error.hpp"
#include "sgf/gnns.hpp"
#include "sgf/parallel.hpp"
#include "sgf/random.hpp"

namespace sgf::gnns {

namespace {

struct Kept {
  CanonicalCode code;
  double weight;
};

struct SlotResult {
  std::vector<Kept> kept;
  bool dropped = false;
};

// Per-worker scratch for one draw. Components are written contiguously into
// `members`, so a draw allocates nothing once the buffers have grown.
struct Scratch {
  explicit Scratch(std::size_t n) : on(n), seen(n), boundary(n) {}
  std::vector<char> on, seen, boundary;
  std::vector<NodeId> active, members;
  std::vector<std::pair<std::size_t, std::size_t>> comps;  // [begin, end) in members

  void clear() {
    for (NodeId v : active) on[v] = seen[v] = 0;
    active.clear();
    members.clear();
    comps.clear();
  }

  // Components ordered by smallest member, each sorted.
  void find_components(const Graph& g) {
    std::sort(active.begin(), active.end());
    for (NodeId s : active) {
      if (seen[s]) continue;
      const std::size_t begin = members.size();
      members.push_back(s);
      seen[s] = 1;
      for (std::size_t head = begin; head < members.size(); ++head)
        for (NodeId w : g.neighbors(members[head]))
          if (on[w] && !seen[w]) {
            seen[w] = 1;
            members.push_back(w);
          }
      std::sort(members.begin() + static_cast<std::ptrdiff_t>(begin), members.end());
      comps.emplace_back(begin, members.size());
    }
  }
};

}  // namespace

FrequencyDistribution estimate_distribution(const Graph& g, const GnnsParams& params,
                                            std::size_t samples, std::uint64_t seed,
                                            const EstimateOptions& options) {
  if (samples == 0) throw ArgumentError("GNNS estimation needs at least one sample");
  const auto start = std::chrono::steady_clock::now();
  if (g.num_nodes() != params.config.num_nodes)
    throw ConfigError("graph has " + std::to_string(g.num_nodes()) + " nodes but the model expects " +
                      std::to_string(params.config.num_nodes));
  // Only the keep head is needed: l = A_hat relu(A_hat W0) (W1 keep_w) + b.
  const auto& w = params.weights;
  const Eigen::SparseMatrix<double> a_hat = normalized_adjacency(g);
  const Eigen::MatrixXd h0 = a_hat * w.w0;
  const Eigen::VectorXd head = w.w1 * w.keep_w.col(0);
  const Eigen::VectorXd logits =
      (a_hat * (h0.cwiseMax(0.0) * head)).array() + w.keep_b(0, 0);
  if (!logits.allFinite()) throw NumericError("non-finite keep logits");
  const double tau = params.config.temperature;
  const double theta = params.config.threshold;
  const auto n = g.num_nodes();

  // P(soft mask > theta) = sigmoid(l - tau * logit(theta)).
  const double shift = tau * std::log(theta / (1.0 - theta));
  // The soft mask exceeds theta exactly when u > 1 - q, so the hard mask is
  // drawn by comparison without evaluating the relaxed sample.
  std::vector<double> log_q(n), log_not_q(n), reject(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = logits[static_cast<Eigen::Index>(i)] - shift;
    reject[i] = sigmoid(-x);
    log_q[i] = std::min(x, 0.0) - std::log1p(std::exp(-std::abs(x)));
    log_not_q[i] = std::min(-x, 0.0) - std::log1p(std::exp(-std::abs(x)));
  }
  const bool inclusion = options.weighting == Weighting::inclusion;

  std::vector<SlotResult> slots(samples);
  parallel_chunks(samples, resolve_workers(options.workers),
                  [&](std::size_t, std::size_t b, std::size_t e) {
    Scratch sc(n);
    for (std::size_t slot = b; slot < e; ++slot) {
      const std::uint64_t slot_seed = derive_seed(seed, slot);
      // Inclusion weights already account for empty masks, so only the
      // plain histogram resamples them.
      const int attempts = inclusion ? 1 : kMaxResamples + 1;
      sc.clear();
      for (int attempt = 0; attempt < attempts && sc.active.empty(); ++attempt) {
        SplitMix64 rng(derive_seed(slot_seed, static_cast<std::uint64_t>(attempt)));
        for (std::size_t i = 0; i < n; ++i)
          if (uniform_open01(rng) > reject[i]) {
            sc.on[i] = 1;
            sc.active.push_back(static_cast<NodeId>(i));
          }
      }
      SlotResult& out = slots[slot];
      if (sc.active.empty()) {
        out.dropped = !inclusion;
        continue;
      }
      sc.find_components(g);
      if (options.harvest == Harvest::largest) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < sc.comps.size(); ++c)
          if (sc.comps[c].second - sc.comps[c].first >
              sc.comps[best].second - sc.comps[best].first)
            best = c;
        sc.comps = {sc.comps[best]};
      }
      for (const auto& [cb, ce] : sc.comps) {
        const std::size_t size = ce - cb;
        if (size != 4 && size != 5) continue;
        const std::span<const NodeId> comp(sc.members.data() + cb, size);
        const CanonicalCode code = canonicalize_bits(static_cast<int>(size), adjacency_bits(g, comp));
        double weight = 1.0;
        if (inclusion) {
          double log_pi = 0.0;
          for (NodeId v : comp) {
            log_pi += log_q[v];
            sc.boundary[v] = 1;
          }
          for (NodeId v : comp)
            for (NodeId w : g.neighbors(v))
              if (!sc.boundary[w]) {
                sc.boundary[w] = 1;
                log_pi += log_not_q[w];
              }
          for (NodeId v : comp) {
            sc.boundary[v] = 0;
            for (NodeId w : g.neighbors(v)) sc.boundary[w] = 0;
          }
          weight = std::exp(-log_pi);
        }
        out.kept.push_back({code, weight});
      }
    }
  });

  FrequencyDistribution d;
  d.k_set = {4, 5};
  std::size_t kept = 0, kept4 = 0, kept5 = 0, hit_slots = 0, effective = 0;
  for (const auto& s : slots) {
    if (s.dropped) continue;
    ++effective;
    if (!s.kept.empty()) ++hit_slots;
    for (const auto& k : s.kept) {
      d.counts[k.code] += inclusion ? k.weight / static_cast<double>(samples) : k.weight;
      ++kept;
      ++(k.code.k == 4 ? kept4 : kept5);
    }
  }
  d.meta = {{"method", "gnns"},
            {"samples", samples},
            {"seed", seed},
            {"harvest", options.harvest == Harvest::all ? "all" : "largest"},
            {"weighting", inclusion ? "inclusion" : "uniform"},
            {"kept", kept},
            {"kept_4", kept4},
            {"kept_5", kept5},
            {"kept_fraction", static_cast<double>(hit_slots) / static_cast<double>(samples)},
            {"m_effective", effective},
            {"wall_time_s",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  return d;
}

Harvest parse_harvest(const std::string& name) {
  if (name == "all") return Harvest::all;
  if (name == "largest") return Harvest::largest;
  throw ConfigError("unknown harvest mode '" + name + "' (expected all or largest)");
}

Weighting parse_weighting(const std::string& name) {
  if (name == "inclusion") return Weighting::inclusion;
  if (name == "uniform") return Weighting::uniform;
  throw ConfigError("unknown weighting '" + name + "' (expected inclusion or uniform)");
}

}  // namespace sgf::gnns
