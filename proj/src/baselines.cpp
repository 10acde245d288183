#include "sgf/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sgf/error.hpp"
#include "sgf/graphlet_types.hpp"

namespace sgf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double binomial(std::size_t n, int k) {
  if (n < static_cast<std::size_t>(k)) return 0.0;
  double out = 1.0;
  for (int i = 0; i < k; ++i) out = out * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return out;
}

void check_sampler_k(int k) {
  if (k != 4 && k != 5)
    throw ArgumentError("sampler graphlet size must be 4 or 5, got " + std::to_string(k));
}

FrequencyDistribution run_naive(const Graph& g, int k, std::uint64_t max_draws,
                                std::uint64_t target_accepted, std::uint64_t seed) {
  check_sampler_k(k);
  const auto start = Clock::now();
  const std::size_t n = g.num_nodes();
  Rng rng(seed);
  std::vector<std::uint64_t> tally(std::size_t{1} << pair_count(k), 0);
  std::array<NodeId, kMaxGraphletSize> pick{};
  std::uint64_t draws = 0, accepted = 0;
  if (n >= static_cast<std::size_t>(k)) {
    while (draws < max_draws && (target_accepted == 0 || accepted < target_accepted)) {
      ++draws;
      for (int i = 0; i < k; ++i) {
        NodeId v;
        do {
          v = static_cast<NodeId>(uniform_below(rng, n));
        } while (std::find(pick.begin(), pick.begin() + i, v) != pick.begin() + i);
        pick[i] = v;
      }
      const std::uint16_t bits = adjacency_bits(g, std::span<const NodeId>(pick.data(), k));
      if (bits_connected(k, bits)) {
        ++accepted;
        ++tally[bits];
      }
    }
  }
  FrequencyDistribution d;
  d.k_set = {k};
  const double scale = draws ? binomial(n, k) / static_cast<double>(draws) : 0.0;
  for (std::size_t bits = 0; bits < tally.size(); ++bits)
    if (tally[bits])
      d.counts[canonicalize_bits(k, static_cast<std::uint16_t>(bits))] +=
          static_cast<double>(tally[bits]) * scale;
  d.meta = {{"method", "naive"},
            {"k", k},
            {"S", draws},
            {"seed", seed},
            {"draws", draws},
            {"accepted", accepted},
            {"acceptance_rate", draws ? double(accepted) / double(draws) : 0.0},
            {"empty", accepted == 0},
            {"wall_time_s", seconds_since(start)}};
  return d;
}

}  // namespace

FrequencyDistribution naive_sample(const Graph& g, int k, std::uint64_t samples,
                                   std::uint64_t seed) {
  if (samples == 0) throw ArgumentError("naive sampling needs S > 0");
  return run_naive(g, k, samples, 0, seed);
}

FrequencyDistribution naive_sample_until(const Graph& g, int k, std::uint64_t target_accepted,
                                         std::uint64_t max_draws, std::uint64_t seed) {
  if (target_accepted == 0 || max_draws == 0)
    throw ArgumentError("naive_sample_until needs positive targets");
  return run_naive(g, k, max_draws, target_accepted, seed);
}

std::size_t ChainStateHash::operator()(const ChainState& s) const {
  std::uint64_t h = s.k;
  for (int i = 0; i < s.k; ++i) h = mix_seed(h ^ s.nodes[i]);
  return static_cast<std::size_t>(h);
}

MhrwChain::MhrwChain(const Graph& g, int k, std::uint64_t seed) : g_(g), k_(k), rng_(seed) {
  check_sampler_k(k);
  // The walk cannot leave its component, so it starts in the largest one
  // (which holds a connected k-set whenever any component of size >= k does).
  NodeSet pool;
  for (auto& c : connected_components(g))
    if (c.size() > pool.size()) pool = std::move(c);
  constexpr int kRestarts = 1000;
  for (int attempt = 0; attempt < kRestarts && pool.size() >= static_cast<std::size_t>(k);
       ++attempt) {
    std::vector<NodeId> set{pool[uniform_below(rng_, pool.size())]};
    while (static_cast<int>(set.size()) < k) {
      std::vector<NodeId> frontier;
      for (NodeId v : set)
        for (NodeId w : g.neighbors(v))
          if (std::find(set.begin(), set.end(), w) == set.end()) frontier.push_back(w);
      std::sort(frontier.begin(), frontier.end());
      frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
      if (frontier.empty()) break;
      set.push_back(frontier[uniform_below(rng_, frontier.size())]);
    }
    if (static_cast<int>(set.size()) == k) {
      std::sort(set.begin(), set.end());
      state_.k = static_cast<std::uint8_t>(k);
      std::copy(set.begin(), set.end(), state_.nodes.begin());
      return;
    }
  }
  throw InitializationError("no connected " + std::to_string(k) +
                            "-node subgraph found for the MHRW initial state");
}

StateInfo MhrwChain::compute_info(const ChainState& s) const {
  StateInfo info;
  const int k = s.k;
  const auto members = std::span<const NodeId>(s.nodes.data(), k);
  auto contains = [&](NodeId v) {
    return std::find(members.begin(), members.end(), v) != members.end();
  };

  std::vector<NodeId> boundary;
  for (NodeId v : members)
    for (NodeId w : g_.neighbors(v))
      if (!contains(w)) boundary.push_back(w);
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  info.boundary = static_cast<std::uint32_t>(boundary.size());

  std::array<NodeId, kMaxGraphletSize> rest{};
  std::array<NodeId, kMaxGraphletSize> next{};
  std::vector<NodeId> candidates;
  for (int drop = 0; drop < k; ++drop) {
    int r = 0;
    for (int i = 0; i < k; ++i)
      if (i != drop) rest[r++] = s.nodes[i];
    const auto rest_span = std::span<const NodeId>(rest.data(), k - 1);
    if (is_connected_subset(g_, rest_span)) ++info.non_cut;

    candidates.clear();
    for (NodeId v : rest_span)
      for (NodeId w : g_.neighbors(v))
        if (!contains(w)) candidates.push_back(w);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (NodeId w : candidates) {
      std::copy(rest.begin(), rest.begin() + (k - 1), next.begin());
      next[k - 1] = w;
      const auto next_span = std::span<NodeId>(next.data(), k);
      if (!is_connected_subset(g_, next_span)) continue;
      std::sort(next_span.begin(), next_span.end());
      ChainState y;
      y.k = static_cast<std::uint8_t>(k);
      std::copy(next_span.begin(), next_span.end(), y.nodes.begin());
      info.neighbors.push_back(y);
    }
  }
  return info;
}

const StateInfo& MhrwChain::info(const ChainState& s) {
  auto it = cache_.find(s);
  if (it != cache_.end()) return it->second;
  if (cache_.size() >= kCacheLimit) cache_.clear();
  return cache_.emplace(s, compute_info(s)).first->second;
}

double MhrwChain::acceptance(std::size_t degree_from, std::size_t degree_to) {
  if (degree_to == 0) return 1.0;
  return std::min(1.0, static_cast<double>(degree_from) / static_cast<double>(degree_to));
}

bool MhrwChain::step() {
  ++proposals_;
  const StateInfo& current = info(state_);
  const std::size_t degree_from = current.degree();
  if (degree_from == 0) return false;
  const ChainState proposal = current.neighbors[uniform_below(rng_, degree_from)];
  const std::size_t degree_to = info(proposal).degree();
  if (uniform01(rng_) < acceptance(degree_from, degree_to)) {
    state_ = proposal;
    ++accepted_;
    return true;
  }
  return false;
}

FrequencyDistribution mhrw_sample(const Graph& g, int k, std::uint64_t steps,
                                  std::optional<std::uint64_t> burn_in, std::uint64_t seed) {
  if (steps == 0) throw ArgumentError("MHRW sampling needs S > 0");
  const auto start = Clock::now();
  const std::uint64_t burn = burn_in.value_or(10 * g.num_edges());
  MhrwChain chain(g, k, seed);
  for (std::uint64_t i = 0; i < burn; ++i) chain.step();

  std::vector<std::uint64_t> tally(std::size_t{1} << pair_count(k), 0);
  double boundary_sum = 0.0, non_cut_sum = 0.0;
  for (std::uint64_t i = 0; i < steps; ++i) {
    chain.step();
    const ChainState& s = chain.state();
    ++tally[adjacency_bits(g, std::span<const NodeId>(s.nodes.data(), k))];
    const StateInfo& info = chain.info(s);
    boundary_sum += info.boundary;
    non_cut_sum += info.non_cut;
  }

  FrequencyDistribution d;
  d.k_set = {k};
  for (std::size_t bits = 0; bits < tally.size(); ++bits)
    if (tally[bits])
      d.counts[canonicalize_bits(k, static_cast<std::uint16_t>(bits))] +=
          static_cast<double>(tally[bits]);
  const double proposals = static_cast<double>(chain.proposals());
  d.meta = {{"method", "mhrw"},
            {"k", k},
            {"S", steps},
            {"burn_in", burn},
            {"seed", seed},
            {"acceptance_rate", proposals > 0 ? double(chain.accepted()) / proposals : 0.0},
            {"mean_boundary", boundary_sum / static_cast<double>(steps)},
            {"mean_non_cut", non_cut_sum / static_cast<double>(steps)},
            {"wall_time_s", seconds_since(start)}};
  return d;
}

BaselineMethod parse_baseline_method(const std::string& name) {
  if (name == "naive") return BaselineMethod::naive;
  if (name == "mhrw" || name == "mcmc") return BaselineMethod::mhrw;
  throw ConfigError("unknown baseline method '" + name + "'");
}

FrequencyDistribution combined_baseline_distribution(const Graph& g, BaselineMethod method,
                                                     std::uint64_t samples_4,
                                                     std::uint64_t samples_5, std::uint64_t seed,
                                                     std::optional<std::uint64_t> burn_in) {
  if (samples_4 == 0 && samples_5 == 0)
    throw ArgumentError("at least one of S_4, S_5 must be positive");
  const auto start = Clock::now();
  const std::uint64_t seed4 = derive_seed(seed, 4), seed5 = derive_seed(seed, 5);

  FrequencyDistribution out;
  nlohmann::json parts = nlohmann::json::object();
  if (method == BaselineMethod::naive) {
    // Counts are already estimated absolute counts; a plain merge weights the
    // sizes by their acceptance rates.
    for (auto [k, s, sd] : {std::tuple{4, samples_4, seed4}, std::tuple{5, samples_5, seed5}}) {
      if (s == 0) continue;
      auto d = naive_sample(g, k, s, sd);
      merge_counts(out, d);
      parts[std::to_string(k)] = d.meta;
    }
  } else {
    std::optional<FrequencyDistribution> d4, d5;
    if (samples_4) d4 = mhrw_sample(g, 4, samples_4, burn_in, seed4);
    if (samples_5) {
      try {
        d5 = mhrw_sample(g, 5, samples_5, burn_in, seed5);
      } catch (const InitializationError&) {
        // No component has 5 nodes: the 5-node share is exactly zero.
        if (!d4) throw;
        out.meta["no_5_node_state"] = true;
      }
    }
    double ratio = 1.0;  // |C5| / |C4|
    if (d4 && d5) {
      const double non_cut = d5->meta["mean_non_cut"].get<double>();
      ratio = non_cut > 0 ? d4->meta["mean_boundary"].get<double>() / non_cut : 0.0;
      out.meta["ratio_5_to_4"] = ratio;
    }
    if (d4) {
      merge_counts(out, *d4, 1.0 / static_cast<double>(samples_4));
      parts["4"] = d4->meta;
    }
    if (d5) {
      merge_counts(out, *d5, (d4 ? ratio : 1.0) / static_cast<double>(samples_5));
      parts["5"] = d5->meta;
    }
  }
  out.k_set.clear();
  if (samples_4) out.k_set.push_back(4);
  if (samples_5) out.k_set.push_back(5);
  out.meta["method"] = method == BaselineMethod::naive ? "naive" : "mhrw";
  out.meta["S_4"] = samples_4;
  out.meta["S_5"] = samples_5;
  out.meta["seed"] = seed;
  if (method == BaselineMethod::mhrw)
    out.meta["burn_in"] = burn_in.value_or(10 * g.num_edges());
  out.meta["partial"] = samples_4 == 0 || samples_5 == 0;
  out.meta["empty"] = out.empty();
  out.meta["per_k"] = parts;
  out.meta["wall_time_s"] = seconds_since(start);
  return out;
}

}  // namespace sgf
