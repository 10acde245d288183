#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sgf/distribution.hpp"
#include "sgf/graph.hpp"
#include "sgf/random.hpp"

namespace sgf {

// ---- naive uniform node sampling -------------------------------------------

// Draws `samples` uniform k-node sets; connected ones are classified. Counts
// are scaled to estimated absolute counts (accepted / draws * C(n,k)), so the
// combined 4+5 distribution weights sizes by their acceptance rates.
FrequencyDistribution naive_sample(const Graph& g, int k, std::uint64_t samples,
                                   std::uint64_t seed);

// Keeps drawing until `target_accepted` connected sets are found or
// `max_draws` is exhausted. Used for matched-sample comparisons.
FrequencyDistribution naive_sample_until(const Graph& g, int k, std::uint64_t target_accepted,
                                         std::uint64_t max_draws, std::uint64_t seed);

// ---- Metropolis-Hastings random walk over connected k-subgraphs ------------

struct ChainState {
  std::array<NodeId, 5> nodes{};  // sorted, first k entries used
  std::uint8_t k = 0;

  friend bool operator==(const ChainState&, const ChainState&) = default;
};

struct ChainStateHash {
  std::size_t operator()(const ChainState& s) const;
};

// Cached per-state data: the neighbor states (connected sets sharing k-1
// nodes), the node-boundary size |N(S)| and the number of non-cut nodes.
struct StateInfo {
  std::vector<ChainState> neighbors;
  std::uint32_t boundary = 0;
  std::uint32_t non_cut = 0;
  std::size_t degree() const { return neighbors.size(); }
};

class MhrwChain {
 public:
  // Throws InitializationError when no connected k-set is found after
  // bounded random restarts.
  MhrwChain(const Graph& g, int k, std::uint64_t seed);

  const ChainState& state() const { return state_; }
  const StateInfo& info(const ChainState& s);

  // One proposal + Metropolis-Hastings accept/reject. Returns true on a move.
  bool step();

  // min(1, d(from)/d(to)); exposed so the acceptance rule can be tested.
  static double acceptance(std::size_t degree_from, std::size_t degree_to);

  std::uint64_t proposals() const { return proposals_; }
  std::uint64_t accepted() const { return accepted_; }

 private:
  StateInfo compute_info(const ChainState& s) const;

  const Graph& g_;
  int k_;
  Rng rng_;
  ChainState state_;
  std::unordered_map<ChainState, StateInfo, ChainStateHash> cache_;
  std::uint64_t proposals_ = 0;
  std::uint64_t accepted_ = 0;

  static constexpr std::size_t kCacheLimit = 1 << 18;
};

// burn_in defaults to 10 * |E| steps. After burn-in every visited state
// (including repeats after rejections) is classified for `steps` steps.
FrequencyDistribution mhrw_sample(const Graph& g, int k, std::uint64_t steps,
                                  std::optional<std::uint64_t> burn_in, std::uint64_t seed);

// ---- combined 4+5 baselines ------------------------------------------------

enum class BaselineMethod { naive, mhrw };

BaselineMethod parse_baseline_method(const std::string& name);

// Runs the sampler for k=4 (samples_4) and k=5 (samples_5) and merges the two
// with cross-size weights: acceptance rates for naive, and for mhrw the
// double-counting ratio |C5|/|C4| = E_C4[|N(T)|] / E_C5[#non-cut nodes]
// estimated from the two chains. A zero budget for one size yields a
// distribution over the other size only, flagged "partial".
FrequencyDistribution combined_baseline_distribution(
    const Graph& g, BaselineMethod method, std::uint64_t samples_4, std::uint64_t samples_5,
    std::uint64_t seed, std::optional<std::uint64_t> burn_in = std::nullopt);

}  // namespace sgf
