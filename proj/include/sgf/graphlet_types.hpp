#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgf/graph.hpp"

namespace sgf {

inline constexpr int kMinGraphletSize = 3;
inline constexpr int kMaxGraphletSize = 5;

// Permutation-invariant identifier of a graph on k <= 5 nodes: the
// lexicographically smallest upper-triangular adjacency bit-string over all
// k! relabelings. Pair (0,1) is the most significant bit, pairs run row-major.
struct CanonicalCode {
  std::uint8_t k = 0;
  std::uint16_t bits = 0;

  // "k:hexbits", e.g. "4:3f" for K4.
  std::string str() const;
  static CanonicalCode parse(const std::string& text);

  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
};

inline constexpr int pair_count(int k) { return k * (k - 1) / 2; }

// Bit position of pair (i, j), i < j, within a k-node bit-string.
inline constexpr int pair_bit(int k, int i, int j) {
  return pair_count(k) - 1 - (i * k - i * (i + 1) / 2 + (j - i - 1));
}

// Labeled adjacency bits of g restricted to `nodes`, in the given order.
std::uint16_t adjacency_bits(const Graph& g, std::span<const NodeId> nodes);

// Canonical form by exhaustive permutation minimization. 3 <= n <= 5.
CanonicalCode canonical_code(const Graph& g);

// Table-driven canonicalization of labeled adjacency bits (same result as
// canonical_code, precomputed once per k).
CanonicalCode canonicalize_bits(int k, std::uint16_t labeled_bits);

bool bits_connected(int k, std::uint16_t bits);

// canonical_code of induced_subgraph(g, nodes); throws ClassificationError
// when the induced subgraph is disconnected.
CanonicalCode classify_connected(const Graph& g, std::span<const NodeId> nodes);

// Every connected type on k nodes, ascending by code.
const std::vector<CanonicalCode>& connected_types(int k);

// Human-readable name ("4-path", "claw", "K4", ...). Falls back to str().
std::string alias(const CanonicalCode& code);

// Graph realizing a code on nodes 0..k-1.
Graph code_graph(const CanonicalCode& code);

// Dense type indices assigned in first-seen order up to `capacity`; once
// full, every unseen code maps to the overflow slot capacity-1. Insertion is
// not synchronized: callers serialize index() during training.
class TypeRegistry {
 public:
  explicit TypeRegistry(std::size_t capacity = 16);
  // Restores a saved registry; throws DataError if codes exceed capacity - 1.
  TypeRegistry(std::size_t capacity, std::vector<CanonicalCode> codes);

  std::size_t index(const CanonicalCode& code);
  std::optional<std::size_t> find(const CanonicalCode& code) const;

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return codes_.size(); }
  const std::vector<CanonicalCode>& codes() const { return codes_; }

 private:
  std::size_t capacity_;
  std::vector<CanonicalCode> codes_;
};

}  // namespace sgf
