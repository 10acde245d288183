#pragma once

#include <utility>
#include <vector>

#include "sgf/graph.hpp"

namespace testg {

inline sgf::Graph make(std::size_t n, std::vector<std::pair<sgf::NodeId, sgf::NodeId>> e) {
  return sgf::Graph(n, std::span<const std::pair<sgf::NodeId, sgf::NodeId>>(e));
}

inline sgf::Graph cycle(std::size_t n) {
  std::vector<std::pair<sgf::NodeId, sgf::NodeId>> e;
  for (std::size_t i = 0; i < n; ++i)
    e.emplace_back(static_cast<sgf::NodeId>(i), static_cast<sgf::NodeId>((i + 1) % n));
  return make(n, e);
}

inline sgf::Graph path(std::size_t n) {
  std::vector<std::pair<sgf::NodeId, sgf::NodeId>> e;
  for (std::size_t i = 0; i + 1 < n; ++i)
    e.emplace_back(static_cast<sgf::NodeId>(i), static_cast<sgf::NodeId>(i + 1));
  return make(n, e);
}

inline sgf::Graph complete(std::size_t n) {
  std::vector<std::pair<sgf::NodeId, sgf::NodeId>> e;
  for (sgf::NodeId i = 0; i < n; ++i)
    for (sgf::NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make(n, e);
}

// Center 0 with `leaves` leaves.
inline sgf::Graph star(std::size_t leaves) {
  std::vector<std::pair<sgf::NodeId, sgf::NodeId>> e;
  for (sgf::NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return make(leaves + 1, e);
}

}  // namespace testg
