#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nwst/graph.hpp"
#include "nwst/submodular.hpp"

namespace nwst {

enum class ExactKind { Dst, Budget, Quota };

struct ExactParams {
  double budget = 0.0;
  double quota = 0.0;
  NodeSet terminals;
};

struct ExactResult {
  std::optional<NodeSet> best_set;
  double best_value = 0.0;  // cost for Dst/Quota, prize for Budget
  std::uint64_t enumerated = 0;
};

/// Scans every root-containing node set whose members are all reachable from
/// the root inside it. Prize comes from the oracle when given, else additive.
/// Throws Size above 18 nodes.
ExactResult exact_optimum(const NodeWeightedGraph& graph, ExactKind kind,
                          const ExactParams& params,
                          const PrizeOracle* oracle = nullptr);

/// Node sets inducing a connected subtree of `tree` (any root). At most 14
/// members.
std::vector<NodeSet> enumerate_connected_subtrees(const RootedTree& tree);

}  // namespace nwst
