#pragma once

#include <vector>

#include "nwst/directed.hpp"
#include "nwst/graph.hpp"
#include "nwst/submodular.hpp"

namespace nwst {

/// Node-weighted Steiner tree by repeated minimum-ratio spiders. The root is
/// always treated as a terminal. Throws Connectivity on an unreachable terminal.
RootedTree klein_ravi_nwst(const NodeWeightedGraph& graph,
                           const NodeSet& terminals);

struct Decomposition {
  std::vector<RootedTree> subtrees;
  double m = 0.0;
};

/// Covers the tree with subtrees of cost at most m + cost(own root).
Decomposition decompose_tree(const RootedTree& tree,
                             const NodeWeightedGraph& graph, double m);

enum class TrimCondition { Unchanged, SmallCost, Ratio };

struct SubmodularTrim {
  RootedTree tree;
  TrimCondition condition = TrimCondition::Unchanged;
  std::size_t pieces = 0;
};

SubmodularTrim trim_submodular(const RootedTree& tree,
                               const NodeWeightedGraph& graph,
                               const PrizeOracle& oracle, double B,
                               double epsilon);

SolveReport solve_burst(const NodeWeightedGraph& graph,
                        const PrizeOracle& oracle, double B, double epsilon);
SolveReport solve_qurst(const NodeWeightedGraph& graph,
                        const PrizeOracle& oracle, double Q, double epsilon);

}  // namespace nwst
