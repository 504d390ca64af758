#pragma once

#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "nwst/graph.hpp"
#include "nwst/lp.hpp"
#include "nwst/submodular.hpp"

namespace nwst {

enum class ProblemKind { Dst, Budget, Quota, SubmodularBudget, SubmodularQuota };
enum class LpObjective { MaxPrize, MinCost };

struct FlowArc {
  NodeId commodity;
  NodeId tail;
  NodeId head;
};

/// Column layout: capacity variable x_v at column v, then flow variables.
struct VariableIndex {
  int node_count = 0;
  std::vector<FlowArc> flows;  // flows[k] is column node_count + k
  std::map<std::tuple<NodeId, NodeId, NodeId>, int> flow_column;
  std::vector<NodeId> commodities;

  int capacity(NodeId v) const { return v; }
  /// Column of f^commodity_{tail,head}, or -1 when pruned away.
  int flow(NodeId commodity, NodeId tail, NodeId head) const;
};

struct RelaxationBundle {
  NodeWeightedGraph graph;
  LpModel model;
  VariableIndex index;
  ProblemKind kind = ProblemKind::Budget;
  std::optional<double> budget;
  std::optional<double> quota;
  double capacity_coef = 1.0;
  std::vector<double> singleton_prize;  // p({v}) per node
  std::vector<NodeSet> cuts;            // submodular rows present
};

RelaxationBundle build_const_drat(const NodeWeightedGraph& graph,
                                  std::optional<double> budget,
                                  std::optional<double> quota,
                                  LpObjective objective);

RelaxationBundle build_lp_dst(const NodeWeightedGraph& graph,
                              const NodeSet& terminals);

RelaxationBundle build_const_urst(const NodeWeightedGraph& graph,
                                  const PrizeOracle& oracle,
                                  std::optional<double> budget,
                                  std::optional<double> quota,
                                  LpObjective objective,
                                  const std::vector<NodeSet>& cuts);

/// Appends sum_{v in S} x_v p_v <= p(S). Returns false if S is already a cut.
bool add_submodular_row(RelaxationBundle& bundle, const NodeSet& set,
                        const PrizeOracle& oracle);

/// x = indicator of tree members; unit flow along the tree path to each member.
std::vector<double> embed_tree_as_lp_solution(const RootedTree& tree,
                                              const RelaxationBundle& bundle);

/// Capacity part of a solution, with values within kFeasTol of 0 or 1 snapped.
std::vector<double> capacity_values(const RelaxationBundle& bundle,
                                    std::span<const double> values);

/// Exhaustive search over subsets of the support of x for the set maximizing
/// sum x_v p_v - p(S); returns it when that exceeds kFeasTol.
/// Throws Size when the support has more than support_cap nodes.
std::optional<NodeSet> separate_submodular(std::span<const double> x,
                                           const PrizeOracle& oracle,
                                           int support_cap = 20,
                                           double* violation = nullptr);

struct RowGenerationResult {
  RelaxationBundle bundle;
  LpSolution solution;
  int rounds = 0;
};

/// Solves Const-URST by cutting planes, starting from singleton cuts plus the
/// first support. Throws Numerical after max_rounds separations.
RowGenerationResult solve_const_urst(const NodeWeightedGraph& graph,
                                     const PrizeOracle& oracle,
                                     std::optional<double> budget,
                                     std::optional<double> quota,
                                     LpObjective objective,
                                     int support_cap = 20, int max_rounds = 200);

/// Path-form check: for every v != root with x_v > 0, a node-capacitated
/// max-flow from the root to v (capacity coef * x_w at w != v) reaches x_v.
bool capacities_support_flow(const NodeWeightedGraph& graph,
                             std::span<const double> x, double capacity_coef,
                             double tol = 1e-6);

}  // namespace nwst
