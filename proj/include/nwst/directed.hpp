#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nwst/graph.hpp"

namespace nwst {

struct SupportPartition {
  NodeSet S;
  NodeSet S1, S2;  // x >= theta1 / below
  NodeSet U, Uprime;  // x >= theta2 / below
  double theta1 = 0.0;
  double theta2 = 0.0;
};

SupportPartition partition_support(std::span<const double> x, double theta1,
                                   double theta2);

struct ExpensiveCover {
  NodeSet CH;
  NodeSet EX;
  std::map<NodeId, NodeSet> x_sets;  // gateway set X_v per expensive target
  NodeSet hitters;
  std::map<NodeId, NodeId> attachments;
};

/// Splits targets into cheap (reachable from the root through U) and
/// expensive ones and covers the latter with a greedy hitting set of gateways.
/// When x is given, checks |X_v| * theta2 >= x_v for every expensive v.
ExpensiveCover expensive_cover(const NodeWeightedGraph& graph,
                               const SupportPartition& part,
                               const NodeSet& targets,
                               std::span<const double> x = {});

/// Arborescence over the cheap paths and the gateway paths of a cover.
RootedTree span_cover(const NodeWeightedGraph& graph,
                      const SupportPartition& part, const ExpensiveCover& cover);

struct SolveReport {
  RootedTree tree;
  double prize = 0.0;  // oracle prize for submodular problems, else additive
  double lp_bound = 0.0;
  double budget_violation = 1.0;
  double quota_fraction = 1.0;
  double epsilon = 0.0;
  int guesses_tried = 0;
  long wallclock_ms = 0;
  std::string branch;
  bool trimmed = false;
  double gamma_in = 0.0;
  int iterations = 0;
};

/// c_min (1+eps)^(i-1) for i = 1..N, N minimal with the last entry >= c_M.
std::vector<double> guess_cost_schedule(double c_min, double c_M,
                                        double epsilon);

/// Schedule for a graph: c_min is the smallest positive cost among nodes
/// reachable from the root, c_M their total cost; [0] when all are free.
std::vector<double> guess_cost_schedule_for(const NodeWeightedGraph& graph,
                                            double epsilon);

struct GoodTreeInfo {
  bool s1_branch = true;
  double s1_mass = 0.0;
  double s2_mass = 0.0;
  SupportPartition part;
  ExpensiveCover cover;
  std::size_t group_size = 0;
  NodeSet group;
};

/// Rounds a Const-DRAT point x (budget B, quota Q) to a tree with prize
/// at least Q/2. Throws Contract when x is not feasible.
RootedTree good_tree_from_fraction(const NodeWeightedGraph& graph,
                                   std::span<const double> x, double B,
                                   double Q, double F,
                                   GoodTreeInfo* info = nullptr);

SolveReport solve_dst(const NodeWeightedGraph& graph, const NodeSet& terminals,
                      double epsilon);
SolveReport solve_bdrat(const NodeWeightedGraph& graph, double B,
                        double epsilon);
SolveReport solve_qdrat(const NodeWeightedGraph& graph, double Q,
                        double epsilon);

using SetPrize = std::function<double(const NodeSet&)>;

/// Cuts an over-budget tree down to cost in [eps B/2, (1+eps) B], keeping the
/// candidate with the best prize-to-cost ratio. When the tree has no node
/// costing eps B/2 or more, the ratio is asserted to be at least min_ratio.
RootedTree trim_by_partition(const RootedTree& tree,
                             const NodeWeightedGraph& graph, double B,
                             double epsilon, const SetPrize& prize,
                             double min_ratio);

/// Additive trimming; the ratio bound is eps * gamma / 4.
RootedTree trim_additive(const RootedTree& tree, const NodeWeightedGraph& graph,
                         double B, double epsilon, double gamma);

using BudgetSolver =
    std::function<RootedTree(const NodeWeightedGraph&, double budget)>;

/// Raises the budget geometrically from the smallest positive cost until the
/// solver returns prize >= Q / alpha. Prize defaults to the additive sum.
SolveReport quota_via_budget(const NodeWeightedGraph& graph, double Q,
                             const BudgetSolver& solver, double epsilon,
                             double alpha, const SetPrize& prize = {});

/// Fills budget_violation / quota_fraction / prize from the tree.
void finish_report(SolveReport& report, std::optional<double> B,
                   std::optional<double> Q, double prize);

}  // namespace nwst
