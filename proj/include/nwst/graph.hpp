#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace nwst {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Sorted, duplicate-free list of node ids.
using NodeSet = std::vector<NodeId>;

NodeSet make_node_set(std::vector<NodeId> nodes);
bool set_contains(const NodeSet& set, NodeId v);

/// Directed or undirected graph with nonnegative per-node cost and additive
/// prize. Undirected graphs keep both arc directions in the adjacency.
/// Adjacency lists are kept sorted, so iteration order is deterministic.
///
/// A graph produced by induced() remembers, for each of its nodes, the id the
/// node had in the graph it was induced from (origin()).
class NodeWeightedGraph {
 public:
  NodeWeightedGraph() = default;
  NodeWeightedGraph(bool directed, std::vector<double> cost,
                    std::vector<double> prize, NodeId root);

  /// Adds arc (u,v); for undirected graphs adds the edge {u,v}.
  /// Throws Input on self-loops, parallel arcs and invalid ids.
  void add_arc(NodeId u, NodeId v);

  NodeId size() const { return static_cast<NodeId>(cost_.size()); }
  bool directed() const { return directed_; }
  NodeId root() const { return root_; }
  double cost(NodeId v) const { return cost_[v]; }
  double prize(NodeId v) const { return prize_[v]; }
  std::span<const double> costs() const { return cost_; }
  std::span<const double> prizes() const { return prize_; }
  std::span<const NodeId> out(NodeId v) const { return out_[v]; }
  std::span<const NodeId> in(NodeId v) const { return in_[v]; }
  bool has_arc(NodeId u, NodeId v) const;
  std::size_t arc_count() const;

  NodeId origin(NodeId v) const { return origin_[v]; }
  std::span<const NodeId> origins() const { return origin_; }

  bool valid(NodeId v) const { return v >= 0 && v < size(); }
  void check_node(NodeId v) const;

  double total_cost() const;
  double total_prize() const;

  /// Subgraph induced by `keep` (must contain the root); nodes are renumbered
  /// in ascending order of their id here.
  NodeWeightedGraph induced(const NodeSet& keep) const;

  /// Copy with replaced node costs (same topology and origins).
  NodeWeightedGraph with_costs(std::vector<double> cost) const;

 private:
  bool directed_ = true;
  NodeId root_ = 0;
  std::vector<double> cost_;
  std::vector<double> prize_;
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::vector<NodeId> origin_;
};

/// Out-arborescence (directed) or tree (undirected) over host-graph nodes.
struct RootedTree {
  NodeId root = kNoNode;
  NodeSet members;
  std::map<NodeId, NodeId> parent;  // child -> parent, root excluded
  double cost = 0.0;
  double prize_additive = 0.0;

  bool contains(NodeId v) const { return set_contains(members, v); }
  std::size_t size() const { return members.size(); }
  /// Children lists keyed by member, each sorted ascending.
  std::map<NodeId, std::vector<NodeId>> children() const;
};

/// Single-node tree {root}.
RootedTree singleton_tree(const NodeWeightedGraph& graph, NodeId root);

/// Recomputes cost/prize from the graph and checks every RootedTree
/// invariant. Throws Contract with a diagnostic on the first violation.
void validate_tree(const NodeWeightedGraph& graph, const RootedTree& tree);

/// Maps a tree of `sub` (obtained through induced()) to the ids of the graph
/// `sub` was induced from.
RootedTree lift_tree(const RootedTree& tree, const NodeWeightedGraph& sub,
                     const NodeWeightedGraph& host);

struct DistanceMap {
  NodeId source = kNoNode;
  std::vector<double> dist;
  std::vector<NodeId> pred;

  bool reachable(NodeId v) const { return dist[v] < kInfinity; }
  /// Node sequence source..v; empty when v is unreachable.
  std::vector<NodeId> path_to(NodeId v) const;
};

/// Label-setting shortest paths where a path costs the sum of its node costs,
/// both endpoints included. When `allowed` is given, paths stay inside it.
/// Equal-distance ties prefer the predecessor with the smaller id.
DistanceMap node_weighted_shortest_paths(
    const NodeWeightedGraph& graph, NodeId source,
    const std::optional<NodeSet>& allowed = std::nullopt);

/// Nodes reachable from `source` inside `allowed` (all nodes when absent).
NodeSet reachable_from(const NodeWeightedGraph& graph, NodeId source,
                       const std::optional<NodeSet>& allowed = std::nullopt);

/// Induced subgraph on {v : dist(root, v) <= bound}; the result is B-proper
/// for the root. Throws Infeasible when bound < cost(root).
NodeWeightedGraph prune_to_b_proper(const NodeWeightedGraph& graph,
                                    double bound);

/// Shortest-path arborescence rooted at graph.root() spanning exactly
/// `node_set` (distances taken inside the induced subgraph on node_set).
/// Throws Connectivity naming the first unreachable member.
RootedTree build_arborescence(const NodeWeightedGraph& graph,
                              const NodeSet& node_set);

double node_set_cost(const NodeWeightedGraph& graph, const NodeSet& nodes);
double node_set_prize(const NodeWeightedGraph& graph, const NodeSet& nodes);

}  // namespace nwst
