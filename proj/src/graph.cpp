#include "nwst/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <string>

#include "nwst/error.hpp"

namespace nwst {

NodeSet make_node_set(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

bool set_contains(const NodeSet& set, NodeId v) {
  return std::binary_search(set.begin(), set.end(), v);
}

NodeWeightedGraph::NodeWeightedGraph(bool directed, std::vector<double> cost,
                                     std::vector<double> prize, NodeId root)
    : directed_(directed),
      root_(root),
      cost_(std::move(cost)),
      prize_(std::move(prize)) {
  if (cost_.size() != prize_.size()) {
    throw Error(ErrorKind::Input, "cost and prize arrays differ in length");
  }
  if (cost_.empty()) throw Error(ErrorKind::Input, "graph has no nodes");
  for (std::size_t v = 0; v < cost_.size(); ++v) {
    if (!(cost_[v] >= 0.0) || !std::isfinite(cost_[v])) {
      throw Error(ErrorKind::Input,
                  "node " + std::to_string(v) + " has invalid cost");
    }
    if (!(prize_[v] >= 0.0) || !std::isfinite(prize_[v])) {
      throw Error(ErrorKind::Input,
                  "node " + std::to_string(v) + " has invalid prize");
    }
  }
  if (root < 0 || root >= size()) {
    throw Error(ErrorKind::Input, "root is not a valid node id");
  }
  out_.resize(cost_.size());
  in_.resize(cost_.size());
  origin_.resize(cost_.size());
  for (NodeId v = 0; v < size(); ++v) origin_[v] = v;
}

void NodeWeightedGraph::check_node(NodeId v) const {
  if (!valid(v)) {
    throw Error(ErrorKind::Input, "invalid node id " + std::to_string(v));
  }
}

namespace {

bool insert_sorted(std::vector<NodeId>& list, NodeId v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it != list.end() && *it == v) return false;
  list.insert(it, v);
  return true;
}

}  // namespace

void NodeWeightedGraph::add_arc(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) {
    throw Error(ErrorKind::Input, "self-loop at node " + std::to_string(u));
  }
  if (has_arc(u, v)) {
    throw Error(ErrorKind::Input, "parallel arc " + std::to_string(u) + " -> " +
                                      std::to_string(v));
  }
  insert_sorted(out_[u], v);
  insert_sorted(in_[v], u);
  if (!directed_) {
    insert_sorted(out_[v], u);
    insert_sorted(in_[u], v);
  }
}

bool NodeWeightedGraph::has_arc(NodeId u, NodeId v) const {
  if (!valid(u) || !valid(v)) return false;
  return std::binary_search(out_[u].begin(), out_[u].end(), v);
}

std::size_t NodeWeightedGraph::arc_count() const {
  std::size_t total = 0;
  for (const auto& list : out_) total += list.size();
  return total;
}

double NodeWeightedGraph::total_cost() const {
  double total = 0.0;
  for (double c : cost_) total += c;
  return total;
}

double NodeWeightedGraph::total_prize() const {
  double total = 0.0;
  for (double p : prize_) total += p;
  return total;
}

NodeWeightedGraph NodeWeightedGraph::induced(const NodeSet& keep) const {
  if (!set_contains(keep, root_)) {
    throw Error(ErrorKind::Input, "induced subgraph must keep the root");
  }
  std::vector<NodeId> new_id(cost_.size(), kNoNode);
  std::vector<double> cost;
  std::vector<double> prize;
  for (NodeId v : keep) {
    check_node(v);
    new_id[v] = static_cast<NodeId>(cost.size());
    cost.push_back(cost_[v]);
    prize.push_back(prize_[v]);
  }
  NodeWeightedGraph sub(directed_, std::move(cost), std::move(prize),
                        new_id[root_]);
  for (NodeId v : keep) {
    sub.origin_[new_id[v]] = v;
    for (NodeId w : out_[v]) {
      if (new_id[w] == kNoNode) continue;
      // Both directions of an undirected edge are already in out_.
      sub.out_[new_id[v]].push_back(new_id[w]);
      sub.in_[new_id[w]].push_back(new_id[v]);
    }
  }
  // keep is ascending, so the relabelled adjacency stays sorted.
  return sub;
}

NodeWeightedGraph NodeWeightedGraph::with_costs(std::vector<double> cost) const {
  if (cost.size() != cost_.size()) {
    throw Error(ErrorKind::Input, "cost array length mismatch");
  }
  NodeWeightedGraph copy = *this;
  copy.cost_ = std::move(cost);
  return copy;
}

std::map<NodeId, std::vector<NodeId>> RootedTree::children() const {
  std::map<NodeId, std::vector<NodeId>> result;
  for (NodeId v : members) result[v];
  for (const auto& [child, par] : parent) result[par].push_back(child);
  for (auto& [v, list] : result) std::sort(list.begin(), list.end());
  return result;
}

RootedTree singleton_tree(const NodeWeightedGraph& graph, NodeId root) {
  graph.check_node(root);
  RootedTree tree;
  tree.root = root;
  tree.members = {root};
  tree.cost = graph.cost(root);
  tree.prize_additive = graph.prize(root);
  return tree;
}

double node_set_cost(const NodeWeightedGraph& graph, const NodeSet& nodes) {
  double total = 0.0;
  for (NodeId v : nodes) total += graph.cost(v);
  return total;
}

double node_set_prize(const NodeWeightedGraph& graph, const NodeSet& nodes) {
  double total = 0.0;
  for (NodeId v : nodes) total += graph.prize(v);
  return total;
}

namespace {

[[noreturn]] void tree_violation(const std::string& what) {
  throw Error(ErrorKind::Contract, "invalid rooted tree: " + what);
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

void validate_tree(const NodeWeightedGraph& graph, const RootedTree& tree) {
  if (tree.members.empty()) tree_violation("no members");
  if (!std::is_sorted(tree.members.begin(), tree.members.end()) ||
      std::adjacent_find(tree.members.begin(), tree.members.end()) !=
          tree.members.end()) {
    tree_violation("member list not sorted/unique");
  }
  for (NodeId v : tree.members) {
    if (!graph.valid(v)) tree_violation("member " + std::to_string(v) + " out of range");
  }
  if (!tree.contains(tree.root)) tree_violation("root not a member");
  if (tree.parent.count(tree.root)) tree_violation("root has a parent");
  if (tree.parent.size() + 1 != tree.members.size()) {
    tree_violation("expected exactly one parentless member");
  }
  for (const auto& [child, par] : tree.parent) {
    if (!tree.contains(child) || !tree.contains(par)) {
      tree_violation("parent link " + std::to_string(par) + " -> " +
                     std::to_string(child) + " leaves the member set");
    }
    if (!graph.has_arc(par, child)) {
      tree_violation("link " + std::to_string(par) + " -> " +
                     std::to_string(child) + " is not an arc of the graph");
    }
  }
  // Every member must reach the root by following parents without cycling.
  for (NodeId v : tree.members) {
    NodeId cur = v;
    std::size_t steps = 0;
    while (cur != tree.root) {
      auto it = tree.parent.find(cur);
      if (it == tree.parent.end()) tree_violation("broken parent chain");
      cur = it->second;
      if (++steps > tree.members.size()) tree_violation("parent cycle");
    }
  }
  if (!nearly_equal(tree.cost, node_set_cost(graph, tree.members))) {
    tree_violation("cached cost differs from member cost sum");
  }
  if (!nearly_equal(tree.prize_additive, node_set_prize(graph, tree.members))) {
    tree_violation("cached prize differs from member prize sum");
  }
}

RootedTree lift_tree(const RootedTree& tree, const NodeWeightedGraph& sub,
                     const NodeWeightedGraph& host) {
  RootedTree lifted;
  lifted.root = sub.origin(tree.root);
  std::vector<NodeId> members;
  members.reserve(tree.members.size());
  for (NodeId v : tree.members) members.push_back(sub.origin(v));
  lifted.members = make_node_set(std::move(members));
  for (const auto& [child, par] : tree.parent) {
    lifted.parent[sub.origin(child)] = sub.origin(par);
  }
  lifted.cost = node_set_cost(host, lifted.members);
  lifted.prize_additive = node_set_prize(host, lifted.members);
  return lifted;
}

std::vector<NodeId> DistanceMap::path_to(NodeId v) const {
  std::vector<NodeId> path;
  if (!reachable(v)) return path;
  for (NodeId cur = v; cur != kNoNode; cur = pred[cur]) path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

DistanceMap node_weighted_shortest_paths(const NodeWeightedGraph& graph,
                                         NodeId source,
                                         const std::optional<NodeSet>& allowed) {
  graph.check_node(source);
  const NodeId n = graph.size();
  std::vector<char> ok(n, allowed ? 0 : 1);
  if (allowed) {
    for (NodeId v : *allowed) {
      graph.check_node(v);
      ok[v] = 1;
    }
    if (!ok[source]) {
      throw Error(ErrorKind::Input, "source not in the allowed node set");
    }
  }

  DistanceMap dm;
  dm.source = source;
  dm.dist.assign(n, kInfinity);
  dm.pred.assign(n, kNoNode);
  std::vector<char> settled(n, 0);

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dm.dist[source] = graph.cost(source);
  queue.emplace(dm.dist[source], source);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (settled[u] || d > dm.dist[u]) continue;
    settled[u] = 1;
    for (NodeId v : graph.out(u)) {
      if (!ok[v] || settled[v]) continue;
      const double nd = d + graph.cost(v);
      if (nd < dm.dist[v] || (nd == dm.dist[v] && u < dm.pred[v])) {
        const bool improved = nd < dm.dist[v];
        dm.dist[v] = nd;
        dm.pred[v] = u;
        if (improved) queue.emplace(nd, v);
      }
    }
  }
  return dm;
}

NodeSet reachable_from(const NodeWeightedGraph& graph, NodeId source,
                       const std::optional<NodeSet>& allowed) {
  graph.check_node(source);
  std::vector<char> ok(graph.size(), allowed ? 0 : 1);
  if (allowed) {
    for (NodeId v : *allowed) ok[graph.valid(v) ? v : 0] = graph.valid(v);
  }
  if (!ok[source]) return {};
  std::vector<char> seen(graph.size(), 0);
  std::vector<NodeId> stack{source};
  seen[source] = 1;
  NodeSet result;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    result.push_back(u);
    for (NodeId v : graph.out(u)) {
      if (ok[v] && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return make_node_set(std::move(result));
}

NodeWeightedGraph prune_to_b_proper(const NodeWeightedGraph& graph,
                                    double bound) {
  if (bound < graph.cost(graph.root())) {
    throw Error(ErrorKind::Infeasible,
                "bound is below the root cost; no feasible tree exists");
  }
  const DistanceMap dm = node_weighted_shortest_paths(graph, graph.root());
  NodeSet keep;
  for (NodeId v = 0; v < graph.size(); ++v) {
    if (dm.dist[v] <= bound) keep.push_back(v);
  }
  return graph.induced(keep);
}

RootedTree build_arborescence(const NodeWeightedGraph& graph,
                              const NodeSet& node_set) {
  const NodeId root = graph.root();
  if (!set_contains(node_set, root)) {
    throw Error(ErrorKind::Input, "arborescence node set must contain the root");
  }
  const DistanceMap dm = node_weighted_shortest_paths(graph, root, node_set);
  RootedTree tree;
  tree.root = root;
  tree.members = node_set;
  for (NodeId v : node_set) {
    if (!dm.reachable(v)) {
      throw Error(ErrorKind::Connectivity,
                  "node " + std::to_string(v) +
                      " is unreachable from the root inside the node set");
    }
    if (v != root) tree.parent[v] = dm.pred[v];
  }
  tree.cost = node_set_cost(graph, node_set);
  tree.prize_additive = node_set_prize(graph, node_set);
  return tree;
}

}  // namespace nwst
