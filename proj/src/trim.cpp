#include <algorithm>
#include <map>
#include <string>

#include "nwst/directed.hpp"
#include "nwst/error.hpp"

namespace nwst {

namespace {

struct Part {
  NodeSet nodes;
  NodeId attach = kNoNode;  // tree node the part hangs from; none for the root part
};

// Splits a tree into parts of cost >= h (and < 2h when node costs are < h),
// plus a root-side remainder of cost < h.
std::vector<Part> partition_tree(const RootedTree& tree,
                                 const NodeWeightedGraph& graph, double h,
                                 NodeSet& remainder) {
  const auto children = tree.children();
  std::map<NodeId, int> depth;
  std::vector<NodeId> order{tree.root};  // BFS order
  depth[tree.root] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (NodeId c : children.at(order[i])) {
      depth[c] = depth[order[i]] + 1;
      order.push_back(c);
    }
  }
  std::map<NodeId, bool> alive;
  for (NodeId v : tree.members) alive[v] = true;

  auto collect = [&](NodeId top, std::vector<NodeId>& into) {
    std::vector<NodeId> stack{top};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      if (!alive[v]) continue;
      into.push_back(v);
      alive[v] = false;
      for (NodeId c : children.at(v)) stack.push_back(c);
    }
  };

  std::vector<Part> parts;
  while (alive[tree.root]) {
    std::map<NodeId, double> sub;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (!alive[*it]) continue;
      double s = graph.cost(*it);
      for (NodeId c : children.at(*it)) {
        if (alive[c]) s += sub[c];
      }
      sub[*it] = s;
    }
    if (sub[tree.root] < h) break;
    NodeId u = kNoNode;
    for (NodeId v : tree.members) {
      if (!alive[v] || sub[v] < h) continue;
      if (u == kNoNode || depth[v] > depth[u]) u = v;
    }
    Part part;
    std::vector<NodeId> nodes;
    if (sub[u] - graph.cost(u) >= h) {
      double acc = 0.0;
      for (NodeId c : children.at(u)) {
        if (!alive[c]) continue;
        acc += sub[c];
        collect(c, nodes);
        if (acc >= h) break;
      }
      part.attach = u;
    } else {
      collect(u, nodes);
      part.attach = u == tree.root ? kNoNode : tree.parent.at(u);
    }
    part.nodes = make_node_set(std::move(nodes));
    parts.push_back(std::move(part));
  }
  remainder.clear();
  for (NodeId v : tree.members) {
    if (alive[v]) remainder.push_back(v);
  }
  return parts;
}

NodeSet unite(const NodeSet& a, const std::vector<NodeId>& b) {
  std::vector<NodeId> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return make_node_set(std::move(all));
}

}  // namespace

RootedTree trim_by_partition(const RootedTree& tree,
                             const NodeWeightedGraph& graph, double B,
                             double epsilon, const SetPrize& prize,
                             double min_ratio) {
  const double h = epsilon * B / 2.0;
  const double hi = (1.0 + epsilon) * B;
  const double cost = tree.cost;
  if (cost < h * (1.0 - 1e-9)) {
    throw Error(ErrorKind::Contract, "trimming needs a tree costing at least eps*B/2");
  }
  if (cost <= hi * (1.0 + 1e-9)) return tree;
  if (tree.root != graph.root()) {
    throw Error(ErrorKind::Contract, "trimming needs a tree rooted at the graph root");
  }

  NodeSet remainder;
  const std::vector<Part> parts = partition_tree(tree, graph, h, remainder);
  const DistanceMap from_root = node_weighted_shortest_paths(graph, graph.root());

  std::vector<NodeSet> candidates;
  for (const Part& p : parts) {
    if (p.attach == kNoNode) {
      candidates.push_back(p.nodes);
      continue;
    }
    candidates.push_back(unite(p.nodes, from_root.path_to(p.attach)));
    if (set_contains(remainder, p.attach)) {
      candidates.push_back(unite(p.nodes, remainder));
    }
  }
  bool heavy = false;
  for (NodeId v : tree.members) {
    if (graph.cost(v) >= h) {
      heavy = true;
      candidates.push_back(make_node_set(from_root.path_to(v)));
    }
  }

  const NodeSet* best = nullptr;
  double best_ratio = -1.0;
  for (const NodeSet& c : candidates) {
    const double cc = node_set_cost(graph, c);
    if (cc < h * (1.0 - 1e-9) || cc > hi * (1.0 + 1e-9)) continue;
    const double p = prize(c);
    const double ratio = cc > 0.0 ? p / cc : (p > 0.0 ? kInfinity : 0.0);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = &c;
    }
  }
  if (!best) {
    throw Error(ErrorKind::Contract, "trimming found no bundle inside the cost window");
  }
  if (!heavy && best_ratio < min_ratio * (1.0 - 1e-6)) {
    throw Error(ErrorKind::Contract,
                "trimmed ratio " + std::to_string(best_ratio) + " below the bound " +
                    std::to_string(min_ratio));
  }
  RootedTree out = build_arborescence(graph, *best);
  validate_tree(graph, out);
  return out;
}

RootedTree trim_additive(const RootedTree& tree, const NodeWeightedGraph& graph,
                         double B, double epsilon, double gamma) {
  return trim_by_partition(
      tree, graph, B, epsilon,
      [&](const NodeSet& s) { return node_set_prize(graph, s); },
      epsilon * gamma / 4.0);
}

}  // namespace nwst
