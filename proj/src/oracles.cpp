#include "nwst/oracles.hpp"

#include <string>

#include "nwst/error.hpp"

namespace nwst {

namespace {

bool root_reaches_all(const NodeWeightedGraph& g, std::uint32_t mask) {
  const NodeId r = g.root();
  std::uint32_t seen = 1u << r;
  std::vector<NodeId> stack{r};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : g.out(u)) {
      const std::uint32_t bit = 1u << v;
      if ((mask & bit) && !(seen & bit)) {
        seen |= bit;
        stack.push_back(v);
      }
    }
  }
  return seen == mask;
}

NodeSet mask_to_set(std::uint32_t mask, NodeId n) {
  NodeSet s;
  for (NodeId v = 0; v < n; ++v) {
    if (mask >> v & 1u) s.push_back(v);
  }
  return s;
}

}  // namespace

ExactResult exact_optimum(const NodeWeightedGraph& graph, ExactKind kind,
                          const ExactParams& params, const PrizeOracle* oracle) {
  const NodeId n = graph.size();
  if (n > 18) {
    throw Error(ErrorKind::Size, "exact oracle limited to 18 nodes, got " + std::to_string(n));
  }
  const NodeId r = graph.root();
  std::uint32_t need = 1u << r;
  for (NodeId t : params.terminals) {
    graph.check_node(t);
    need |= 1u << t;
  }
  const double tol = 1e-9 * std::max(1.0, graph.total_cost() + graph.total_prize());
  ExactResult res;
  NodeSet best_set;
  bool found = false;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!(mask >> r & 1u)) continue;
    if (kind == ExactKind::Dst && (mask & need) != need) continue;
    if (!root_reaches_all(graph, mask)) continue;
    ++res.enumerated;
    const NodeSet set = mask_to_set(mask, n);
    const double cost = node_set_cost(graph, set);
    double value;
    if (kind == ExactKind::Budget) {
      if (cost > params.budget + tol) continue;
      value = oracle ? oracle->eval(set) : node_set_prize(graph, set);
    } else {
      if (kind == ExactKind::Quota) {
        const double p = oracle ? oracle->eval(set) : node_set_prize(graph, set);
        if (p < params.quota - tol) continue;
      }
      value = cost;
    }
    const bool better = !found ||
                        (kind == ExactKind::Budget ? value > res.best_value
                                                   : value < res.best_value) ||
                        (value == res.best_value && set < best_set);
    if (better) {
      found = true;
      res.best_value = value;
      best_set = set;
    }
  }
  if (found) res.best_set = best_set;
  return res;
}

std::vector<NodeSet> enumerate_connected_subtrees(const RootedTree& tree) {
  const std::size_t k = tree.members.size();
  if (k > 14) {
    throw Error(ErrorKind::Size, "subtree enumeration limited to 14 nodes");
  }
  std::vector<int> parent_idx(k, -1);
  for (std::size_t i = 0; i < k; ++i) {
    auto it = tree.parent.find(tree.members[i]);
    if (it == tree.parent.end()) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (tree.members[j] == it->second) parent_idx[i] = static_cast<int>(j);
    }
  }
  std::vector<NodeSet> out;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    // A subset of a tree is connected iff exactly one member lacks its parent
    // inside the subset.
    int tops = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(mask >> i & 1u)) continue;
      if (parent_idx[i] < 0 || !(mask >> parent_idx[i] & 1u)) ++tops;
    }
    if (tops != 1) continue;
    NodeSet s;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1u) s.push_back(tree.members[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace nwst
