#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "nwst/graph.hpp"
#include "nwst/submodular.hpp"

namespace testing_support {

using nwst::NodeId;
using nwst::NodeSet;
using nwst::NodeWeightedGraph;

inline std::vector<double> random_costs(std::mt19937_64& rng, int n, int lo,
                                        int hi, bool root_free = true) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<double> c(n);
  for (int v = 0; v < n; ++v) c[v] = (v == 0 && root_free) ? 0.0 : d(rng);
  return c;
}

/// Random graph rooted at 0 where every node is reachable: a random spanning
/// out-tree (parent of i drawn from 0..i-1) plus extra arcs with `density`.
inline NodeWeightedGraph random_graph(std::mt19937_64& rng, int n, bool directed,
                                      double density, int cost_lo = 1,
                                      int cost_hi = 10, int prize_hi = 10) {
  auto cost = random_costs(rng, n, cost_lo, cost_hi);
  std::uniform_int_distribution<int> pd(0, prize_hi);
  std::vector<double> prize(n);
  for (int v = 1; v < n; ++v) prize[v] = pd(rng);
  NodeWeightedGraph g(directed, cost, prize, 0);
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> p(0, v - 1);
    g.add_arc(p(rng), v);
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v || g.has_arc(u, v) || (!directed && g.has_arc(v, u))) continue;
      if (coin(rng) < density) g.add_arc(u, v);
    }
  }
  return g;
}

/// Graph whose arcs are exactly a random out-tree on n nodes.
inline NodeWeightedGraph random_tree_graph(std::mt19937_64& rng, int n,
                                           bool directed,
                                           std::vector<double> cost,
                                           std::vector<double> prize) {
  NodeWeightedGraph g(directed, std::move(cost), std::move(prize), 0);
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> p(0, v - 1);
    g.add_arc(p(rng), v);
  }
  return g;
}

/// The whole graph as a tree, when its arcs form one.
inline nwst::RootedTree whole_tree(const NodeWeightedGraph& g) {
  NodeSet all(g.size());
  for (NodeId v = 0; v < g.size(); ++v) all[v] = v;
  return nwst::build_arborescence(g, all);
}

/// Minimum node-cost over all simple paths s -> t inside `allowed`.
inline double brute_force_distance(const NodeWeightedGraph& g, NodeId s,
                                   NodeId t, const std::vector<char>& allowed) {
  double best = nwst::kInfinity;
  std::vector<char> on(g.size(), 0);
  std::function<void(NodeId, double)> dfs = [&](NodeId u, double acc) {
    if (u == t) {
      best = std::min(best, acc);
      return;
    }
    for (NodeId v : g.out(u)) {
      if (!allowed[v] || on[v]) continue;
      on[v] = 1;
      dfs(v, acc + g.cost(v));
      on[v] = 0;
    }
  };
  on[s] = 1;
  dfs(s, g.cost(s));
  return best;
}

inline nwst::PrizeOracle random_coverage(std::mt19937_64& rng, int n,
                                         int elements, int max_per_node = 3,
                                         bool root_empty = true) {
  std::uniform_int_distribution<int> e(0, elements - 1), k(1, max_per_node),
      w(1, 5);
  std::vector<std::vector<int>> covers(n);
  for (int v = root_empty ? 1 : 0; v < n; ++v) {
    const int count = k(rng);
    for (int i = 0; i < count; ++i) covers[v].push_back(e(rng));
  }
  std::vector<double> weights(elements);
  for (auto& x : weights) x = w(rng);
  return nwst::PrizeOracle::coverage(std::move(covers), std::move(weights));
}

struct TrimCase {
  NodeWeightedGraph graph;
  double B = 0.0;
};

/// Random out-tree on n nodes (root free, costs 1..3, prizes 0..9) with a
/// budget B that keeps it B-proper, every node cost <= eps B / 2 and the
/// total cost above (1 + eps) B. Needs n around 9 or more for eps = 0.5.
inline TrimCase trim_case(std::mt19937_64& rng, int n, double eps,
                          bool directed = true) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    auto cost = random_costs(rng, n, 1, 3);
    std::vector<double> prize(n);
    for (int v = 1; v < n; ++v) prize[v] = static_cast<double>(rng() % 10);
    auto g = random_tree_graph(rng, n, directed, cost, prize);
    auto dm = nwst::node_weighted_shortest_paths(g, 0);
    double far = 0.0;
    for (double d : dm.dist) far = std::max(far, d);
    const double B = std::max(far, 2.0 * 3.0 / eps);
    if (g.total_cost() > (1.0 + eps) * B) return {g, B};
  }
  throw std::runtime_error("trim_case: no instance found");
}

inline bool approx_le(double a, double b, double rel = 1e-6) {
  return a <= b + rel * std::max(1.0, std::abs(b));
}

}  // namespace testing_support
