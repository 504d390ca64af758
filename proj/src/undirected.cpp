#include "nwst/undirected.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "nwst/error.hpp"
#include "nwst/flow_lp.hpp"

namespace nwst {

namespace {

// Connected components of the subgraph induced by `in`; -1 outside it.
std::vector<int> components(const NodeWeightedGraph& g, const std::vector<char>& in,
                            int& count) {
  std::vector<int> comp(g.size(), -1);
  count = 0;
  for (NodeId s = 0; s < g.size(); ++s) {
    if (!in[s] || comp[s] >= 0) continue;
    std::vector<NodeId> stack{s};
    comp[s] = count;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.out(u)) {
        if (in[v] && comp[v] < 0) {
          comp[v] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return comp;
}

RootedTree restrict_tree(const RootedTree& tree, const NodeWeightedGraph& g,
                         NodeId root, const NodeSet& members) {
  RootedTree out;
  out.root = root;
  out.members = members;
  for (NodeId v : members) {
    if (v != root) out.parent[v] = tree.parent.at(v);
  }
  out.cost = node_set_cost(g, members);
  out.prize_additive = node_set_prize(g, members);
  return out;
}

long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count());
}

}  // namespace

RootedTree klein_ravi_nwst(const NodeWeightedGraph& graph,
                           const NodeSet& terminals) {
  const NodeId r = graph.root();
  NodeSet terms = terminals;
  terms.push_back(r);
  terms = make_node_set(std::move(terms));
  const NodeSet reach = reachable_from(graph, r);
  for (NodeId t : terms) {
    graph.check_node(t);
    if (!set_contains(reach, t)) {
      throw Error(ErrorKind::Connectivity,
                  "terminal " + std::to_string(t) + " is not connected to the root");
    }
  }
  std::vector<char> bought(graph.size(), 0);
  for (NodeId t : terms) bought[t] = 1;
  int count = 0;
  std::vector<int> comp = components(graph, bought, count);
  while (count > 1) {
    std::vector<double> work(graph.size());
    for (NodeId v = 0; v < graph.size(); ++v) work[v] = bought[v] ? 0.0 : graph.cost(v);
    const NodeWeightedGraph discounted = graph.with_costs(work);

    double best_ratio = kInfinity;
    NodeId best_center = kNoNode;
    std::vector<NodeId> best_legs;  // endpoint per leg
    for (NodeId c = 0; c < graph.size(); ++c) {
      const DistanceMap dm = node_weighted_shortest_paths(discounted, c);
      std::vector<std::pair<double, NodeId>> reach_comp(count, {kInfinity, kNoNode});
      for (NodeId v = 0; v < graph.size(); ++v) {
        if (comp[v] < 0 || !dm.reachable(v)) continue;
        auto& slot = reach_comp[comp[v]];
        const double d = dm.dist[v] - work[c];
        if (d < slot.first) slot = {d, v};
      }
      std::vector<std::pair<double, NodeId>> legs;
      for (const auto& s : reach_comp) {
        if (s.second != kNoNode) legs.push_back(s);
      }
      std::sort(legs.begin(), legs.end());
      double total = work[c];
      for (std::size_t k = 0; k < legs.size(); ++k) {
        total += legs[k].first;
        if (k == 0) continue;
        const double ratio = total / static_cast<double>(k + 1);
        if (ratio < best_ratio - 1e-12) {
          best_ratio = ratio;
          best_center = c;
          best_legs.clear();
          for (std::size_t i = 0; i <= k; ++i) best_legs.push_back(legs[i].second);
        }
      }
    }
    if (best_center == kNoNode) {
      throw Error(ErrorKind::Connectivity, "terminal components cannot be joined");
    }
    const DistanceMap dm = node_weighted_shortest_paths(discounted, best_center);
    bought[best_center] = 1;
    for (NodeId end : best_legs) {
      for (NodeId u : dm.path_to(end)) bought[u] = 1;
    }
    int next = 0;
    comp = components(graph, bought, next);
    if (next >= count) {
      throw Error(ErrorKind::Contract, "spider merge did not reduce the component count");
    }
    count = next;
  }

  NodeSet members;
  for (NodeId v = 0; v < graph.size(); ++v) {
    if (bought[v]) members.push_back(v);
  }
  RootedTree tree = build_arborescence(graph, members);
  // Drop non-terminal leaves.
  auto kids = tree.children();
  std::map<NodeId, int> degree;
  for (const auto& [v, list] : kids) degree[v] = static_cast<int>(list.size());
  std::vector<NodeId> stack;
  for (NodeId v : tree.members) {
    if (degree[v] == 0 && !set_contains(terms, v)) stack.push_back(v);
  }
  std::set<NodeId> removed;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    removed.insert(v);
    NodeId p = tree.parent.at(v);
    if (--degree[p] == 0 && !set_contains(terms, p)) stack.push_back(p);
  }
  NodeSet kept;
  for (NodeId v : tree.members) {
    if (!removed.count(v)) kept.push_back(v);
  }
  RootedTree out = restrict_tree(tree, graph, r, kept);
  validate_tree(graph, out);
  return out;
}

Decomposition decompose_tree(const RootedTree& tree,
                             const NodeWeightedGraph& graph, double m) {
  if (!(m > 0.0)) throw Error(ErrorKind::Input, "decomposition size m must be positive");
  Decomposition dec;
  dec.m = m;
  if (tree.cost <= m) {
    dec.subtrees.push_back(tree);
    return dec;
  }
  const auto children = tree.children();
  std::map<NodeId, int> depth;
  std::vector<NodeId> order{tree.root};
  depth[tree.root] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (NodeId c : children.at(order[i])) {
      depth[c] = depth[order[i]] + 1;
      order.push_back(c);
    }
  }
  std::map<NodeId, bool> alive, covered;
  for (NodeId v : tree.members) alive[v] = true;

  auto take_subtree = [&](NodeId top, std::vector<NodeId>& into) {
    std::vector<NodeId> stack{top};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      if (!alive[v]) continue;
      into.push_back(v);
      alive[v] = false;
      covered[v] = true;
      for (NodeId c : children.at(v)) stack.push_back(c);
    }
  };
  auto emit = [&](NodeId root, std::vector<NodeId> nodes) {
    dec.subtrees.push_back(restrict_tree(tree, graph, root, make_node_set(std::move(nodes))));
  };

  while (true) {
    std::map<NodeId, double> sub;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (!alive[*it]) continue;
      double s = graph.cost(*it);
      for (NodeId c : children.at(*it)) {
        if (alive[c]) s += sub[c];
      }
      sub[*it] = s;
    }
    NodeId u = kNoNode;
    for (NodeId v : tree.members) {
      if (!alive[v] || sub[v] - graph.cost(v) <= m) continue;
      if (u == kNoNode || depth[v] > depth[u]) u = v;
    }
    if (u == kNoNode) break;

    std::vector<NodeId> kids;
    for (NodeId c : children.at(u)) {
      if (alive[c]) kids.push_back(c);
    }
    bool big_child = false;
    for (NodeId c : kids) {
      if (sub[c] > m) {
        std::vector<NodeId> nodes;
        take_subtree(c, nodes);
        emit(c, std::move(nodes));
        big_child = true;
      }
    }
    if (big_child) continue;

    std::stable_sort(kids.begin(), kids.end(),
                     [&](NodeId a, NodeId b) { return sub[a] > sub[b]; });
    std::vector<std::pair<double, std::vector<NodeId>>> bins;
    for (NodeId c : kids) {
      auto it = std::find_if(bins.begin(), bins.end(), [&](const auto& bin) {
        return bin.first + sub[c] <= m;
      });
      if (it == bins.end()) {
        bins.push_back({sub[c], {c}});
      } else {
        it->first += sub[c];
        it->second.push_back(c);
      }
    }
    for (const auto& [cost, group] : bins) {
      if (cost <= m / 2.0) continue;
      std::vector<NodeId> nodes{u};
      for (NodeId c : group) take_subtree(c, nodes);
      covered[u] = true;
      emit(u, std::move(nodes));
    }
  }
  std::vector<NodeId> rest;
  for (NodeId v : tree.members) {
    if (alive[v]) rest.push_back(v);
  }
  if (!(rest.size() == 1 && covered[tree.root])) emit(tree.root, std::move(rest));

  // Invariants: coverage, per-piece cost, piece count.
  std::set<NodeId> seen;
  for (const RootedTree& t : dec.subtrees) {
    seen.insert(t.members.begin(), t.members.end());
    if (t.cost > m + graph.cost(t.root) + 1e-9 * (1.0 + m)) {
      throw Error(ErrorKind::Contract, "decomposition piece exceeds m + cost(root)");
    }
  }
  if (seen.size() != tree.members.size()) {
    throw Error(ErrorKind::Contract, "decomposition does not cover every node");
  }
  const double bound = 5.0 * std::floor(tree.cost / m);
  if (static_cast<double>(dec.subtrees.size()) > bound) {
    throw Error(ErrorKind::Contract, "decomposition has " +
                                         std::to_string(dec.subtrees.size()) +
                                         " pieces, above 5*floor(c/m)");
  }
  return dec;
}

SubmodularTrim trim_submodular(const RootedTree& tree,
                               const NodeWeightedGraph& graph,
                               const PrizeOracle& oracle, double B,
                               double epsilon) {
  const double c = tree.cost;
  if (c < epsilon * B / 2.0 * (1.0 - 1e-9)) {
    throw Error(ErrorKind::Contract, "submodular trimming needs cost >= eps*B/2");
  }
  SubmodularTrim result;
  if (c <= B) {
    result.tree = tree;
    return result;
  }
  const Decomposition dec = decompose_tree(tree, graph, B);
  result.pieces = dec.subtrees.size();
  const RootedTree* best = nullptr;
  double best_prize = -1.0;
  for (const RootedTree& t : dec.subtrees) {
    const double p = oracle.eval(t.members);
    if (p > best_prize) {
      best_prize = p;
      best = &t;
    }
  }
  const DistanceMap from_root = node_weighted_shortest_paths(graph, graph.root());
  std::vector<NodeId> nodes(best->members.begin(), best->members.end());
  for (NodeId v : from_root.path_to(best->root)) nodes.push_back(v);
  RootedTree joined = build_arborescence(graph, make_node_set(std::move(nodes)));

  const double p_tree = oracle.eval(tree.members);
  const double h_prime = c / B;
  if (joined.cost <= B) {
    if (oracle.eval(joined.members) < p_tree / (5.0 * h_prime) * (1.0 - 1e-6)) {
      throw Error(ErrorKind::Contract, "best piece prize below p(T)/(5h')");
    }
    result.tree = std::move(joined);
    result.condition = TrimCondition::SmallCost;
    return result;
  }
  const double gamma = p_tree / c;
  result.tree = trim_by_partition(
      joined, graph, B, epsilon,
      [&](const NodeSet& s) { return oracle.eval(s); },
      epsilon * epsilon * gamma / 640.0);
  result.condition = TrimCondition::Ratio;
  return result;
}

namespace {

// Tree for the rounding of a Const-URST point: Klein-Ravi on the heavy side
// or a shortest path to the best light singleton.
RootedTree round_urst(const NodeWeightedGraph& g, const PrizeOracle& oracle,
                      std::span<const double> x, double target, bool& heavy_side) {
  const double theta = 1.0 / std::sqrt(static_cast<double>(g.size()));
  const SupportPartition part = partition_support(x, theta, theta);
  double s1_mass = 0.0;
  for (NodeId v : part.S1) s1_mass += x[v] * oracle.singleton(v);
  heavy_side = s1_mass >= target / 2.0 || part.S2.empty();
  if (heavy_side) return klein_ravi_nwst(g, part.S1);
  NodeId best = part.S2.front();
  for (NodeId v : part.S2) {
    if (oracle.singleton(v) > oracle.singleton(best)) best = v;
  }
  const DistanceMap dm = node_weighted_shortest_paths(g, g.root());
  std::vector<NodeId> path = dm.path_to(best);
  return build_arborescence(g, make_node_set(std::move(path)));
}

}  // namespace

SolveReport solve_burst(const NodeWeightedGraph& graph,
                        const PrizeOracle& oracle, double B, double epsilon) {
  const auto start = std::chrono::steady_clock::now();
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorKind::Input, "epsilon must lie in (0, 1]");
  }
  const NodeWeightedGraph pruned = prune_to_b_proper(graph, B);
  const PrizeOracle sub_oracle = oracle.restricted(pruned.origins());
  RowGenerationResult lp = solve_const_urst(pruned, sub_oracle, B, std::nullopt,
                                            LpObjective::MaxPrize);
  if (lp.solution.status != LpStatus::Optimal) {
    throw Error(ErrorKind::Numerical, "budget LP is not solvable although x = 0 is feasible");
  }
  SolveReport report;
  report.epsilon = epsilon;
  report.guesses_tried = 1;
  report.iterations = lp.rounds;
  report.lp_bound = lp.solution.objective_value;
  const auto x = capacity_values(lp.bundle, lp.solution.values);
  bool heavy = false;
  RootedTree tree = round_urst(pruned, sub_oracle, x, report.lp_bound, heavy);
  report.branch = heavy ? "klein-ravi" : "single";
  if (tree.cost > B) {
    report.trimmed = true;
    report.gamma_in = sub_oracle.eval(tree.members) / tree.cost;
    SubmodularTrim trim = trim_submodular(tree, pruned, sub_oracle, B, epsilon);
    tree = std::move(trim.tree);
    report.branch += trim.condition == TrimCondition::Ratio ? "+trim-ratio" : "+trim-piece";
  }
  report.tree = lift_tree(tree, pruned, graph);
  validate_tree(graph, report.tree);
  if (report.tree.cost > (1.0 + epsilon) * B * (1.0 + 1e-9)) {
    throw Error(ErrorKind::Contract, "B-URST output exceeds (1+eps)B");
  }
  finish_report(report, B, std::nullopt, oracle.eval(report.tree.members));
  report.wallclock_ms = elapsed_ms(start);
  return report;
}

SolveReport solve_qurst(const NodeWeightedGraph& graph,
                        const PrizeOracle& oracle, double Q, double epsilon) {
  const auto start = std::chrono::steady_clock::now();
  if (!(epsilon > 0.0)) throw Error(ErrorKind::Input, "epsilon must be positive");
  if (Q < 0.0) throw Error(ErrorKind::Input, "quota must be nonnegative");
  SolveReport report;
  report.epsilon = epsilon;
  const auto schedule = guess_cost_schedule_for(graph, epsilon);
  report.guesses_tried = static_cast<int>(schedule.size());
  std::optional<RootedTree> best;
  std::string best_branch;
  double lp_bound = kInfinity;
  std::set<std::vector<NodeId>> seen;
  for (double g : schedule) {
    if (g < graph.cost(graph.root())) continue;
    const NodeWeightedGraph pruned = prune_to_b_proper(graph, g);
    std::vector<NodeId> key(pruned.origins().begin(), pruned.origins().end());
    if (!seen.insert(key).second) continue;
    const PrizeOracle sub_oracle = oracle.restricted(pruned.origins());
    RowGenerationResult lp = solve_const_urst(pruned, sub_oracle, std::nullopt, Q,
                                              LpObjective::MinCost);
    if (lp.solution.status != LpStatus::Optimal) continue;
    lp_bound = std::min(lp_bound, lp.solution.objective_value);
    const auto x = capacity_values(lp.bundle, lp.solution.values);
    bool heavy = false;
    RootedTree tree = lift_tree(round_urst(pruned, sub_oracle, x, Q, heavy), pruned, graph);
    if (!best || tree.cost < best->cost) {
      best = std::move(tree);
      best_branch = heavy ? "klein-ravi" : "single";
    }
  }
  if (!best) throw Error(ErrorKind::Infeasible, "quota is unreachable");
  validate_tree(graph, *best);
  report.tree = std::move(*best);
  report.lp_bound = lp_bound;
  report.branch = best_branch;
  finish_report(report, std::nullopt, Q, oracle.eval(report.tree.members));
  report.wallclock_ms = elapsed_ms(start);
  return report;
}

}  // namespace nwst
