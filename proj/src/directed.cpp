#include "nwst/directed.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <string>

#include "nwst/error.hpp"
#include "nwst/flow_lp.hpp"
#include "nwst/hitting_set.hpp"
#include "nwst/lp.hpp"

namespace nwst {

SupportPartition partition_support(std::span<const double> x, double theta1,
                                   double theta2) {
  SupportPartition p;
  p.theta1 = theta1;
  p.theta2 = theta2;
  for (NodeId v = 0; v < static_cast<NodeId>(x.size()); ++v) {
    if (!(x[v] > 0.0)) continue;
    p.S.push_back(v);
    (x[v] >= theta1 ? p.S1 : p.S2).push_back(v);
    (x[v] >= theta2 ? p.U : p.Uprime).push_back(v);
  }
  return p;
}

namespace {

NodeSet with_node(NodeSet set, NodeId v) {
  set.push_back(v);
  return make_node_set(std::move(set));
}

long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count());
}

std::vector<NodeId> sub_ids(const NodeWeightedGraph& sub, NodeId host_size) {
  std::vector<NodeId> map(host_size, kNoNode);
  for (NodeId v = 0; v < sub.size(); ++v) map[sub.origin(v)] = v;
  return map;
}

double max_distance(const NodeWeightedGraph& g) {
  const DistanceMap dm = node_weighted_shortest_paths(g, g.root());
  double f = 0.0;
  for (double d : dm.dist) {
    if (d < kInfinity) f = std::max(f, d);
  }
  return f;
}

}  // namespace

ExpensiveCover expensive_cover(const NodeWeightedGraph& graph,
                               const SupportPartition& part,
                               const NodeSet& targets,
                               std::span<const double> x) {
  const NodeId r = graph.root();
  ExpensiveCover cover;
  const DistanceMap through_u =
      node_weighted_shortest_paths(graph, r, with_node(part.U, r));
  for (NodeId v : targets) {
    (through_u.reachable(v) ? cover.CH : cover.EX).push_back(v);
  }
  if (cover.EX.empty()) return cover;

  std::map<NodeId, DistanceMap> from_gateway;
  for (NodeId w : part.Uprime) {
    from_gateway.emplace(w, node_weighted_shortest_paths(graph, w, with_node(part.U, w)));
  }
  SetFamily family;
  family.universe.assign(part.Uprime.begin(), part.Uprime.end());
  for (NodeId v : cover.EX) {
    NodeSet xs;
    for (const auto& [w, dm] : from_gateway) {
      if (dm.reachable(v)) xs.push_back(w);
    }
    if (xs.empty()) {
      throw Error(ErrorKind::Contract,
                  "expensive target " + std::to_string(v) +
                      " has no low-capacity gateway; the LP point is not feasible");
    }
    if (!x.empty()) {
      const double tol = 1e-6 + kFeasTol * graph.size();
      if (static_cast<double>(xs.size()) * part.theta2 < x[v] - tol) {
        throw Error(ErrorKind::Contract,
                    "gateway set of " + std::to_string(v) + " has " +
                        std::to_string(xs.size()) + " nodes, below x_v / theta2");
      }
    }
    family.sets.emplace_back(xs.begin(), xs.end());
    cover.x_sets[v] = std::move(xs);
  }
  const auto hitters = greedy_hitting_set(family);
  cover.hitters.assign(hitters.begin(), hitters.end());
  for (NodeId v : cover.EX) {
    NodeId best = kNoNode;
    double best_dist = kInfinity;
    for (NodeId w : cover.x_sets[v]) {
      if (!set_contains(cover.hitters, w)) continue;
      const double d = from_gateway.at(w).dist[v];
      if (d < best_dist) {
        best = w;
        best_dist = d;
      }
    }
    if (best == kNoNode) {
      throw Error(ErrorKind::Contract, "hitting set misses a gateway set");
    }
    cover.attachments[v] = best;
  }
  return cover;
}

RootedTree span_cover(const NodeWeightedGraph& graph,
                      const SupportPartition& part, const ExpensiveCover& cover) {
  const NodeId r = graph.root();
  std::vector<NodeId> nodes{r};
  const DistanceMap through_u =
      node_weighted_shortest_paths(graph, r, with_node(part.U, r));
  for (NodeId v : cover.CH) {
    for (NodeId u : through_u.path_to(v)) nodes.push_back(u);
  }
  if (!cover.EX.empty()) {
    const DistanceMap from_root = node_weighted_shortest_paths(graph, r);
    std::map<NodeId, DistanceMap> from_gateway;
    for (const auto& [v, w] : cover.attachments) {
      if (!from_gateway.count(w)) {
        from_gateway.emplace(
            w, node_weighted_shortest_paths(graph, w, with_node(part.U, w)));
        for (NodeId u : from_root.path_to(w)) nodes.push_back(u);
      }
      for (NodeId u : from_gateway.at(w).path_to(v)) nodes.push_back(u);
    }
  }
  return build_arborescence(graph, make_node_set(std::move(nodes)));
}

std::vector<double> guess_cost_schedule(double c_min, double c_M,
                                        double epsilon) {
  if (!(c_min > 0.0)) throw Error(ErrorKind::Input, "c_min must be positive");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::Input, "epsilon must be positive");
  if (c_M < c_min) throw Error(ErrorKind::Input, "c_M below c_min");
  std::vector<double> schedule;
  for (int i = 0;; ++i) {
    const double g = c_min * std::pow(1.0 + epsilon, i);
    schedule.push_back(g);
    if (g >= c_M * (1.0 - 1e-12)) break;
  }
  return schedule;
}

std::vector<double> guess_cost_schedule_for(const NodeWeightedGraph& graph,
                                            double epsilon) {
  double c_min = kInfinity;
  double c_M = 0.0;
  for (NodeId v : reachable_from(graph, graph.root())) {
    c_M += graph.cost(v);
    if (graph.cost(v) > 0.0) c_min = std::min(c_min, graph.cost(v));
  }
  if (c_M == 0.0) return {0.0};
  return guess_cost_schedule(c_min, c_M, epsilon);
}

void finish_report(SolveReport& report, std::optional<double> B,
                   std::optional<double> Q, double prize) {
  report.prize = prize;
  const double c = report.tree.cost;
  report.budget_violation = (B && c > *B) ? (*B > 0.0 ? c / *B : kInfinity) : 1.0;
  report.quota_fraction = (Q && *Q > 0.0) ? prize / *Q : 1.0;
}

RootedTree good_tree_from_fraction(const NodeWeightedGraph& graph,
                                   std::span<const double> x, double B,
                                   double Q, double F, GoodTreeInfo* info) {
  (void)F;  // enters only the cost bound
  const NodeId n = graph.size();
  if (static_cast<NodeId>(x.size()) != n) {
    throw Error(ErrorKind::Input, "capacity vector length mismatch");
  }
  double cost = 0.0, prize = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    cost += x[v] * graph.cost(v);
    prize += x[v] * graph.prize(v);
  }
  const double tol = 1e-6 * std::max(1.0, graph.total_cost() + graph.total_prize());
  if (cost > B + tol || prize < Q - tol || !capacities_support_flow(graph, x, 1.0)) {
    throw Error(ErrorKind::Contract, "fractional point is not Const-DRAT feasible");
  }

  GoodTreeInfo local;
  GoodTreeInfo& out = info ? *info : local;
  out.part = partition_support(x, std::pow(n, -1.0 / 3.0), std::pow(n, -2.0 / 3.0));
  out.s1_mass = out.s2_mass = 0.0;
  for (NodeId v : out.part.S1) out.s1_mass += x[v] * graph.prize(v);
  for (NodeId v : out.part.S2) out.s2_mass += x[v] * graph.prize(v);

  auto s1_tree = [&] {
    out.cover = expensive_cover(graph, out.part, out.part.S1, x);
    return span_cover(graph, out.part, out.cover);
  };
  auto s2_tree = [&] {
    std::vector<NodeId> order(out.part.S2.begin(), out.part.S2.end());
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      return x[a] != x[b] ? x[a] > x[b] : a < b;
    });
    const std::size_t size = order.size();
    out.group_size =
        2 * static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(size), 2.0 / 3.0)));
    double best = -1.0;
    for (std::size_t start = 0; start < size; start += out.group_size) {
      const std::size_t end = std::min(size, start + out.group_size);
      double p = 0.0;
      for (std::size_t i = start; i < end; ++i) p += graph.prize(order[i]);
      if (p > best) {
        best = p;
        out.group = make_node_set({order.begin() + start, order.begin() + end});
      }
    }
    const DistanceMap dm = node_weighted_shortest_paths(graph, graph.root());
    std::vector<NodeId> nodes{graph.root()};
    for (NodeId v : out.group) {
      for (NodeId u : dm.path_to(v)) nodes.push_back(u);
    }
    return build_arborescence(graph, make_node_set(std::move(nodes)));
  };

  out.s1_branch = out.s1_mass >= Q / 2.0 || out.s1_mass >= out.s2_mass;
  RootedTree tree = out.s1_branch ? s1_tree() : s2_tree();
  if (tree.prize_additive < Q / 2.0 && !out.part.S2.empty() && out.s1_branch) {
    // LP rounding noise can leave the S1 side a hair short; the S2 side then
    // carries the mass.
    out.s1_branch = false;
    tree = s2_tree();
  }
  validate_tree(graph, tree);
  return tree;
}

SolveReport solve_dst(const NodeWeightedGraph& graph, const NodeSet& terminals,
                      double epsilon) {
  const auto start = std::chrono::steady_clock::now();
  if (!(epsilon > 0.0)) throw Error(ErrorKind::Input, "epsilon must be positive");
  const NodeSet reach = reachable_from(graph, graph.root());
  for (NodeId t : terminals) {
    graph.check_node(t);
    if (!set_contains(reach, t)) {
      throw Error(ErrorKind::Infeasible,
                  "terminal " + std::to_string(t) + " is unreachable from the root");
    }
  }
  SolveReport report;
  report.epsilon = epsilon;
  const auto schedule = guess_cost_schedule_for(graph, epsilon);
  report.guesses_tried = static_cast<int>(schedule.size());
  std::optional<RootedTree> best;
  double lp_bound = kInfinity;
  std::set<std::vector<NodeId>> seen;
  for (double g : schedule) {
    if (g < graph.cost(graph.root())) continue;
    NodeWeightedGraph pruned = prune_to_b_proper(graph, g);
    std::vector<NodeId> key(pruned.origins().begin(), pruned.origins().end());
    if (!seen.insert(key).second) continue;
    const auto to_sub = sub_ids(pruned, graph.size());
    NodeSet k_sub;
    bool complete = true;
    for (NodeId t : terminals) {
      if (to_sub[t] == kNoNode) complete = false;
      else k_sub.push_back(to_sub[t]);
    }
    if (!complete) continue;
    k_sub = make_node_set(std::move(k_sub));
    RelaxationBundle bundle = build_lp_dst(pruned, k_sub);
    LpSolution sol = solve_lp(bundle.model);
    if (sol.status != LpStatus::Optimal) continue;
    lp_bound = std::min(lp_bound, sol.objective_value);
    const auto x = capacity_values(bundle, sol.values);
    const double theta = 1.0 / std::sqrt(static_cast<double>(pruned.size()));
    const SupportPartition part = partition_support(x, theta, theta);
    const ExpensiveCover cover = expensive_cover(pruned, part, k_sub, x);
    RootedTree tree = lift_tree(span_cover(pruned, part, cover), pruned, graph);
    if (!best || tree.cost < best->cost) best = std::move(tree);
  }
  if (!best) {
    throw Error(ErrorKind::Infeasible, "no cost guess admits a tree spanning the terminals");
  }
  validate_tree(graph, *best);
  for (NodeId t : terminals) {
    if (!best->contains(t)) {
      throw Error(ErrorKind::Contract, "DST output misses terminal " + std::to_string(t));
    }
  }
  report.tree = std::move(*best);
  report.lp_bound = lp_bound;
  report.branch = "dst";
  finish_report(report, std::nullopt, std::nullopt, report.tree.prize_additive);
  report.wallclock_ms = elapsed_ms(start);
  return report;
}

SolveReport solve_bdrat(const NodeWeightedGraph& graph, double B,
                        double epsilon) {
  const auto start = std::chrono::steady_clock::now();
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorKind::Input, "epsilon must lie in (0, 1]");
  }
  NodeWeightedGraph pruned = prune_to_b_proper(graph, B);
  RelaxationBundle bundle =
      build_const_drat(pruned, B, std::nullopt, LpObjective::MaxPrize);
  LpSolution sol = solve_lp(bundle.model);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorKind::Numerical, "budget LP is not solvable although x = 0 is feasible");
  }
  SolveReport report;
  report.epsilon = epsilon;
  report.guesses_tried = 1;
  report.lp_bound = sol.objective_value;
  const auto x = capacity_values(bundle, sol.values);
  GoodTreeInfo info;
  RootedTree tree = good_tree_from_fraction(pruned, x, B, sol.objective_value,
                                            max_distance(pruned), &info);
  report.branch = info.s1_branch ? "s1" : "s2";
  if (tree.cost > B) {
    report.trimmed = true;
    report.gamma_in = tree.prize_additive / tree.cost;
    tree = trim_additive(tree, pruned, B, epsilon, report.gamma_in);
  }
  report.tree = lift_tree(tree, pruned, graph);
  validate_tree(graph, report.tree);
  if (report.tree.cost > (1.0 + epsilon) * B * (1.0 + 1e-9)) {
    throw Error(ErrorKind::Contract, "B-DRAT output exceeds (1+eps)B");
  }
  finish_report(report, B, std::nullopt, report.tree.prize_additive);
  report.wallclock_ms = elapsed_ms(start);
  return report;
}

SolveReport solve_qdrat(const NodeWeightedGraph& graph, double Q,
                        double epsilon) {
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
    NodeWeightedGraph pruned = prune_to_b_proper(graph, g);
    std::vector<NodeId> key(pruned.origins().begin(), pruned.origins().end());
    if (!seen.insert(key).second) continue;
    RelaxationBundle bundle =
        build_const_drat(pruned, std::nullopt, Q, LpObjective::MinCost);
    LpSolution sol = solve_lp(bundle.model);
    if (sol.status != LpStatus::Optimal) continue;
    lp_bound = std::min(lp_bound, sol.objective_value);
    const auto x = capacity_values(bundle, sol.values);
    GoodTreeInfo info;
    RootedTree tree = good_tree_from_fraction(
        pruned, x, sol.objective_value, Q, max_distance(pruned), &info);
    tree = lift_tree(tree, pruned, graph);
    if (!best || tree.cost < best->cost) {
      best = std::move(tree);
      best_branch = info.s1_branch ? "s1" : "s2";
    }
  }
  if (!best) throw Error(ErrorKind::Infeasible, "quota is unreachable");
  validate_tree(graph, *best);
  if (best->prize_additive < Q / 2.0 - 1e-9 * std::max(1.0, Q)) {
    throw Error(ErrorKind::Contract, "Q-DRAT output prize below Q/2");
  }
  report.tree = std::move(*best);
  report.lp_bound = lp_bound;
  report.branch = best_branch;
  finish_report(report, std::nullopt, Q, report.tree.prize_additive);
  report.wallclock_ms = elapsed_ms(start);
  return report;
}

SolveReport quota_via_budget(const NodeWeightedGraph& graph, double Q,
                             const BudgetSolver& solver, double epsilon,
                             double alpha, const SetPrize& prize) {
  const auto start = std::chrono::steady_clock::now();
  if (!(epsilon > 0.0)) throw Error(ErrorKind::Input, "epsilon must be positive");
  if (!(alpha >= 1.0)) throw Error(ErrorKind::Input, "alpha must be at least 1");
  const SetPrize measure =
      prize ? prize : [&](const NodeSet& s) { return node_set_prize(graph, s); };
  double c_min = kInfinity;
  for (NodeId v = 0; v < graph.size(); ++v) {
    if (graph.cost(v) > 0.0) c_min = std::min(c_min, graph.cost(v));
  }
  const double C = graph.total_cost();
  double B = C > 0.0 ? c_min : 0.0;
  SolveReport report;
  report.epsilon = epsilon;
  for (int iter = 1;; ++iter) {
    std::optional<RootedTree> tree;
    try {
      tree = solver(graph, B);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Infeasible) throw;
    }
    if (tree && measure(tree->members) >= Q / alpha) {
      report.tree = std::move(*tree);
      report.iterations = iter;
      break;
    }
    if (B >= C) {
      throw Error(ErrorKind::Infeasible,
                  "quota unreachable even with the full budget");
    }
    B = std::min((1.0 + epsilon) * B, C);
  }
  report.guesses_tried = report.iterations;
  report.branch = "budget-loop";
  finish_report(report, std::nullopt, Q, measure(report.tree.members));
  report.wallclock_ms = elapsed_ms(start);
  return report;
}

}  // namespace nwst
