#include "nwst/flow_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include "nwst/error.hpp"

namespace nwst {

int VariableIndex::flow(NodeId commodity, NodeId tail, NodeId head) const {
  auto it = flow_column.find({commodity, tail, head});
  return it == flow_column.end() ? -1 : it->second;
}

namespace {

NodeSet reverse_reachable(const NodeWeightedGraph& g, NodeId target) {
  std::vector<char> seen(g.size(), 0);
  std::vector<NodeId> stack{target};
  seen[target] = 1;
  NodeSet out;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (NodeId w : g.in(u)) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return make_node_set(std::move(out));
}

std::string col_name(NodeId k, NodeId w, NodeId u) {
  return "f_" + std::to_string(k) + "_" + std::to_string(w) + "_" +
         std::to_string(u);
}

// Capacity columns plus Const2 flow rows for the given commodities.
void add_flow_structure(RelaxationBundle& b, const NodeSet& commodities) {
  const NodeWeightedGraph& g = b.graph;
  const NodeId r = g.root();
  LpModel& m = b.model;
  VariableIndex& idx = b.index;
  idx.node_count = g.size();
  for (NodeId v = 0; v < g.size(); ++v) {
    m.add_variable(0.0, 0.0, 1.0, "x_" + std::to_string(v));
  }
  const NodeSet forward = reachable_from(g, r);
  for (NodeId k : commodities) {
    if (k == r) continue;
    idx.commodities.push_back(k);
    const NodeSet backward = reverse_reachable(g, k);
    // out_cols[w]: columns of arcs leaving w; in_cols[w]: entering w.
    std::map<NodeId, std::vector<int>> out_cols, in_cols;
    for (NodeId w : forward) {
      if (w == k || !set_contains(backward, w)) continue;
      for (NodeId u : g.out(w)) {
        if (u == r || !set_contains(backward, u)) continue;
        const int col = m.add_variable(0.0, 0.0, 1.0, col_name(k, w, u));
        idx.flows.push_back({k, w, u});
        idx.flow_column[{k, w, u}] = col;
        out_cols[w].push_back(col);
        in_cols[u].push_back(col);
      }
    }
    const std::string tag = std::to_string(k);
    {
      LpRow row;
      row.name = "inflow_" + tag;
      row.rel = Relation::Equal;
      for (int c : in_cols[k]) {
        row.index.push_back(c);
        row.value.push_back(1.0);
      }
      row.index.push_back(idx.capacity(k));
      row.value.push_back(-1.0);
      m.add_row(std::move(row));
    }
    for (const auto& [w, cols] : out_cols) {
      LpRow row;
      row.name = "cap_" + tag + "_" + std::to_string(w);
      row.rel = Relation::LessEqual;
      for (int c : cols) {
        row.index.push_back(c);
        row.value.push_back(1.0);
      }
      row.index.push_back(idx.capacity(w));
      row.value.push_back(-b.capacity_coef);
      m.add_row(std::move(row));
    }
    std::set<NodeId> touched;
    for (const auto& [w, cols] : out_cols) touched.insert(w);
    for (const auto& [w, cols] : in_cols) touched.insert(w);
    for (NodeId w : touched) {
      if (w == r || w == k) continue;
      LpRow row;
      row.name = "cons_" + tag + "_" + std::to_string(w);
      row.rel = Relation::Equal;
      for (int c : in_cols[w]) {
        row.index.push_back(c);
        row.value.push_back(1.0);
      }
      for (int c : out_cols[w]) {
        row.index.push_back(c);
        row.value.push_back(-1.0);
      }
      m.add_row(std::move(row));
    }
  }
}

void add_side_rows(RelaxationBundle& b, LpObjective objective) {
  const NodeWeightedGraph& g = b.graph;
  const NodeId n = g.size();
  LpModel& m = b.model;
  if (b.budget) {
    LpRow row;
    row.name = "budget";
    row.rel = Relation::LessEqual;
    row.rhs = *b.budget;
    for (NodeId v = 0; v < n; ++v) {
      if (g.cost(v) == 0.0) continue;
      row.index.push_back(v);
      row.value.push_back(g.cost(v));
    }
    m.add_row(std::move(row));
  }
  if (b.quota) {
    LpRow row;
    row.name = "quota";
    row.rel = Relation::GreaterEqual;
    row.rhs = *b.quota;
    for (NodeId v = 0; v < n; ++v) {
      if (b.singleton_prize[v] == 0.0) continue;
      row.index.push_back(v);
      row.value.push_back(b.singleton_prize[v]);
    }
    m.add_row(std::move(row));
  }
  if (b.budget && b.quota) {
    m.sense = Sense::Maximize;
    return;
  }
  if (objective == LpObjective::MaxPrize) {
    m.sense = Sense::Maximize;
    for (NodeId v = 0; v < n; ++v) m.objective[v] = b.singleton_prize[v];
  } else {
    m.sense = Sense::Minimize;
    for (NodeId v = 0; v < n; ++v) m.objective[v] = g.cost(v);
  }
}

void check_params(std::optional<double> budget, std::optional<double> quota,
                  LpObjective objective) {
  if (!budget && !quota) {
    throw Error(ErrorKind::Input, "relaxation needs a budget or a quota");
  }
  if (budget && quota) return;
  if (objective == LpObjective::MaxPrize && !budget) {
    throw Error(ErrorKind::Input, "prize maximization needs a budget");
  }
  if (objective == LpObjective::MinCost && !quota) {
    throw Error(ErrorKind::Input, "cost minimization needs a quota");
  }
}

NodeSet all_nodes(const NodeWeightedGraph& g) {
  NodeSet s(g.size());
  for (NodeId v = 0; v < g.size(); ++v) s[v] = v;
  return s;
}

}  // namespace

RelaxationBundle build_const_drat(const NodeWeightedGraph& graph,
                                  std::optional<double> budget,
                                  std::optional<double> quota,
                                  LpObjective objective) {
  if (!graph.directed()) {
    throw Error(ErrorKind::Input, "Const-DRAT needs a directed graph");
  }
  check_params(budget, quota, objective);
  RelaxationBundle b;
  b.graph = graph;
  b.kind = budget && !quota ? ProblemKind::Budget : ProblemKind::Quota;
  b.budget = budget;
  b.quota = quota;
  b.capacity_coef = 1.0;
  b.singleton_prize.assign(graph.prizes().begin(), graph.prizes().end());
  add_flow_structure(b, all_nodes(graph));
  add_side_rows(b, objective);
  return b;
}

RelaxationBundle build_lp_dst(const NodeWeightedGraph& graph,
                              const NodeSet& terminals) {
  if (!graph.directed()) {
    throw Error(ErrorKind::Input, "LP-DST needs a directed graph");
  }
  const NodeSet forward = reachable_from(graph, graph.root());
  for (NodeId t : terminals) {
    graph.check_node(t);
    if (!set_contains(forward, t)) {
      throw Error(ErrorKind::Infeasible,
                  "terminal " + std::to_string(t) + " is unreachable from the root");
    }
  }
  RelaxationBundle b;
  b.graph = graph;
  b.kind = ProblemKind::Dst;
  b.capacity_coef = 1.0;
  b.singleton_prize.assign(graph.prizes().begin(), graph.prizes().end());
  add_flow_structure(b, terminals);
  for (NodeId t : terminals) b.model.lo[b.index.capacity(t)] = 1.0;
  b.model.sense = Sense::Minimize;
  for (NodeId v = 0; v < graph.size(); ++v) b.model.objective[v] = graph.cost(v);
  return b;
}

RelaxationBundle build_const_urst(const NodeWeightedGraph& graph,
                                  const PrizeOracle& oracle,
                                  std::optional<double> budget,
                                  std::optional<double> quota,
                                  LpObjective objective,
                                  const std::vector<NodeSet>& cuts) {
  if (graph.directed()) {
    throw Error(ErrorKind::Input, "Const-URST needs an undirected graph");
  }
  if (oracle.size() != graph.size()) {
    throw Error(ErrorKind::Input, "prize oracle size differs from the graph");
  }
  check_params(budget, quota, objective);
  check_oracle_contract(oracle, 0x5eed);
  RelaxationBundle b;
  b.graph = graph;
  b.kind = budget && !quota ? ProblemKind::SubmodularBudget
                            : ProblemKind::SubmodularQuota;
  b.budget = budget;
  b.quota = quota;
  b.capacity_coef = static_cast<double>(graph.size());
  b.singleton_prize.resize(graph.size());
  for (NodeId v = 0; v < graph.size(); ++v) b.singleton_prize[v] = oracle.singleton(v);
  add_flow_structure(b, all_nodes(graph));
  add_side_rows(b, objective);
  for (const NodeSet& s : cuts) add_submodular_row(b, s, oracle);
  return b;
}

bool add_submodular_row(RelaxationBundle& bundle, const NodeSet& set,
                        const PrizeOracle& oracle) {
  if (std::find(bundle.cuts.begin(), bundle.cuts.end(), set) != bundle.cuts.end()) {
    return false;
  }
  LpRow row;
  row.name = "sub_" + std::to_string(bundle.cuts.size());
  row.rel = Relation::LessEqual;
  row.rhs = oracle.eval(set);
  for (NodeId v : set) {
    if (bundle.singleton_prize[v] == 0.0) continue;
    row.index.push_back(bundle.index.capacity(v));
    row.value.push_back(bundle.singleton_prize[v]);
  }
  bundle.model.add_row(std::move(row));
  bundle.cuts.push_back(set);
  return true;
}

std::vector<double> embed_tree_as_lp_solution(const RootedTree& tree,
                                              const RelaxationBundle& bundle) {
  std::vector<double> values(bundle.model.num_vars, 0.0);
  for (NodeId v : tree.members) values[bundle.index.capacity(v)] = 1.0;
  const NodeId r = bundle.graph.root();
  for (NodeId k : bundle.index.commodities) {
    if (!tree.contains(k)) continue;
    NodeId cur = k;
    while (cur != r) {
      auto it = tree.parent.find(cur);
      if (it == tree.parent.end()) {
        throw Error(ErrorKind::Contract, "tree is not rooted at the bundle root");
      }
      const int col = bundle.index.flow(k, it->second, cur);
      if (col < 0) {
        throw Error(ErrorKind::Contract, "tree arc missing from the flow model");
      }
      values[col] = 1.0;
      cur = it->second;
    }
  }
  return values;
}

std::vector<double> capacity_values(const RelaxationBundle& bundle,
                                    std::span<const double> values) {
  std::vector<double> x(bundle.index.node_count);
  for (NodeId v = 0; v < bundle.index.node_count; ++v) {
    double val = values[bundle.index.capacity(v)];
    if (val < kFeasTol) val = 0.0;
    if (val > 1.0 - kFeasTol) val = 1.0;
    x[v] = val;
  }
  return x;
}

std::optional<NodeSet> separate_submodular(std::span<const double> x,
                                           const PrizeOracle& oracle,
                                           int support_cap, double* violation) {
  NodeSet support;
  for (NodeId v = 0; v < static_cast<NodeId>(x.size()); ++v) {
    if (x[v] > 0.0) support.push_back(v);
  }
  if (violation) *violation = 0.0;
  if (static_cast<int>(support.size()) > support_cap) {
    throw Error(ErrorKind::Size,
                "separation support has " + std::to_string(support.size()) +
                    " nodes, above the cap of " + std::to_string(support_cap) +
                    "; raise the cap or shrink the instance");
  }
  const int k = static_cast<int>(support.size());
  double best = kFeasTol;
  std::optional<NodeSet> best_set;
  std::vector<NodeId> set;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    set.clear();
    double load = 0.0;
    for (int i = 0; i < k; ++i) {
      if (mask >> i & 1u) {
        set.push_back(support[i]);
        load += x[support[i]] * oracle.singleton(support[i]);
      }
    }
    const double gap = load - oracle.eval(set);
    if (gap > best) {
      best = gap;
      best_set = set;
    }
  }
  if (violation && best_set) *violation = best;
  return best_set;
}

RowGenerationResult solve_const_urst(const NodeWeightedGraph& graph,
                                     const PrizeOracle& oracle,
                                     std::optional<double> budget,
                                     std::optional<double> quota,
                                     LpObjective objective, int support_cap,
                                     int max_rounds) {
  std::vector<NodeSet> cuts;
  for (NodeId v = 0; v < graph.size(); ++v) cuts.push_back({v});
  RowGenerationResult res{
      build_const_urst(graph, oracle, budget, quota, objective, cuts), {}, 0};
  res.solution = solve_lp(res.bundle.model);
  if (res.solution.status != LpStatus::Optimal) return res;

  NodeSet support;
  {
    const auto x = capacity_values(res.bundle, res.solution.values);
    for (NodeId v = 0; v < graph.size(); ++v) {
      if (x[v] > 0.0) support.push_back(v);
    }
  }
  if (!support.empty() && add_submodular_row(res.bundle, support, oracle)) {
    res.solution = solve_lp(res.bundle.model);
    if (res.solution.status != LpStatus::Optimal) return res;
  }
  while (true) {
    const auto x = capacity_values(res.bundle, res.solution.values);
    auto cut = separate_submodular(x, oracle, support_cap);
    if (!cut) return res;
    if (res.rounds >= max_rounds) {
      throw Error(ErrorKind::Numerical, "submodular row generation exceeded " +
                                            std::to_string(max_rounds) + " rounds");
    }
    ++res.rounds;
    if (!add_submodular_row(res.bundle, *cut, oracle)) {
      throw Error(ErrorKind::Numerical, "separation returned an existing cut");
    }
    res.solution = solve_lp(res.bundle.model);
    if (res.solution.status != LpStatus::Optimal) return res;
  }
}

namespace {

// Edmonds-Karp on a small dense residual graph.
double max_flow(std::vector<std::vector<double>>& cap, int s, int t) {
  const int n = static_cast<int>(cap.size());
  double total = 0.0;
  while (true) {
    std::vector<int> prev(n, -1);
    prev[s] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && prev[t] < 0) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v) {
        if (prev[v] < 0 && cap[u][v] > 1e-12) {
          prev[v] = u;
          q.push(v);
        }
      }
    }
    if (prev[t] < 0) return total;
    double push = std::numeric_limits<double>::infinity();
    for (int v = t; v != s; v = prev[v]) push = std::min(push, cap[prev[v]][v]);
    for (int v = t; v != s; v = prev[v]) {
      cap[prev[v]][v] -= push;
      cap[v][prev[v]] += push;
    }
    total += push;
  }
}

}  // namespace

bool capacities_support_flow(const NodeWeightedGraph& graph,
                             std::span<const double> x, double capacity_coef,
                             double tol) {
  const NodeId n = graph.size();
  const NodeId r = graph.root();
  const double big = capacity_coef * n + 1.0;
  for (NodeId v = 0; v < n; ++v) {
    if (v == r || x[v] <= 0.0) continue;
    // Node w splits into w_in = 2w and w_out = 2w + 1.
    std::vector<std::vector<double>> cap(2 * n, std::vector<double>(2 * n, 0.0));
    for (NodeId w = 0; w < n; ++w) {
      cap[2 * w][2 * w + 1] = w == v ? big : capacity_coef * x[w];
      for (NodeId u : graph.out(w)) cap[2 * w + 1][2 * u] = big;
    }
    if (max_flow(cap, 2 * r, 2 * v) < x[v] - tol) return false;
  }
  return true;
}

}  // namespace nwst
