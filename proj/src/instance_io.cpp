#include "nwst/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "nwst/error.hpp"

namespace nwst {

const char* to_string(ProblemType type) {
  switch (type) {
    case ProblemType::Dst:
      return "dst";
    case ProblemType::Bdrat:
      return "bdrat";
    case ProblemType::Qdrat:
      return "qdrat";
    case ProblemType::Burst:
      return "burst";
    case ProblemType::Qurst:
      return "qurst";
  }
  return "?";
}

std::optional<ProblemType> problem_from_string(const std::string& name) {
  for (ProblemType t : {ProblemType::Dst, ProblemType::Bdrat, ProblemType::Qdrat,
                        ProblemType::Burst, ProblemType::Qurst}) {
    if (name == to_string(t)) return t;
  }
  return std::nullopt;
}

bool is_submodular(ProblemType type) {
  return type == ProblemType::Burst || type == ProblemType::Qurst;
}

static bool is_directed_kind(ProblemType type) { return !is_submodular(type); }

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

PrizeOracle Instance::oracle() const {
  if (!coverage) {
    return PrizeOracle::additive({graph.prizes().begin(), graph.prizes().end()});
  }
  return PrizeOracle::coverage(covers, weights);
}

NodeId Instance::node_of(long long label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? kNoNode : static_cast<NodeId>(it - labels.begin());
}

namespace {

[[noreturn]] void fail(int line, const std::string& why) {
  throw Error(ErrorKind::Input, "line " + std::to_string(line) + ": " + why);
}

double to_real(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v)) fail(line, "bad number '" + s + "'");
  return v;
}

long long to_int(const std::string& s, int line) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') fail(line, "bad integer '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  Instance inst;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool header = false;
  std::optional<ProblemType> problem;
  std::optional<bool> directed;
  std::optional<long long> declared;
  int nodes_line = 0;
  std::optional<long long> root_label;
  std::map<long long, NodeId> ids;
  std::vector<double> cost, prize;
  std::vector<std::pair<NodeId, NodeId>> arcs;
  std::set<std::pair<NodeId, NodeId>> arc_seen;
  std::map<long long, int> elem_ids;
  std::map<NodeId, std::vector<int>> covers;
  std::map<int, double> weights;
  std::set<NodeId> terminals;

  auto node = [&](const std::string& tok, int line) {
    const long long label = to_int(tok, line);
    auto it = ids.find(label);
    if (it == ids.end()) fail(line, "node " + tok + " used before declaration");
    return it->second;
  };
  auto element = [&](const std::string& tok, int line) {
    const long long label = to_int(tok, line);
    auto [it, fresh] = elem_ids.emplace(label, static_cast<int>(elem_ids.size()));
    if (fresh) inst.element_labels.push_back(label);
    return it->second;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) {
      const auto c = split(raw.substr(hash + 1));
      if (c.size() == 2 && c[0] == "seed") {
        inst.seed = static_cast<std::uint64_t>(std::strtoull(c[1].c_str(), nullptr, 10));
      }
      raw = raw.substr(0, hash);
    }
    const auto tok = split(raw);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "steiner-instance" || tok[1] != "v1") {
        fail(line_no, "expected header 'steiner-instance v1'");
      }
      header = true;
      continue;
    }
    const std::string& tag = tok[0];
    auto want = [&](std::size_t n) {
      if (tok.size() != n) fail(line_no, "'" + tag + "' takes " + std::to_string(n - 1) + " field(s)");
    };
    if (tag == "problem") {
      want(2);
      if (problem) fail(line_no, "duplicate problem record");
      problem = problem_from_string(tok[1]);
      if (!problem) fail(line_no, "unknown problem kind '" + tok[1] + "'");
    } else if (tag == "directed") {
      want(2);
      if (directed) fail(line_no, "duplicate directed record");
      if (tok[1] != "true" && tok[1] != "false") fail(line_no, "directed must be true or false");
      directed = tok[1] == "true";
    } else if (tag == "nodes") {
      want(2);
      if (declared) fail(line_no, "duplicate nodes record");
      declared = to_int(tok[1], line_no);
      nodes_line = line_no;
      if (*declared < 1) fail(line_no, "need at least one node");
    } else if (tag == "v") {
      want(4);
      const long long label = to_int(tok[1], line_no);
      if (ids.count(label)) fail(line_no, "node " + tok[1] + " declared twice");
      const double c = to_real(tok[2], line_no), p = to_real(tok[3], line_no);
      if (c < 0.0 || p < 0.0) fail(line_no, "costs and prizes must be nonnegative");
      ids[label] = static_cast<NodeId>(cost.size());
      inst.labels.push_back(label);
      cost.push_back(c);
      prize.push_back(p);
    } else if (tag == "a" || tag == "e") {
      want(3);
      if (!directed) fail(line_no, "'directed' must precede connections");
      if ((tag == "a") != *directed) {
        fail(line_no, *directed ? "directed instances use 'a' records"
                                : "undirected instances use 'e' records");
      }
      const NodeId u = node(tok[1], line_no), v = node(tok[2], line_no);
      if (u == v) fail(line_no, "self-loop");
      const std::pair<NodeId, NodeId> key =
          *directed ? std::make_pair(u, v) : std::make_pair(std::min(u, v), std::max(u, v));
      if (!arc_seen.insert(key).second) fail(line_no, "duplicate connection");
      arcs.emplace_back(u, v);
    } else if (tag == "root") {
      want(2);
      if (root_label) fail(line_no, "duplicate root record");
      node(tok[1], line_no);
      root_label = to_int(tok[1], line_no);
    } else if (tag == "budget" || tag == "quota") {
      want(2);
      auto& slot = tag == "budget" ? inst.budget : inst.quota;
      if (slot) fail(line_no, "duplicate " + tag + " record");
      slot = to_real(tok[1], line_no);
      if (*slot < 0.0) fail(line_no, tag + " must be nonnegative");
    } else if (tag == "terminal") {
      want(2);
      terminals.insert(node(tok[1], line_no));
    } else if (tag == "cover") {
      if (tok.size() < 2) fail(line_no, "'cover' needs a node id");
      const NodeId v = node(tok[1], line_no);
      auto& list = covers[v];
      for (std::size_t i = 2; i < tok.size(); ++i) list.push_back(element(tok[i], line_no));
      inst.coverage = true;
    } else if (tag == "weight") {
      want(3);
      const int e = element(tok[1], line_no);
      if (weights.count(e)) fail(line_no, "duplicate weight for element " + tok[1]);
      weights[e] = to_real(tok[2], line_no);
      if (weights[e] < 0.0) fail(line_no, "weights must be nonnegative");
      inst.coverage = true;
    } else if (tag == "epsilon") {
      want(2);
      inst.epsilon = to_real(tok[1], line_no);
      if (!(inst.epsilon > 0.0)) fail(line_no, "epsilon must be positive");
    } else {
      fail(line_no, "unknown record '" + tag + "'");
    }
  }
  if (!header) fail(line_no, "empty instance");
  if (!problem) fail(line_no, "missing problem record");
  if (!directed) fail(line_no, "missing directed record");
  if (!declared) fail(line_no, "missing nodes record");
  if (!root_label) fail(line_no, "missing root record");
  if (static_cast<long long>(cost.size()) != *declared) {
    fail(nodes_line, "nodes says " + std::to_string(*declared) + " but " +
                         std::to_string(cost.size()) + " were declared");
  }
  inst.problem = *problem;
  if (*directed != is_directed_kind(*problem)) {
    fail(line_no, std::string(to_string(*problem)) + " requires directed " +
                      (is_directed_kind(*problem) ? "true" : "false"));
  }
  const bool wants_budget = *problem == ProblemType::Bdrat || *problem == ProblemType::Burst;
  const bool wants_quota = *problem == ProblemType::Qdrat || *problem == ProblemType::Qurst;
  if (wants_budget && (!inst.budget || inst.quota)) {
    fail(line_no, "this problem takes exactly one budget record and no quota");
  }
  if (wants_quota && (!inst.quota || inst.budget)) {
    fail(line_no, "this problem takes exactly one quota record and no budget");
  }
  if (*problem == ProblemType::Dst && (inst.budget || inst.quota)) {
    fail(line_no, "dst takes neither budget nor quota");
  }
  if (!terminals.empty() && *problem != ProblemType::Dst) {
    fail(line_no, "terminal records are only valid for dst");
  }
  if (inst.coverage && !is_submodular(*problem)) {
    fail(line_no, "cover/weight records are only valid for burst and qurst");
  }

  inst.graph = NodeWeightedGraph(*directed, cost, prize, ids.at(*root_label));
  for (const auto& [u, v] : arcs) inst.graph.add_arc(u, v);
  inst.terminals.assign(terminals.begin(), terminals.end());
  if (inst.coverage) {
    inst.covers.assign(cost.size(), {});
    for (auto& [v, list] : covers) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      inst.covers[v] = list;
    }
    inst.weights.assign(elem_ids.size(), 1.0);
    for (const auto& [e, w] : weights) inst.weights[e] = w;
  }
  return inst;
}

std::string emit_instance(const Instance& inst) {
  std::ostringstream out;
  const NodeWeightedGraph& g = inst.graph;
  out << "steiner-instance v1\n";
  if (inst.seed) out << "# seed " << *inst.seed << "\n";
  out << "problem " << to_string(inst.problem) << "\n";
  out << "directed " << (g.directed() ? "true" : "false") << "\n";
  out << "nodes " << g.size() << "\n";
  for (NodeId v = 0; v < g.size(); ++v) {
    out << "v " << inst.labels[v] << ' ' << format_real(g.cost(v)) << ' '
        << format_real(g.prize(v)) << "\n";
  }
  for (NodeId u = 0; u < g.size(); ++u) {
    for (NodeId v : g.out(u)) {
      if (g.directed()) out << "a " << inst.labels[u] << ' ' << inst.labels[v] << "\n";
      else if (u < v) out << "e " << inst.labels[u] << ' ' << inst.labels[v] << "\n";
    }
  }
  out << "root " << inst.labels[g.root()] << "\n";
  if (inst.budget) out << "budget " << format_real(*inst.budget) << "\n";
  if (inst.quota) out << "quota " << format_real(*inst.quota) << "\n";
  for (NodeId t : inst.terminals) out << "terminal " << inst.labels[t] << "\n";
  if (inst.coverage) {
    for (NodeId v = 0; v < g.size(); ++v) {
      if (inst.covers[v].empty()) continue;
      std::vector<long long> shown;
      for (int e : inst.covers[v]) shown.push_back(inst.element_labels[e]);
      std::sort(shown.begin(), shown.end());
      out << "cover " << inst.labels[v];
      for (long long e : shown) out << ' ' << e;
      out << "\n";
    }
    // dense element ids follow first appearance; print by label instead
    std::vector<std::size_t> order(inst.weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return inst.element_labels[a] < inst.element_labels[b];
    });
    for (std::size_t e : order) {
      out << "weight " << inst.element_labels[e] << ' ' << format_real(inst.weights[e]) << "\n";
    }
  }
  out << "epsilon " << format_real(inst.epsilon) << "\n";
  return out.str();
}

Solution parse_solution(const std::string& text) {
  Solution sol;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool header = false, status = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const auto tok = split(raw);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "solution" || tok[1] != "v1") {
        fail(line_no, "expected header 'solution v1'");
      }
      header = true;
      continue;
    }
    const std::string& tag = tok[0];
    if (tag == "status" && tok.size() == 2) {
      if (tok[1] != "ok" && tok[1] != "infeasible") fail(line_no, "unknown status");
      sol.ok = tok[1] == "ok";
      status = true;
    } else if (tag == "cost" && tok.size() == 2) {
      sol.cost = to_real(tok[1], line_no);
    } else if (tag == "prize" && tok.size() == 2) {
      sol.prize = to_real(tok[1], line_no);
    } else if (tag == "node" && tok.size() == 2) {
      sol.nodes.push_back(to_int(tok[1], line_no));
    } else if (tag == "arc" && tok.size() == 3) {
      sol.arcs.emplace_back(to_int(tok[1], line_no), to_int(tok[2], line_no));
    } else {
      fail(line_no, "unknown or malformed record '" + tag + "'");
    }
  }
  if (!header) fail(line_no, "empty solution");
  if (!status) fail(line_no, "missing status record");
  return sol;
}

std::string emit_solution(const Solution& sol) {
  std::ostringstream out;
  out << "solution v1\n";
  out << "status " << (sol.ok ? "ok" : "infeasible") << "\n";
  if (!sol.ok) return out.str();
  out << "cost " << format_real(sol.cost) << "\n";
  out << "prize " << format_real(sol.prize) << "\n";
  for (long long v : sol.nodes) out << "node " << v << "\n";
  for (const auto& [p, c] : sol.arcs) out << "arc " << p << ' ' << c << "\n";
  return out.str();
}

Solution solution_from_tree(const Instance& inst, const RootedTree& tree,
                            double prize) {
  Solution sol;
  sol.cost = tree.cost;
  sol.prize = prize;
  for (NodeId v : tree.members) sol.nodes.push_back(inst.labels[v]);
  for (const auto& [child, parent] : tree.parent) {
    sol.arcs.emplace_back(inst.labels[parent], inst.labels[child]);
  }
  std::sort(sol.arcs.begin(), sol.arcs.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return sol;
}

Instance gen_random(const GenOptions& opt) {
  if (opt.n < 1) throw Error(ErrorKind::Input, "n must be at least 1");
  if (!(opt.density > 0.0 && opt.density <= 1.0)) {
    throw Error(ErrorKind::Input, "density must lie in (0, 1]");
  }
  if (opt.cost_min < 0 || opt.cost_max < opt.cost_min) {
    throw Error(ErrorKind::Input, "bad cost range");
  }
  const bool directed = is_directed_kind(opt.problem);
  const bool coverage = opt.coverage && is_submodular(opt.problem);
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> cost_d(opt.cost_min, opt.cost_max);
  std::uniform_int_distribution<int> prize_d(0, 10);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const int n = opt.n;
  const int need = (n + 1) / 2;
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<double> cost(n), prize(n);
    for (int v = 0; v < n; ++v) {
      cost[v] = v == 0 ? 0.0 : cost_d(rng);
      prize[v] = v == 0 ? 0.0 : prize_d(rng);
    }
    Instance inst;
    inst.problem = opt.problem;
    inst.graph = NodeWeightedGraph(directed, cost, prize, 0);
    for (int u = 0; u < n; ++u) {
      for (int v = directed ? 0 : u + 1; v < n; ++v) {
        if (u != v && coin(rng) < opt.density) inst.graph.add_arc(u, v);
      }
    }
    const NodeSet reach = reachable_from(inst.graph, 0);
    if (static_cast<int>(reach.size()) < need) continue;
    for (int v = 0; v < n; ++v) inst.labels.push_back(v);
    inst.seed = opt.seed;
    inst.coverage = coverage;
    if (coverage) {
      const int elements = std::max(2, n);
      std::uniform_int_distribution<int> elem(0, elements - 1), many(1, 3), w(1, 5);
      inst.covers.assign(n, {});
      for (int v = 1; v < n; ++v) {
        const int k = many(rng);
        for (int i = 0; i < k; ++i) inst.covers[v].push_back(elem(rng));
        std::sort(inst.covers[v].begin(), inst.covers[v].end());
        inst.covers[v].erase(std::unique(inst.covers[v].begin(), inst.covers[v].end()),
                             inst.covers[v].end());
      }
      for (int e = 0; e < elements; ++e) {
        inst.element_labels.push_back(e);
        inst.weights.push_back(w(rng));
      }
    }
    const double total_cost = inst.graph.total_cost();
    double reach_prize = 0.0;
    if (coverage) {
      reach_prize = inst.oracle().eval(reach);
    } else {
      reach_prize = node_set_prize(inst.graph, reach);
    }
    switch (opt.problem) {
      case ProblemType::Bdrat:
      case ProblemType::Burst:
        inst.budget = std::round(0.3 * total_cost);
        break;
      case ProblemType::Qdrat:
      case ProblemType::Qurst:
        inst.quota = std::round(0.4 * reach_prize);
        break;
      case ProblemType::Dst: {
        std::vector<NodeId> pool(reach.begin() + 1, reach.end());
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(std::min<std::size_t>(pool.size(), 3));
        inst.terminals = make_node_set(pool);
        break;
      }
    }
    return inst;
  }
  throw Error(ErrorKind::Input, "generator could not reach half the nodes from the root (seed " +
                                    std::to_string(opt.seed) + ")");
}

std::string verify_solution(const Instance& inst, const Solution& sol,
                            double epsilon) {
  const NodeWeightedGraph& g = inst.graph;
  if (!sol.ok) return "solution reports infeasible";
  RootedTree tree;
  tree.root = g.root();
  std::vector<NodeId> members;
  for (long long label : sol.nodes) {
    const NodeId v = inst.node_of(label);
    if (v == kNoNode) return "unknown node " + std::to_string(label);
    members.push_back(v);
  }
  tree.members = make_node_set(members);
  if (tree.members.size() != members.size()) return "duplicate node record";
  for (const auto& [pl, cl] : sol.arcs) {
    const NodeId p = inst.node_of(pl), c = inst.node_of(cl);
    if (p == kNoNode || c == kNoNode) return "arc references an unknown node";
    if (!tree.parent.emplace(c, p).second) {
      return "node " + std::to_string(cl) + " has two parents";
    }
  }
  tree.cost = node_set_cost(g, tree.members);
  tree.prize_additive = node_set_prize(g, tree.members);
  try {
    validate_tree(g, tree);
  } catch (const Error& e) {
    return e.what();
  }
  double prize = tree.prize_additive;
  if (inst.coverage) {
    std::set<int> covered;
    for (NodeId v : tree.members) covered.insert(inst.covers[v].begin(), inst.covers[v].end());
    prize = 0.0;
    for (int e : covered) prize += inst.weights[e];
  }
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b));
  };
  if (!close(sol.cost, tree.cost)) {
    return "stated cost " + format_real(sol.cost) + " != recomputed " + format_real(tree.cost);
  }
  if (!close(sol.prize, prize)) {
    return "stated prize " + format_real(sol.prize) + " != recomputed " + format_real(prize);
  }
  const double slack = 1e-9;
  switch (inst.problem) {
    case ProblemType::Dst:
      for (NodeId t : inst.terminals) {
        if (!tree.contains(t)) return "terminal " + std::to_string(inst.labels[t]) + " not spanned";
      }
      break;
    case ProblemType::Bdrat:
    case ProblemType::Burst:
      if (tree.cost > (1.0 + epsilon) * *inst.budget * (1.0 + slack) + slack) {
        return "cost exceeds (1+eps)B";
      }
      break;
    case ProblemType::Qdrat:
      if (prize < *inst.quota / 2.0 - slack * std::max(1.0, *inst.quota)) {
        return "prize below Q/2";
      }
      break;
    case ProblemType::Qurst:
      if (prize < *inst.quota / (2.0 * std::sqrt(static_cast<double>(g.size()))) -
                      slack * std::max(1.0, *inst.quota)) {
        return "prize below Q/(2 sqrt n)";
      }
      break;
  }
  return {};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Input, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Input, "cannot write " + path);
  out << text;
}

}  // namespace nwst
