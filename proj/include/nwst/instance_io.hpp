#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nwst/graph.hpp"
#include "nwst/submodular.hpp"

namespace nwst {

enum class ProblemType { Dst, Bdrat, Qdrat, Burst, Qurst };

const char* to_string(ProblemType type);
std::optional<ProblemType> problem_from_string(const std::string& name);
bool is_submodular(ProblemType type);

/// Parsed instance. Node ids inside `graph` are dense (declaration order);
/// `labels[v]` is the id used in the file.
struct Instance {
  ProblemType problem = ProblemType::Dst;
  NodeWeightedGraph graph;
  std::vector<long long> labels;
  std::optional<double> budget;
  std::optional<double> quota;
  NodeSet terminals;
  double epsilon = 0.5;
  // Coverage prizes; empty covers means additive prizes.
  bool coverage = false;
  std::vector<std::vector<int>> covers;  // dense node -> dense elements
  std::vector<long long> element_labels;
  std::vector<double> weights;
  std::optional<std::uint64_t> seed;  // from a "# seed" comment, if any

  PrizeOracle oracle() const;
  NodeId node_of(long long label) const;  // kNoNode when unknown
};

/// Throws Input with "line N: reason" on malformed text.
Instance parse_instance(const std::string& text);
std::string emit_instance(const Instance& instance);

struct Solution {
  bool ok = true;
  double cost = 0.0;
  double prize = 0.0;
  std::vector<long long> nodes;
  std::vector<std::pair<long long, long long>> arcs;  // parent, child
};

Solution parse_solution(const std::string& text);
std::string emit_solution(const Solution& solution);
Solution solution_from_tree(const Instance& instance, const RootedTree& tree,
                            double prize);

struct GenOptions {
  ProblemType problem = ProblemType::Bdrat;
  int n = 8;
  double density = 0.3;
  int cost_min = 1;
  int cost_max = 10;
  bool coverage = false;
  std::uint64_t seed = 1;
};

Instance gen_random(const GenOptions& options);

/// Recomputes structure, cost, prize and feasibility of a solution. Returns
/// an empty string when everything checks out, else the first problem found.
std::string verify_solution(const Instance& instance, const Solution& solution,
                            double epsilon);

std::string format_real(double value);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace nwst
