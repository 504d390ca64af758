#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nwst/graph.hpp"

namespace nwst {

enum class OracleKind { Additive, Coverage, Table };

/// Monotone submodular set function over node ids 0..n-1 with p(empty) = 0.
/// Instances are immutable, so eval() may be called from several threads.
class PrizeOracle {
 public:
  PrizeOracle() = default;

  static PrizeOracle additive(std::vector<double> prize);
  /// covers[v] lists the elements node v covers; weights[e] is the weight of
  /// element e.
  static PrizeOracle coverage(std::vector<std::vector<int>> covers,
                              std::vector<double> weights);
  /// values[mask] = p(set encoded by mask); n <= 16.
  static PrizeOracle table(int n, std::vector<double> values);

  OracleKind kind() const { return kind_; }
  int size() const { return n_; }
  double eval(std::span<const NodeId> set) const;
  double eval_mask(std::uint32_t mask) const;  // n <= 32
  double singleton(NodeId v) const;

  /// Oracle over a subgraph whose node i was node origins[i] here.
  PrizeOracle restricted(std::span<const NodeId> origins) const;

  const std::vector<double>& prizes() const { return prize_; }
  const std::vector<std::vector<int>>& covers() const { return covers_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  OracleKind kind_ = OracleKind::Additive;
  int n_ = 0;
  std::vector<double> prize_;
  std::vector<std::vector<int>> covers_;
  std::vector<double> weights_;
  std::vector<double> table_;
};

/// Samples random (S, a, b) triples and throws Contract on a monotonicity or
/// diminishing-returns violation.
void check_oracle_contract(const PrizeOracle& oracle, std::uint64_t seed,
                           int samples = 200);

/// Capacities x over tree.members (same order) with every row
/// sum_{v in S} x_v p_v <= p(S) satisfied and the row for all members tight.
/// Start value 1/|members|; raises in ascending id order.
std::vector<double> construct_tight_capacities(const RootedTree& tree,
                                               const PrizeOracle& oracle);

}  // namespace nwst
