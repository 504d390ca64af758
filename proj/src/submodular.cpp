#include "nwst/submodular.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nwst/error.hpp"

namespace nwst {

PrizeOracle PrizeOracle::additive(std::vector<double> prize) {
  PrizeOracle o;
  o.kind_ = OracleKind::Additive;
  o.n_ = static_cast<int>(prize.size());
  for (double p : prize) {
    if (!(p >= 0.0)) throw Error(ErrorKind::Input, "negative prize");
  }
  o.prize_ = std::move(prize);
  return o;
}

PrizeOracle PrizeOracle::coverage(std::vector<std::vector<int>> covers,
                                  std::vector<double> weights) {
  PrizeOracle o;
  o.kind_ = OracleKind::Coverage;
  o.n_ = static_cast<int>(covers.size());
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorKind::Input, "negative element weight");
  }
  for (auto& list : covers) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (int e : list) {
      if (e < 0 || e >= static_cast<int>(weights.size())) {
        throw Error(ErrorKind::Input, "cover references unknown element");
      }
    }
  }
  o.covers_ = std::move(covers);
  o.weights_ = std::move(weights);
  o.prize_.resize(o.n_);
  for (int v = 0; v < o.n_; ++v) {
    NodeId id = v;
    o.prize_[v] = o.eval(std::span<const NodeId>(&id, 1));
  }
  return o;
}

PrizeOracle PrizeOracle::table(int n, std::vector<double> values) {
  if (n > 16) throw Error(ErrorKind::Size, "table oracle limited to 16 nodes");
  if (n < 0 || values.size() != (std::size_t{1} << n)) {
    throw Error(ErrorKind::Input, "table oracle needs 2^n values");
  }
  if (values[0] != 0.0) throw Error(ErrorKind::Input, "table oracle p(empty) != 0");
  PrizeOracle o;
  o.kind_ = OracleKind::Table;
  o.n_ = n;
  o.table_ = std::move(values);
  o.prize_.resize(n);
  for (int v = 0; v < n; ++v) o.prize_[v] = o.table_[std::size_t{1} << v];
  return o;
}

double PrizeOracle::eval(std::span<const NodeId> set) const {
  switch (kind_) {
    case OracleKind::Additive: {
      double total = 0.0;
      for (NodeId v : set) total += prize_[v];
      return total;
    }
    case OracleKind::Coverage: {
      std::vector<char> seen(weights_.size(), 0);
      double total = 0.0;
      for (NodeId v : set) {
        for (int e : covers_[v]) {
          if (!seen[e]) {
            seen[e] = 1;
            total += weights_[e];
          }
        }
      }
      return total;
    }
    case OracleKind::Table: {
      std::uint32_t mask = 0;
      for (NodeId v : set) mask |= 1u << v;
      return table_[mask];
    }
  }
  return 0.0;
}

double PrizeOracle::eval_mask(std::uint32_t mask) const {
  if (kind_ == OracleKind::Table) return table_[mask];
  std::vector<NodeId> set;
  for (int v = 0; v < n_ && v < 32; ++v) {
    if (mask >> v & 1u) set.push_back(v);
  }
  return eval(set);
}

double PrizeOracle::singleton(NodeId v) const { return prize_[v]; }

PrizeOracle PrizeOracle::restricted(std::span<const NodeId> origins) const {
  switch (kind_) {
    case OracleKind::Additive: {
      std::vector<double> p;
      for (NodeId v : origins) p.push_back(prize_[v]);
      return additive(std::move(p));
    }
    case OracleKind::Coverage: {
      std::vector<std::vector<int>> c;
      for (NodeId v : origins) c.push_back(covers_[v]);
      return coverage(std::move(c), weights_);
    }
    case OracleKind::Table: {
      const int k = static_cast<int>(origins.size());
      std::vector<double> values(std::size_t{1} << k);
      for (std::uint32_t mask = 0; mask < values.size(); ++mask) {
        std::uint32_t outer = 0;
        for (int i = 0; i < k; ++i) {
          if (mask >> i & 1u) outer |= 1u << origins[i];
        }
        values[mask] = table_[outer];
      }
      return table(k, std::move(values));
    }
  }
  return {};
}

void check_oracle_contract(const PrizeOracle& oracle, std::uint64_t seed,
                           int samples) {
  const int n = oracle.size();
  if (n < 2) return;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  const double tol = 1e-9;
  for (int s = 0; s < samples; ++s) {
    std::vector<NodeId> base;
    for (NodeId v = 0; v < n; ++v) {
      if (rng() % 3 == 0) base.push_back(v);
    }
    const NodeId a = pick(rng);
    NodeId b = pick(rng);
    if (a == b) b = (a + 1) % n;
    auto with = [&](std::initializer_list<NodeId> extra) {
      std::vector<NodeId> set = base;
      set.insert(set.end(), extra);
      return oracle.eval(make_node_set(std::move(set)));
    };
    const double p_s = oracle.eval(make_node_set(base));
    const double p_a = with({a});
    const double p_b = with({b});
    const double p_ab = with({a, b});
    const double scale = 1.0 + std::abs(p_ab);
    if (p_a < p_s - tol * scale) {
      throw Error(ErrorKind::Contract, "prize oracle is not monotone");
    }
    if (p_a - p_s < p_ab - p_b - tol * scale) {
      throw Error(ErrorKind::Contract, "prize oracle is not submodular");
    }
  }
}

std::vector<double> construct_tight_capacities(const RootedTree& tree,
                                               const PrizeOracle& oracle) {
  const auto& members = tree.members;
  const int k = static_cast<int>(members.size());
  if (k > 16) {
    throw Error(ErrorKind::Size, "tight-capacity construction limited to 16 members, got " +
                                     std::to_string(k));
  }
  if (k == 0) return {};
  const std::uint32_t full = (1u << k) - 1;
  std::vector<double> p_set(std::size_t{1} << k);
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    std::vector<NodeId> set;
    for (int i = 0; i < k; ++i) {
      if (mask >> i & 1u) set.push_back(members[i]);
    }
    p_set[mask] = oracle.eval(set);
  }
  std::vector<double> p(k);
  for (int i = 0; i < k; ++i) p[i] = oracle.singleton(members[i]);

  std::vector<double> x(k, 1.0 / k);
  // members is sorted, so index order is ascending id order.
  for (int i = 0; i < k; ++i) {
    if (p[i] <= 0.0) continue;
    double raise = 1.0 - x[i];
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
      if (!(mask >> i & 1u)) continue;
      double load = 0.0;
      for (int j = 0; j < k; ++j) {
        if (mask >> j & 1u) load += x[j] * p[j];
      }
      raise = std::min(raise, (p_set[mask] - load) / p[i]);
    }
    x[i] += std::max(raise, 0.0);
  }
  return x;
}

}  // namespace nwst
