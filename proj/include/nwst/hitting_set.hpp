#pragma once

#include <vector>

namespace nwst {

struct SetFamily {
  std::vector<int> universe;
  std::vector<std::vector<int>> sets;
};

/// Counter greedy: repeatedly take the element hitting the most uncovered
/// sets, smallest id on ties. Throws Input on an empty member set.
std::vector<int> greedy_hitting_set(const SetFamily& family);

}  // namespace nwst
