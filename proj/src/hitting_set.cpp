#include "nwst/hitting_set.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "nwst/error.hpp"

namespace nwst {

std::vector<int> greedy_hitting_set(const SetFamily& family) {
  for (const auto& s : family.sets) {
    if (s.empty()) throw Error(ErrorKind::Input, "hitting-set family has an empty set");
  }
  std::vector<char> covered(family.sets.size(), 0);
  std::size_t remaining = family.sets.size();
  std::vector<int> chosen;
  while (remaining > 0) {
    std::map<int, int> counter;
    for (std::size_t i = 0; i < family.sets.size(); ++i) {
      if (covered[i]) continue;
      std::vector<int> once = family.sets[i];
      std::sort(once.begin(), once.end());
      once.erase(std::unique(once.begin(), once.end()), once.end());
      for (int e : once) ++counter[e];
    }
    int best = counter.begin()->first;
    int best_count = 0;
    for (const auto& [e, count] : counter) {
      if (count > best_count) {
        best = e;
        best_count = count;
      }
    }
    chosen.push_back(best);
    for (std::size_t i = 0; i < family.sets.size(); ++i) {
      if (covered[i]) continue;
      const auto& s = family.sets[i];
      if (std::find(s.begin(), s.end(), best) != s.end()) {
        covered[i] = 1;
        --remaining;
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace nwst
