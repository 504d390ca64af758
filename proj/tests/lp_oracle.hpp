#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "nwst/lp.hpp"

namespace testing_support {

// Dense k x k solve with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve_dense(
    std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t k = b.size();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (std::abs(a[p][c]) < 1e-10) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (std::size_t j = c; j < k; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = 0; c < k; ++c) b[c] /= a[c][c];
  return b;
}

struct VertexResult {
  bool feasible = false;
  double objective = 0.0;
};

// Optimum of a bounded LP by enumerating basic points: pick k rows to hold
// with equality, fix all but k variables at a bound, solve for the rest and
// keep the feasible points. Rows left out are only checked, so dependent
// equality rows are fine.
inline VertexResult vertex_enumeration(const nwst::LpModel& model) {
  const int n = model.num_vars;
  const int m = model.num_rows();
  std::vector<std::vector<double>> dense(m, std::vector<double>(n, 0.0));
  for (int i = 0; i < m; ++i) {
    const auto& row = model.rows[i];
    for (std::size_t k = 0; k < row.index.size(); ++k) {
      dense[i][row.index[k]] += row.value[k];
    }
  }
  const double sign = model.sense == nwst::Sense::Maximize ? 1.0 : -1.0;
  VertexResult best;
  std::vector<double> x(n);
  for (int rmask = 0; rmask < (1 << m); ++rmask) {
    std::vector<int> rows;
    for (int i = 0; i < m; ++i) {
      if (rmask >> i & 1) rows.push_back(i);
    }
    const int k = static_cast<int>(rows.size());
    if (k > n) continue;
    for (int fmask = 0; fmask < (1 << n); ++fmask) {
      if (__builtin_popcount(fmask) != k) continue;
      std::vector<int> free_vars, fixed_vars;
      for (int j = 0; j < n; ++j) {
        (fmask >> j & 1 ? free_vars : fixed_vars).push_back(j);
      }
      const int nf = static_cast<int>(fixed_vars.size());
      for (int bmask = 0; bmask < (1 << nf); ++bmask) {
        for (int t = 0; t < nf; ++t) {
          const int j = fixed_vars[t];
          x[j] = (bmask >> t & 1) ? model.hi[j] : model.lo[j];
        }
        if (k > 0) {
          std::vector<std::vector<double>> a(k, std::vector<double>(k));
          std::vector<double> b(k);
          for (int r = 0; r < k; ++r) {
            b[r] = model.rows[rows[r]].rhs;
            for (int j : fixed_vars) b[r] -= dense[rows[r]][j] * x[j];
            for (int c = 0; c < k; ++c) a[r][c] = dense[rows[r]][free_vars[c]];
          }
          auto sol = solve_dense(a, b);
          if (!sol) continue;
          for (int c = 0; c < k; ++c) x[free_vars[c]] = (*sol)[c];
        }
        if (nwst::max_violation(model, x) > 1e-9) continue;
        const double obj = nwst::objective_of(model, x);
        if (!best.feasible || sign * obj > sign * best.objective) {
          best.feasible = true;
          best.objective = obj;
        }
      }
    }
  }
  return best;
}

/// Random bounded LP with at most 6 variables and 6 rows.
inline nwst::LpModel random_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv(1, 6), nr(0, 6), coef(-4, 4),
      rhs(-3, 6), rel(0, 2), obj(-5, 5), hi(1, 3);
  nwst::LpModel m;
  m.sense = rng() & 1 ? nwst::Sense::Maximize : nwst::Sense::Minimize;
  const int n = nv(rng);
  for (int j = 0; j < n; ++j) {
    m.add_variable(obj(rng), 0.0, rng() % 4 == 0 ? hi(rng) : 1.0);
  }
  const int rows = nr(rng);
  for (int i = 0; i < rows; ++i) {
    std::vector<double> c(n);
    for (auto& v : c) v = rng() % 3 == 0 ? 0.0 : coef(rng);
    m = nwst::add_cut(m, c, static_cast<nwst::Relation>(rel(rng)), rhs(rng));
  }
  return m;
}

}  // namespace testing_support
