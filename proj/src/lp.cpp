#include "nwst/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "nwst/error.hpp"

namespace nwst {

int LpModel::add_variable(double obj, double lower, double upper,
                          std::string name) {
  objective.push_back(obj);
  lo.push_back(lower);
  hi.push_back(upper);
  if (name.empty()) name = "x" + std::to_string(num_vars);
  names.push_back(std::move(name));
  return num_vars++;
}

void LpModel::add_row(LpRow row) {
  if (row.index.size() != row.value.size()) {
    throw Error(ErrorKind::Input, "row index/value length mismatch");
  }
  rows.push_back(std::move(row));
}

void LpModel::validate() const {
  const auto n = static_cast<std::size_t>(num_vars);
  if (objective.size() != n || lo.size() != n || hi.size() != n) {
    throw Error(ErrorKind::Input, "LP arrays do not match num_vars");
  }
  for (int j = 0; j < num_vars; ++j) {
    if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]) || lo[j] > hi[j] ||
        !std::isfinite(objective[j])) {
      throw Error(ErrorKind::Input, "bad bounds or objective on variable " +
                                        std::to_string(j));
    }
  }
  for (const LpRow& row : rows) {
    if (row.index.size() != row.value.size() || !std::isfinite(row.rhs)) {
      throw Error(ErrorKind::Input, "malformed LP row");
    }
    for (std::size_t k = 0; k < row.index.size(); ++k) {
      if (row.index[k] < 0 || row.index[k] >= num_vars ||
          !std::isfinite(row.value[k])) {
        throw Error(ErrorKind::Input, "LP row references a bad column");
      }
    }
  }
}

LpModel add_cut(LpModel model, std::span<const double> coefficients,
                Relation rel, double rhs) {
  if (static_cast<int>(coefficients.size()) != model.num_vars) {
    throw Error(ErrorKind::Input, "cut length " +
                                      std::to_string(coefficients.size()) +
                                      " != num_vars " +
                                      std::to_string(model.num_vars));
  }
  LpRow row;
  row.rel = rel;
  row.rhs = rhs;
  for (int j = 0; j < model.num_vars; ++j) {
    if (coefficients[j] != 0.0) {
      row.index.push_back(j);
      row.value.push_back(coefficients[j]);
    }
  }
  model.add_row(std::move(row));
  return model;
}

double row_activity(const LpRow& row, std::span<const double> values) {
  double total = 0.0;
  for (std::size_t k = 0; k < row.index.size(); ++k) {
    total += row.value[k] * values[row.index[k]];
  }
  return total;
}

double max_violation(const LpModel& model, std::span<const double> values) {
  double worst = 0.0;
  for (int j = 0; j < model.num_vars; ++j) {
    worst = std::max({worst, model.lo[j] - values[j], values[j] - model.hi[j]});
  }
  for (const LpRow& row : model.rows) {
    const double act = row_activity(row, values);
    switch (row.rel) {
      case Relation::LessEqual:
        worst = std::max(worst, act - row.rhs);
        break;
      case Relation::GreaterEqual:
        worst = std::max(worst, row.rhs - act);
        break;
      case Relation::Equal:
        worst = std::max(worst, std::abs(act - row.rhs));
        break;
    }
  }
  return worst;
}

double objective_of(const LpModel& model, std::span<const double> values) {
  double total = 0.0;
  for (int j = 0; j < model.num_vars; ++j) total += model.objective[j] * values[j];
  return total;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBlandAfter = 50;

// Bounded-variable tableau simplex on  A y = b, 0 <= y <= u.
// Columns: structural, then one slack per inequality row. Artificial columns
// are implicit: they only ever sit in the basis and never re-enter.
class Tableau {
 public:
  Tableau(const LpModel& model, long iteration_cap)
      : model_(model), cap_(iteration_cap) {
    m_ = model.num_rows();
    n_struct_ = model.num_vars;
    int slacks = 0;
    for (const LpRow& row : model.rows) {
      if (row.rel != Relation::Equal) ++slacks;
    }
    cols_ = n_struct_ + slacks;
    t_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
    upper_.assign(cols_, kInf);
    value_.assign(cols_, 0.0);
    basic_row_.assign(cols_, -1);
    basis_.assign(m_, -1);
    basic_value_.assign(m_, 0.0);
    art_upper_.assign(m_, kInf);

    for (int j = 0; j < n_struct_; ++j) upper_[j] = model.hi[j] - model.lo[j];

    int slack = n_struct_;
    for (int i = 0; i < m_; ++i) {
      const LpRow& row = model.rows[i];
      double rhs = row.rhs;
      for (std::size_t k = 0; k < row.index.size(); ++k) {
        at(i, row.index[k]) += row.value[k];
        rhs -= row.value[k] * model.lo[row.index[k]];
      }
      int slack_col = -1;
      if (row.rel == Relation::LessEqual) {
        slack_col = slack++;
        at(i, slack_col) = 1.0;
      } else if (row.rel == Relation::GreaterEqual) {
        slack_col = slack++;
        at(i, slack_col) = -1.0;
      }
      if (rhs < 0.0) {
        double* r = &at(i, 0);
        for (int j = 0; j < cols_; ++j) r[j] = -r[j];
        rhs = -rhs;
      }
      if (slack_col >= 0 && at(i, slack_col) > 0.0) {
        basis_[i] = slack_col;
        basic_row_[slack_col] = i;
      } else {
        basis_[i] = kArtificial;
      }
      basic_value_[i] = rhs;
    }
  }

  LpSolution run() {
    LpSolution sol;
    // Phase 1: minimize the sum of artificials.
    bool any_art = false;
    double scale = 1.0;
    for (int i = 0; i < m_; ++i) {
      scale = std::max(scale, std::abs(basic_value_[i]));
      if (basis_[i] == kArtificial) any_art = true;
    }
    if (any_art) {
      phase_cost_.assign(cols_, 0.0);
      art_cost_ = 1.0;
      price_from_scratch();
      if (!iterate()) {
        // Phase 1 objective is bounded below by 0; unbounded is impossible.
        throw Error(ErrorKind::Numerical, "phase 1 reported unbounded");
      }
      double infeas = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] == kArtificial) infeas += basic_value_[i];
      }
      if (infeas > kFeasTol * scale) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] == kArtificial) {
          basic_value_[i] = 0.0;
          art_upper_[i] = 0.0;
        }
      }
    }

    // Phase 2: minimize the (sign-adjusted) objective.
    phase_cost_.assign(cols_, 0.0);
    const double sign = model_.sense == Sense::Maximize ? -1.0 : 1.0;
    for (int j = 0; j < n_struct_; ++j) phase_cost_[j] = sign * model_.objective[j];
    art_cost_ = 0.0;
    price_from_scratch();
    const bool bounded = iterate();
    sol.iterations = iterations_;
    if (!bounded) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }

    std::vector<double> y(cols_);
    for (int j = 0; j < cols_; ++j) {
      y[j] = basic_row_[j] >= 0 ? basic_value_[basic_row_[j]] : value_[j];
    }
    sol.values.resize(n_struct_);
    for (int j = 0; j < n_struct_; ++j) {
      double v = model_.lo[j] + std::clamp(y[j], 0.0, upper_[j]);
      sol.values[j] = std::clamp(v, model_.lo[j], model_.hi[j]);
    }
    const double viol = max_violation(model_, sol.values);
    if (viol > 1e3 * kFeasTol * scale) {
      throw Error(ErrorKind::Numerical,
                  "simplex drift: final row violation " + std::to_string(viol));
    }
    sol.status = LpStatus::Optimal;
    sol.objective_value = objective_of(model_, sol.values);
    return sol;
  }

 private:
  static constexpr int kArtificial = -2;

  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * cols_ + j]; }
  double* row_ptr(int i) { return &t_[static_cast<std::size_t>(i) * cols_]; }

  double basic_cost(int i) const {
    return basis_[i] == kArtificial ? art_cost_ : phase_cost_[basis_[i]];
  }
  double basic_upper(int i) const {
    return basis_[i] == kArtificial ? art_upper_[i] : upper_[basis_[i]];
  }

  void price_from_scratch() {
    reduced_ = phase_cost_;
    for (int i = 0; i < m_; ++i) {
      const double cb = basic_cost(i);
      if (cb == 0.0) continue;
      const double* r = row_ptr(i);
      for (int j = 0; j < cols_; ++j) reduced_[j] -= cb * r[j];
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0) reduced_[basis_[i]] = 0.0;
    }
  }

  // Returns the entering column and its direction (+1 up, -1 down), or -1.
  int choose_entering(bool bland, int& dir) const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < cols_; ++j) {
      if (basic_row_[j] >= 0) continue;
      const double d = reduced_[j];
      int cand_dir = 0;
      if (d < -kOptTol && value_[j] < upper_[j]) cand_dir = 1;
      else if (d > kOptTol && value_[j] > 0.0) cand_dir = -1;
      if (cand_dir == 0) continue;
      if (bland) {
        dir = cand_dir;
        return j;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = j;
        dir = cand_dir;
      }
    }
    return best;
  }

  bool iterate() {
    int degenerate_streak = 0;
    while (true) {
      const bool bland = degenerate_streak > kBlandAfter;
      int dir = 0;
      const int q = choose_entering(bland, dir);
      if (q < 0) return true;
      if (++iterations_ > cap_) {
        throw Error(ErrorKind::Numerical,
                    "simplex iteration cap " + std::to_string(cap_) + " exceeded");
      }

      // Ratio test, including the entering variable's own bound flip.
      double step = upper_[q] - 0.0;
      int leave = -1;
      double leave_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = at(i, q);
        if (std::abs(a) <= kPivotTol) continue;
        const double delta = -dir * a;  // basic change per unit step
        double limit;
        if (delta < 0.0) {
          limit = std::max(basic_value_[i], 0.0) / -delta;
        } else {
          const double ub = basic_upper(i);
          if (ub == kInf) continue;
          limit = std::max(ub - basic_value_[i], 0.0) / delta;
        }
        bool take = false;
        if (limit < step - 1e-12) {
          take = true;
        } else if (limit <= step + 1e-12) {
          if (leave < 0) take = true;
          else if (bland) take = basis_key(i) < basis_key(leave);
          else take = std::abs(a) > std::abs(leave_pivot);
        }
        if (take) {
          step = limit;
          leave = i;
          leave_pivot = a;
        }
      }
      if (step == kInf) return false;
      degenerate_streak = step < 1e-12 ? degenerate_streak + 1 : 0;

      for (int i = 0; i < m_; ++i) {
        const double a = at(i, q);
        if (a != 0.0) basic_value_[i] -= dir * a * step;
      }
      if (leave < 0) {
        value_[q] = dir > 0 ? upper_[q] : 0.0;
        continue;
      }
      const double entering_value = value_[q] + dir * step;
      const int out = basis_[leave];
      if (out >= 0) {
        const double delta = -dir * leave_pivot;
        value_[out] = delta < 0.0 ? 0.0 : upper_[out];
        basic_row_[out] = -1;
      }
      basis_[leave] = q;
      basic_row_[q] = leave;
      basic_value_[leave] = entering_value;
      value_[q] = 0.0;
      pivot(leave, q);
    }
  }

  int basis_key(int i) const {
    return basis_[i] == kArtificial ? cols_ + i : basis_[i];
  }

  void pivot(int r, int q) {
    double* pr = row_ptr(r);
    const double inv = 1.0 / pr[q];
    nz_.clear();
    for (int j = 0; j < cols_; ++j) {
      if (pr[j] != 0.0) {
        pr[j] *= inv;
        nz_.push_back(j);
      }
    }
    pr[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* pi = row_ptr(i);
      const double f = pi[q];
      if (f == 0.0) continue;
      for (int j : nz_) pi[j] -= f * pr[j];
      pi[q] = 0.0;
    }
    const double fd = reduced_[q];
    if (fd != 0.0) {
      for (int j : nz_) reduced_[j] -= fd * pr[j];
    }
    reduced_[q] = 0.0;
  }

  const LpModel& model_;
  long cap_;
  long iterations_ = 0;
  int m_ = 0;
  int n_struct_ = 0;
  int cols_ = 0;
  std::vector<double> t_;
  std::vector<double> upper_;
  std::vector<double> value_;      // nonbasic values (0 or upper)
  std::vector<int> basic_row_;     // column -> basis row, -1 when nonbasic
  std::vector<int> basis_;         // row -> column or kArtificial
  std::vector<double> basic_value_;
  std::vector<double> art_upper_;
  std::vector<double> phase_cost_;
  std::vector<double> reduced_;
  double art_cost_ = 0.0;
  std::vector<int> nz_;
};

std::string fmt_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

LpSolution solve_lp(const LpModel& model) {
  model.validate();
  const long cap = 50L * (model.num_vars + model.num_rows());
  Tableau tableau(model, cap);
  return tableau.run();
}

std::string to_lp_text(const LpModel& model) {
  std::ostringstream out;
  out << (model.sense == Sense::Maximize ? "Maximize" : "Minimize") << "\n obj:";
  bool any = false;
  for (int j = 0; j < model.num_vars; ++j) {
    if (model.objective[j] == 0.0) continue;
    out << (model.objective[j] < 0 ? " - " : " + ")
        << fmt_number(std::abs(model.objective[j])) << ' ' << model.names[j];
    any = true;
  }
  if (!any) out << " 0";
  out << "\nSubject To\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    const LpRow& row = model.rows[i];
    out << ' ' << (row.name.empty() ? "c" + std::to_string(i) : row.name) << ':';
    if (row.index.empty()) out << " 0";
    for (std::size_t k = 0; k < row.index.size(); ++k) {
      out << (row.value[k] < 0 ? " - " : " + ")
          << fmt_number(std::abs(row.value[k])) << ' '
          << model.names[row.index[k]];
    }
    const char* rel = row.rel == Relation::LessEqual ? "<="
                      : row.rel == Relation::Equal   ? "="
                                                     : ">=";
    out << ' ' << rel << ' ' << fmt_number(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < model.num_vars; ++j) {
    out << ' ' << fmt_number(model.lo[j]) << " <= " << model.names[j]
        << " <= " << fmt_number(model.hi[j]) << '\n';
  }
  out << "End\n";
  return out.str();
}

}  // namespace nwst
