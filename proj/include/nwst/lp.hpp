#pragma once

#include <span>
#include <string>
#include <vector>

namespace nwst {

inline constexpr double kFeasTol = 1e-7;
inline constexpr double kOptTol = 1e-6;
inline constexpr double kPivotTol = 1e-9;

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpRow {
  std::vector<int> index;
  std::vector<double> value;
  Relation rel = Relation::LessEqual;
  double rhs = 0.0;
  std::string name;
};

/// Linear program over bounded variables lo <= x <= hi. Rows are sparse.
struct LpModel {
  int num_vars = 0;
  Sense sense = Sense::Maximize;
  std::vector<double> objective;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::string> names;
  std::vector<LpRow> rows;

  int add_variable(double obj, double lower, double upper,
                   std::string name = {});
  void add_row(LpRow row);
  int num_rows() const { return static_cast<int>(rows.size()); }
  /// Throws Input if arrays disagree with num_vars or values are not finite.
  void validate() const;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  long iterations = 0;
};

LpSolution solve_lp(const LpModel& model);

/// Copy of `model` with one dense row appended.
LpModel add_cut(LpModel model, std::span<const double> coefficients,
                Relation rel, double rhs);

double row_activity(const LpRow& row, std::span<const double> values);

/// Largest violation of any row or bound by `values`.
double max_violation(const LpModel& model, std::span<const double> values);

double objective_of(const LpModel& model, std::span<const double> values);

/// CPLEX-style LP text.
std::string to_lp_text(const LpModel& model);

const char* to_string(LpStatus status);

}  // namespace nwst
