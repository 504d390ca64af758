#include "nwst/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "nwst/error.hpp"
#include "nwst/flow_lp.hpp"
#include "nwst/oracles.hpp"
#include "nwst/undirected.hpp"

namespace nwst {

SolveReport solve_instance(const Instance& inst, double epsilon) {
  const NodeWeightedGraph& g = inst.graph;
  switch (inst.problem) {
    case ProblemType::Dst:
      return solve_dst(g, inst.terminals, epsilon);
    case ProblemType::Bdrat:
      return solve_bdrat(g, *inst.budget, epsilon);
    case ProblemType::Qdrat:
      return solve_qdrat(g, *inst.quota, epsilon);
    case ProblemType::Burst:
      return solve_burst(g, inst.oracle(), *inst.budget, epsilon);
    case ProblemType::Qurst:
      return solve_qurst(g, inst.oracle(), *inst.quota, epsilon);
  }
  throw Error(ErrorKind::Input, "unknown problem kind");
}

namespace {

ExactResult exact_for(const Instance& inst) {
  ExactParams params;
  params.budget = inst.budget.value_or(0.0);
  params.quota = inst.quota.value_or(0.0);
  params.terminals = inst.terminals;
  const PrizeOracle oracle = inst.oracle();
  ExactKind kind = ExactKind::Dst;
  if (inst.problem == ProblemType::Bdrat || inst.problem == ProblemType::Burst) {
    kind = ExactKind::Budget;
  } else if (inst.problem == ProblemType::Qdrat || inst.problem == ProblemType::Qurst) {
    kind = ExactKind::Quota;
  }
  return exact_optimum(inst.graph, kind, params, &oracle);
}

LpModel model_for(const Instance& inst) {
  const NodeWeightedGraph& g = inst.graph;
  std::vector<NodeSet> singles;
  for (NodeId v = 0; v < g.size(); ++v) singles.push_back({v});
  switch (inst.problem) {
    case ProblemType::Dst:
      return build_lp_dst(g, inst.terminals).model;
    case ProblemType::Bdrat:
      return build_const_drat(prune_to_b_proper(g, *inst.budget), *inst.budget,
                              std::nullopt, LpObjective::MaxPrize)
          .model;
    case ProblemType::Qdrat:
      return build_const_drat(g, std::nullopt, *inst.quota, LpObjective::MinCost).model;
    case ProblemType::Burst: {
      const NodeWeightedGraph pruned = prune_to_b_proper(g, *inst.budget);
      std::vector<NodeSet> sub_singles;
      for (NodeId v = 0; v < pruned.size(); ++v) sub_singles.push_back({v});
      return build_const_urst(pruned, inst.oracle().restricted(pruned.origins()),
                              *inst.budget, std::nullopt, LpObjective::MaxPrize,
                              sub_singles)
          .model;
    }
    case ProblemType::Qurst:
      return build_const_urst(g, inst.oracle(), std::nullopt, *inst.quota,
                              LpObjective::MinCost, singles)
          .model;
  }
  throw Error(ErrorKind::Input, "unknown problem kind");
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else write_file(path, text);
}

std::string csv_real(std::optional<double> v) {
  return v ? format_real(*v) : std::string();
}

int bench(const std::string& dir, const std::string& csv_path, bool with_oracle,
          std::ostream& err) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".inst") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::ostringstream csv;
  csv << "instance,algorithm,n,cost,prize,opt_cost,opt_prize,budget_violation,"
         "quota_fraction,lp_bound,runtime_ms,seed\n";
  int status = 0;
  for (const auto& path : files) {
    const Instance inst = parse_instance(read_file(path.string()));
    const SolveReport rep = solve_instance(inst, inst.epsilon);
    std::optional<double> opt_cost, opt_prize;
    if (with_oracle) {
      const ExactResult ex = exact_for(inst);
      if (ex.best_set) {
        opt_cost = node_set_cost(inst.graph, *ex.best_set);
        opt_prize = inst.oracle().eval(*ex.best_set);
        const double tol = 1e-6 * std::max(1.0, std::abs(ex.best_value));
        const bool budget_kind = inst.problem == ProblemType::Bdrat ||
                                 inst.problem == ProblemType::Burst;
        const bool ok = budget_kind ? rep.lp_bound >= ex.best_value - tol
                                    : rep.lp_bound <= ex.best_value + tol;
        if (!ok) {
          err << path.filename().string() << ": LP bound " << format_real(rep.lp_bound)
              << " does not bracket the exact optimum " << format_real(ex.best_value)
              << "\n";
          status = 4;
        }
      }
    }
    csv << path.filename().string() << ',' << to_string(inst.problem) << ','
        << inst.graph.size() << ',' << format_real(rep.tree.cost) << ','
        << format_real(rep.prize) << ',' << csv_real(opt_cost) << ','
        << csv_real(opt_prize) << ',' << format_real(rep.budget_violation) << ','
        << format_real(rep.quota_fraction) << ',' << format_real(rep.lp_bound) << ','
        << rep.wallclock_ms << ',' << (inst.seed ? std::to_string(*inst.seed) : "")
        << '\n';
  }
  write_file(csv_path, csv.str());
  return status;
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Node-weighted Steiner tree solvers"};
  app.require_subcommand(1);

  std::string file, out_path, solution_path, dir, csv_path, kind;
  std::optional<double> epsilon;
  bool with_oracle = false;
  GenOptions gen;

  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  solve->add_option("file", file)->required();
  solve->add_option("--epsilon", epsilon);
  solve->add_option("--out", out_path);

  auto* oracle = app.add_subcommand("oracle", "Exact optimum by enumeration");
  oracle->add_option("file", file)->required();

  auto* verify = app.add_subcommand("verify", "Check a solution against an instance");
  verify->add_option("instance", file)->required();
  verify->add_option("solution", solution_path)->required();
  verify->add_option("--epsilon", epsilon);

  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("kind", kind)->required();
  gen_cmd->add_option("--n", gen.n)->required();
  gen_cmd->add_option("--seed", gen.seed)->required();
  gen_cmd->add_option("--density", gen.density);
  gen_cmd->add_option("--cost-min", gen.cost_min);
  gen_cmd->add_option("--cost-max", gen.cost_max);
  gen_cmd->add_flag("--coverage", gen.coverage);
  gen_cmd->add_option("--out", out_path);

  auto* bench_cmd = app.add_subcommand("bench", "Solve every .inst file in a directory");
  bench_cmd->add_option("dir", dir)->required();
  bench_cmd->add_option("--csv", csv_path)->required();
  bench_cmd->add_flag("--with-oracle", with_oracle);

  auto* dump = app.add_subcommand("lp-dump", "Write the instance's LP relaxation");
  dump->add_option("file", file)->required();
  dump->add_option("--out", out_path);

  std::vector<const char*> raw;
  for (const auto& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) {
      const Instance inst = parse_instance(read_file(file));
      const double eps = epsilon.value_or(inst.epsilon);
      try {
        const SolveReport rep = solve_instance(inst, eps);
        emit(out_path, emit_solution(solution_from_tree(inst, rep.tree, rep.prize)), out);
        err << "cost " << format_real(rep.tree.cost) << " prize " << format_real(rep.prize)
            << " lp_bound " << format_real(rep.lp_bound) << " branch " << rep.branch << "\n";
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Infeasible || e.kind() == ErrorKind::Connectivity) {
          Solution none;
          none.ok = false;
          emit(out_path, emit_solution(none), out);
        }
        throw;
      }
    } else if (*oracle) {
      const Instance inst = parse_instance(read_file(file));
      const ExactResult ex = exact_for(inst);
      if (!ex.best_set) throw Error(ErrorKind::Infeasible, "no feasible tree");
      out << "optimum " << format_real(ex.best_value) << "\n";
      out << "enumerated " << ex.enumerated << "\n";
      for (NodeId v : *ex.best_set) out << "node " << inst.labels[v] << "\n";
    } else if (*verify) {
      const Instance inst = parse_instance(read_file(file));
      const Solution sol = parse_solution(read_file(solution_path));
      if (!sol.ok) {
        err << "solution reports infeasible\n";
        return 2;
      }
      const std::string problem = verify_solution(inst, sol, epsilon.value_or(inst.epsilon));
      if (!problem.empty()) {
        err << "verify failed: " << problem << "\n";
        return 4;
      }
      out << "ok\n";
    } else if (*gen_cmd) {
      const auto type = problem_from_string(kind);
      if (!type) throw Error(ErrorKind::Input, "unknown problem kind '" + kind + "'");
      gen.problem = *type;
      emit(out_path, emit_instance(gen_random(gen)), out);
    } else if (*bench_cmd) {
      return bench(dir, csv_path, with_oracle, err);
    } else if (*dump) {
      const Instance inst = parse_instance(read_file(file));
      emit(out_path, to_lp_text(model_for(inst)), out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace nwst
