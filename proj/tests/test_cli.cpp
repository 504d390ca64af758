#include "doctest.h"

#include <filesystem>
#include <random>
#include <sstream>

#include "nwst/cli.hpp"
#include "nwst/error.hpp"
#include "nwst/instance_io.hpp"

using namespace nwst;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("nwst_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "nwst");
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kMinimal =
    "steiner-instance v1\n"
    "problem dst\n"
    "directed true\n"
    "nodes 1\n"
    "v 0 0 0\n"
    "root 0\n"
    "terminal 0\n";

ErrorKind parse_kind(const std::string& text, std::string* what = nullptr) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    if (what) *what = e.what();
    return e.kind();
  }
  FAIL("expected a parse error");
  return ErrorKind::Contract;
}

}  // namespace

TEST_CASE("minimal dst file") {
  auto inst = parse_instance(kMinimal);
  CHECK(inst.problem == ProblemType::Dst);
  CHECK(inst.graph.size() == 1);
  CHECK(inst.terminals == NodeSet{0});

  TempDir dir;
  write_file(dir.file("min.inst"), kMinimal);
  auto r = run({"solve", dir.file("min.inst"), "--out", dir.file("min.sol")});
  CHECK(r.code == 0);
  auto sol = parse_solution(read_file(dir.file("min.sol")));
  CHECK(sol.ok);
  CHECK(sol.nodes == std::vector<long long>{0});
  CHECK(run({"verify", dir.file("min.inst"), dir.file("min.sol")}).code == 0);
}

TEST_CASE("parse errors carry line numbers") {
  std::string what;
  const std::string both =
      "steiner-instance v1\nproblem bdrat\ndirected true\nnodes 1\nv 0 0 0\nroot 0\n"
      "budget 3\nquota 2\n";
  CHECK(parse_kind(both, &what) == ErrorKind::Input);
  CHECK(what.find("line") != std::string::npos);

  const std::string dup =
      "steiner-instance v1\nproblem dst\ndirected true\nnodes 2\nv 0 0 0\nv 1 1 1\n"
      "a 0 1\na 0 1\nroot 0\nterminal 1\n";
  CHECK(parse_kind(dup, &what) == ErrorKind::Input);
  CHECK(what.find("line 8") != std::string::npos);

  CHECK(parse_kind("steiner-instance v1\nproblem nope\n") == ErrorKind::Input);
  CHECK(parse_kind("hello\n") == ErrorKind::Input);
  const std::string negative =
      "steiner-instance v1\nproblem dst\ndirected true\nnodes 1\nv 0 -1 0\nroot 0\n";
  CHECK(parse_kind(negative) == ErrorKind::Input);
  const std::string edge_in_directed =
      "steiner-instance v1\nproblem dst\ndirected true\nnodes 2\nv 0 0 0\nv 1 1 1\n"
      "e 0 1\nroot 0\nterminal 1\n";
  CHECK(parse_kind(edge_in_directed) == ErrorKind::Input);

  TempDir dir;
  write_file(dir.file("bad.inst"), both);
  CHECK(run({"solve", dir.file("bad.inst")}).code == 1);
  CHECK(run({"solve", dir.file("missing.inst")}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
}

TEST_CASE("generator: round trip, determinism, edge sizes") {
  for (auto kind : {ProblemType::Dst, ProblemType::Bdrat, ProblemType::Qdrat,
                    ProblemType::Burst, ProblemType::Qurst}) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      GenOptions o;
      o.problem = kind;
      o.n = 2 + static_cast<int>(seed * 2);
      o.seed = seed;
      o.coverage = is_submodular(kind) && seed % 2 == 0;
      const std::string text = emit_instance(gen_random(o));
      CHECK(text == emit_instance(gen_random(o)));
      const Instance back = parse_instance(text);
      CHECK(emit_instance(back) == text);
      CHECK(back.seed == seed);
      CHECK(back.graph.size() == o.n);
    }
  }

  GenOptions one;
  one.problem = ProblemType::Bdrat;
  one.n = 1;
  auto single = gen_random(one);
  CHECK(single.graph.size() == 1);
  CHECK(solve_instance(single, 0.5).tree.members == NodeSet{0});

  GenOptions full;
  full.problem = ProblemType::Bdrat;
  full.n = 7;
  full.density = 1.0;
  CHECK(gen_random(full).graph.arc_count() == 7 * 6);

  TempDir dir;
  CHECK(run({"gen", "qdrat", "--n", "6", "--seed", "9", "--out", dir.file("a.inst")}).code == 0);
  CHECK(run({"gen", "qdrat", "--n", "6", "--seed", "9", "--out", dir.file("b.inst")}).code == 0);
  CHECK(read_file(dir.file("a.inst")) == read_file(dir.file("b.inst")));
  CHECK(run({"gen", "bogus", "--n", "6", "--seed", "9"}).code == 1);
}

TEST_CASE("verify rejects tampered solutions") {
  TempDir dir;
  for (const char* kind : {"dst", "bdrat", "qdrat", "burst", "qurst"}) {
    const std::string inst = dir.file(std::string(kind) + ".inst");
    const std::string sol = dir.file(std::string(kind) + ".sol");
    REQUIRE(run({"gen", kind, "--n", "8", "--seed", "5", "--out", inst}).code == 0);
    REQUIRE(run({"solve", inst, "--out", sol}).code == 0);
    CHECK(run({"verify", inst, sol}).code == 0);

    Solution s = parse_solution(read_file(sol));
    if (s.nodes.size() < 2) continue;
    // drop the last leaf and its arc, keep the stated totals
    const long long leaf = s.arcs.back().second;
    s.arcs.pop_back();
    std::erase(s.nodes, leaf);
    write_file(sol, emit_solution(s));
    auto r = run({"verify", inst, sol});
    CHECK(r.code == 4);
    CHECK(r.err.find("verify failed") != std::string::npos);
  }
}

TEST_CASE("infeasible instances exit 2 with an infeasible solution") {
  const std::string text =
      "steiner-instance v1\nproblem qdrat\ndirected true\nnodes 2\nv 0 0 0\nv 1 1 1\n"
      "a 0 1\nroot 0\nquota 5\n";
  TempDir dir;
  write_file(dir.file("q.inst"), text);
  auto r = run({"solve", dir.file("q.inst"), "--out", dir.file("q.sol")});
  CHECK(r.code == 2);
  CHECK_FALSE(parse_solution(read_file(dir.file("q.sol"))).ok);
  CHECK(run({"verify", dir.file("q.inst"), dir.file("q.sol")}).code == 2);
}

TEST_CASE("oracle, lp-dump and bench subcommands") {
  TempDir dir;
  fs::create_directories(dir.path / "set");
  int i = 0;
  for (const char* kind : {"bdrat", "qdrat", "burst", "qurst", "dst"}) {
    const std::string inst = (dir.path / "set" / ("i" + std::to_string(i++) + ".inst")).string();
    REQUIRE(run({"gen", kind, "--n", "7", "--seed", "3", "--out", inst}).code == 0);
    auto o = run({"oracle", inst});
    CHECK(o.code == 0);
    CHECK(o.out.rfind("optimum ", 0) == 0);
    auto d = run({"lp-dump", inst});
    CHECK(d.code == 0);
    CHECK(d.out.find("Subject To") != std::string::npos);
  }
  auto b = run({"bench", (dir.path / "set").string(), "--csv", dir.file("out.csv"), "--with-oracle"});
  CHECK(b.code == 0);
  std::istringstream csv(read_file(dir.file("out.csv")));
  std::string line;
  std::getline(csv, line);
  CHECK(line ==
        "instance,algorithm,n,cost,prize,opt_cost,opt_prize,budget_violation,"
        "quota_fraction,lp_bound,runtime_ms,seed");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 5);
}
