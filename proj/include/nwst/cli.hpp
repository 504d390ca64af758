#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nwst/directed.hpp"
#include "nwst/instance_io.hpp"

namespace nwst {

/// Runs the pipeline matching the instance's problem kind.
SolveReport solve_instance(const Instance& instance, double epsilon);

/// Entry point of the nwst tool; argv[0] is the program name.
/// Exit codes: 0 ok, 1 usage or input, 2 infeasible, 3 numerical, 4 contract.
int run_command(const std::vector<std::string>& argv, std::ostream& out,
                std::ostream& err);

}  // namespace nwst
