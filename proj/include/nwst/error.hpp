#pragma once

#include <stdexcept>
#include <string>

namespace nwst {

enum class ErrorKind {
  Input,         // malformed arguments or files
  Size,          // instance too large for an exhaustive routine
  Connectivity,  // a required node is unreachable
  Infeasible,    // no feasible solution / quota unreachable
  Numerical,     // iteration caps, round caps, tolerance blowups
  Contract,      // a postcondition or proven bound failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// CLI exit code for an error kind: 1 usage/input, 2 infeasible,
/// 3 numerical failure, 4 contract violation.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input:
    case ErrorKind::Size:
      return 1;
    case ErrorKind::Connectivity:
    case ErrorKind::Infeasible:
      return 2;
    case ErrorKind::Numerical:
      return 3;
    case ErrorKind::Contract:
      return 4;
  }
  return 4;
}

}  // namespace nwst
