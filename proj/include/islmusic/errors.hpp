#pragma once

#include <stdexcept>
#include <string>

namespace islmusic {

// Invalid run configuration: violated preconditions on geometry, sources,
// sweep definitions. Mapped to exit code 2 by the CLI.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad argument to a single operation (index out of range, empty input, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure, e.g. the eigensolver did not converge. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace islmusic
