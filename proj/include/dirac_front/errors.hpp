#pragma once

#include <stdexcept>
#include <string>

namespace dirac_front {

// Invalid grid, representation, horizon or experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument to an otherwise well-configured operation.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation requires a nonzero state.
class UndefinedStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Feature size below what the grid can resolve.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A slab cut removed all of the state.
class EmptyCutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The tent apex sits at the edge of the sampled window.
class ApexNotBracketedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dirac_front
