#pragma once

#include <stdexcept>
#include <string>

namespace spiraldim {

// Precondition / input violations (bad r, bad k, short data, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical failure: blow-up, escape, non-finite values.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The analysis is not meaningful for this input (resonant angle etc).
struct RefusedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spiraldim
