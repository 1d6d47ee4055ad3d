#pragma once

#include <stdexcept>

namespace coca {

// Error taxonomy shared across the library. Everything derives from
// std::runtime_error so callers can catch coarsely; the CLI maps any of
// these to a nonzero exit code with the message on stderr.

// Invalid static configuration (odd head dim, zero layers, bad corpus kind).
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad runtime argument (out-of-range token id, too-short document, step
// outside the schedule).
class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Position or capacity overflow (rotary table exhausted, eval length beyond
// the rescaled table).
class RangeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor shape mismatch between operands.
class DimError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inconsistent mutable state (cache does not match table/params).
class StateError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values where finite ones are required (loss, gradients).
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace coca
