#pragma once

#include <stdexcept>
#include <string>

namespace pglcr {

// Bad input to a public entry point: non-prime p, unsupported q, malformed
// permutation, and so on. The CLI maps this to exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical claim that the library certifies at runtime did not hold.
// The message carries the first counterexample found. CLI exit code 1.
class CheckFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace pglcr
