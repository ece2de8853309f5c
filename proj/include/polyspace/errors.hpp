#pragma once

#include <stdexcept>
#include <string>

namespace polyspace {

/// Bad user input: malformed syntax, out-of-range arguments, non-generic
/// lengths. The CLI maps this to exit status 2.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computed object violated one of its own invariants (torsion in a
/// cohomology group, a failed round trip). Exit status 3.
class InvariantError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class UnsupportedRange : public ValidationError {
public:
  using ValidationError::ValidationError;
};

} // namespace polyspace
