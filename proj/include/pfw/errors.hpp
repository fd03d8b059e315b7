#pragma once

#include <stdexcept>
#include <string>

namespace pfw {

/// Input violates an operation's precondition (wrong determinant, singular
/// matrix, mismatched dimensions, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internal identity that must hold by construction failed. Always a bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed file or command-line input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfw
