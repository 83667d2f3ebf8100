#pragma once

#include <stdexcept>
#include <string>

namespace psodkit {

// Malformed or out-of-domain input values (duplicate labels, residues outside (-1,0], ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Well-formed input that violates an operation's precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The colimit rule produced a relation that is not a preorder.
class NoColimitError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// An enumeration or materialization cap was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document could not be parsed into a domain object.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace psodkit
