#pragma once

#include <stdexcept>
#include <string>

namespace digitop {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad file contents, duplicate points, u out of range.
class ParseError : public Error {
 public:
  using Error::Error;
};

// An argument violates an operation's contract (point not in image, image mismatch).
class ContractError : public Error {
 public:
  using Error::Error;
};

// An exhaustive sweep would exceed the configured enumeration budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace digitop
