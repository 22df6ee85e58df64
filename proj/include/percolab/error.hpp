#pragma once

#include <stdexcept>
#include <string>

namespace percolab {

// Malformed input: bad parameters, schema violations, unknown kinds.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exploration, enumeration or canonicalization cap was hit.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bisection bracket that does not straddle the transition.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace percolab
