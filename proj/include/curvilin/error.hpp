#pragma once

#include <stdexcept>
#include <string>

namespace curvilin {

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A function inverse received a value outside its range.
struct RangeError : std::domain_error {
  using std::domain_error::domain_error;
};

// Output grid cannot hold the computed set, or inputs are not grid aligned.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace curvilin
