#pragma once

#include <stdexcept>
#include <string>

namespace stealthgame {

// Malformed or inconsistent input data (network files, matrix files, NE files).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine could not produce a trustworthy answer
// (non-PD covariance, failure to bracket, non-finite values).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stealthgame
