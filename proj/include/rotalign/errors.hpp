#pragma once

#include <stdexcept>
#include <string>

namespace rotalign {

// Bad user input or a violated precondition. The CLI maps this to exit status 2.
class validation_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure did not meet its accuracy contract (eigensolver
// failure, basis truncation not converged, norm drift). Exit status 3.
class convergence_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace rotalign
