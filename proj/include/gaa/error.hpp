#pragma once

#include <stdexcept>
#include <string>

namespace gaa {

// Base for every error raised by the library. The CLI maps the two
// subclasses below onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument or input document does not hold.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A configured size limit (path count, city count, qubit count) was hit.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace gaa
