#pragma once

#include <stdexcept>
#include <string>

namespace rnapars {

// Problems caused by user-supplied data (files, flags, malformed strings).
// The CLI maps these to exit code 2; anything else is an internal error (1).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rnapars
