#pragma once

#include <stdexcept>

namespace snspm {

/// A parameter lies outside its documented domain. Mapped to exit code 2 by the CLI.
class param_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerically degenerate configuration: zero denominators, no conclusive
/// events, missing sign change. Mapped to exit code 3 by the CLI.
class degenerate_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace snspm
