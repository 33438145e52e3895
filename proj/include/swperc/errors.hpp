#pragma once

#include <stdexcept>
#include <string>

namespace swperc {

/// Raised when an argument violates an operation's precondition
/// (node out of range, probability outside [0, 1], n too small, ...).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an exhaustive computation would be too large to run.
class SizeError : public std::length_error {
 public:
  explicit SizeError(const std::string& what) : std::length_error(what) {}
};

}  // namespace swperc
