#pragma once

#include <stdexcept>
#include <string>

namespace fshare {

/// Invalid input, violated precondition, or malformed configuration.
/// The command-line tool maps this to exit code 2.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure during a run (divergent iterates, rank problems).
/// The command-line tool maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Two distributions compared for divergence do not share a support; the
/// divergence is infinite rather than a finite number.
class SupportMismatchError : public NumericError {
 public:
  explicit SupportMismatchError(const std::string& what) : NumericError(what) {}
};

}  // namespace fshare
