#pragma once

#include <stdexcept>
#include <string>

namespace triharm {

// Precondition or input-validity failure. The CLI maps it to exit code 2.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A regularity index s that does not clear a required threshold. Exit code 3.
class ThresholdError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Malformed user input (bad rational, unknown family name). Exit code 64.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace triharm
