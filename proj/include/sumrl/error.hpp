#pragma once

#include <stdexcept>
#include <string>

namespace sumrl {

enum class ErrorKind {
  input,          // unreadable or malformed input
  numeric,        // non-finite loss, gradient or reward
  compatibility,  // checkpoint / provider mismatch
  not_found,      // unknown id
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code for the CLI: 2 input, 3 numeric, 4 compatibility, 5 not found.
constexpr int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return 2;
    case ErrorKind::numeric: return 3;
    case ErrorKind::compatibility: return 4;
    case ErrorKind::not_found: return 5;
  }
  return 1;
}

}  // namespace sumrl
