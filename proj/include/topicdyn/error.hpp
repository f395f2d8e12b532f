#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topicdyn {

enum class ErrorKind {
  InvalidParameter,
  InvalidInput,
  IncompatibleVectors,
  DegenerateTopic,
  InsufficientData,
  MalformedTree,
  Parse,
  DuplicateKey,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// CLI exit codes: 0 success, 2 validation failure, 3 insufficient data,
// 4 IO failure.
int exit_code(ErrorKind kind) noexcept;

}  // namespace topicdyn
