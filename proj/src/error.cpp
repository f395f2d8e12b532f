#include "topicdyn/error.hpp"

namespace topicdyn {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::IncompatibleVectors: return "incompatible-vectors";
    case ErrorKind::DegenerateTopic: return "degenerate-topic";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::MalformedTree: return "malformed-tree";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::DuplicateKey: return "duplicate-key";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InsufficientData: return 3;
    case ErrorKind::Io: return 4;
    default: return 2;
  }
}

}  // namespace topicdyn
