#pragma once

#include <stdexcept>
#include <string>

namespace qpmut {

enum class ErrorKind {
  InvalidArgument,
  NotACycle,
  VertexAbsent,
  ArrowAbsent,
  EndpointMismatch,
  MutationUndefined,
  NotHomogeneous,
  NonPositiveGrading,
  LoopsNotRemovable,
  Parse,
};

const char* to_string(ErrorKind kind);

/// All engine failures surface as this exception; `kind()` lets the CLI and
/// the HTTP layer map them to exit codes and status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qpmut
