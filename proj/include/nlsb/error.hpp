#pragma once

#include <stdexcept>
#include <string>

namespace nlsb {

enum class ErrorCode {
  InvalidSpec,
  Domain,
  OutOfScope,
  StepTooLarge,
  Stiffness,
  AmplitudeRootNotFound,
  ShootFailed,
  InvalidProfile,
  MissingTail,
  SweepDegenerate,
  Unavailable,
  Io,
};

/// Domain errors are caller mistakes; everything else is a numerical failure
/// (or I/O).
enum class ErrorKind { Domain, Numerical, Io };

constexpr ErrorKind kind_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec:
    case ErrorCode::Domain:
    case ErrorCode::OutOfScope:
      return ErrorKind::Domain;
    case ErrorCode::Io:
      return ErrorKind::Io;
    default:
      return ErrorKind::Numerical;
  }
}

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace nlsb
