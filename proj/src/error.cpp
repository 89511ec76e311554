#include "nlsb/error.hpp"

namespace nlsb {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "invalid-spec";
    case ErrorCode::Domain: return "domain-error";
    case ErrorCode::OutOfScope: return "out-of-scope";
    case ErrorCode::StepTooLarge: return "step-too-large";
    case ErrorCode::Stiffness: return "stiffness";
    case ErrorCode::AmplitudeRootNotFound: return "amplitude-root-not-found";
    case ErrorCode::ShootFailed: return "shoot-failed";
    case ErrorCode::InvalidProfile: return "invalid-profile";
    case ErrorCode::MissingTail: return "missing-tail";
    case ErrorCode::SweepDegenerate: return "sweep-degenerate";
    case ErrorCode::Unavailable: return "unavailable";
    case ErrorCode::Io: return "io-error";
  }
  return "unknown";
}

}  // namespace nlsb
