#include "chainloc/error.hpp"

namespace chainloc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPlan:
      return "InvalidPlan";
    case ErrorKind::InvalidSegment:
      return "InvalidSegment";
    case ErrorKind::InvalidCall:
      return "InvalidCall";
    case ErrorKind::InvalidConfig:
      return "InvalidConfig";
    case ErrorKind::InvalidInput:
      return "InvalidInput";
    case ErrorKind::EmptyUniverse:
      return "EmptyUniverse";
    case ErrorKind::NoLocationOfType:
      return "NoLocationOfType";
    case ErrorKind::TooLarge:
      return "TooLarge";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace chainloc
