#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chainloc {

enum class ErrorKind {
  InvalidPlan,
  InvalidSegment,
  InvalidCall,
  InvalidConfig,
  InvalidInput,
  EmptyUniverse,
  NoLocationOfType,
  TooLarge,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chainloc
