#pragma once

#include <stdexcept>
#include <string>

namespace roadsel {

enum class ErrorKind {
  invalid_road,
  generation_exhausted,
  degenerate_training,
  invalid_data,
  invalid_config,
  unsupported_model,
  usage,
  io,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace roadsel
