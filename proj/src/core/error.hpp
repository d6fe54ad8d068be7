#pragma once

#include <stdexcept>
#include <string>

namespace atr {

enum class ErrorCode {
  InvalidArgument,  // bad parameters, degenerate shapes
  Parse,            // malformed file content
  NotFound,         // unknown id or missing file
  Data,             // input violates a corpus/matrix invariant
  Io,               // filesystem failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace atr
