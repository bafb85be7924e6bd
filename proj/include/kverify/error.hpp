#pragma once

#include <stdexcept>
#include <string>

namespace kverify {

// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  InvalidArgument = 1,
  UnknownModel,
  UnknownSuite,
  ParseError,
  OutOfChart,
  OrderUnsupported,
  DegenerateMetric,
  NotEinstein,
  NotKahler,
  NotAdapted,
  ConstantH,
  NotNormalized,
  FlatModel,
  DegenerateRatio,
  NonConvergence,
  NonHomogeneous,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace kverify
