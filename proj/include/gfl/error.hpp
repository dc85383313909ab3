#pragma once

#include <stdexcept>
#include <string>

namespace gfl {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  CorruptData,
  IoError,
  InvalidImage,
  DimensionMismatch,
  DimensionNotDivisible,
  OddDimensions,
  DepthTooLarge,
  ImageTooSmall,
  AsymmetricSpectrum,
  InvalidConfig,
  EpochOutOfOrder,
  NonFiniteLoss,
};

const char* error_code_name(ErrorCode code);

/// All library failures surface as this exception; code() tells callers
/// whether they are looking at bad input data or a misuse of the API.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

} // namespace gfl
