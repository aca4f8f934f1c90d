#pragma once

#include <stdexcept>
#include <string>

namespace vortmix {

// Numeric values are mirrored by the VM_* codes in vortmix.h.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kGridTooLarge = 2,
  kNonfiniteState = 3,
  kPrecondition = 4,
  kMissingNoiseLog = 5,
  kSamplingTooCoarse = 6,
  kAlignment = 7,
  kConfig = 8,
  kIo = 9,
  kInternal = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a trajectory develops a NaN/inf coefficient; carries the time.
class NonfiniteStateError : public Error {
 public:
  NonfiniteStateError(double time, const std::string& what)
      : Error(ErrorCode::kNonfiniteState, what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace vortmix
