#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blinkspeed {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An eye whose horizontal extent is numerically zero; callers skip the frame.
struct DegenerateEyeError : Error {
  DegenerateEyeError() : Error("degenerate eye: horizontal extent is zero") {}
};

struct AlreadyCompleteError : Error {
  AlreadyCompleteError() : Error("calibration already holds the required number of maxima") {}
};

struct InvalidMaximumError : Error {
  InvalidMaximumError() : Error("blink maximum must be positive and finite") {}
};

struct IncompleteCalibrationError : Error {
  IncompleteCalibrationError() : Error("calibration has fewer maxima than required") {}
};

struct InsufficientBlinksError : Error {
  InsufficientBlinksError() : Error("stream ended before enough calibration blinks completed") {}
};

struct OutOfOrderSampleError : Error {
  explicit OutOfOrderSampleError(double t)
      : Error("sample timestamp " + std::to_string(t) + " does not strictly increase") {}
};

struct InvalidIntervalError : Error {
  InvalidIntervalError() : Error("stop time must be after start time") {}
};

struct InvalidAmplitudeError : Error {
  InvalidAmplitudeError() : Error("maximum EAR must exceed minimum EAR") {}
};

struct InfeasibleProfileError : Error {
  InfeasibleProfileError() : Error("noise amplitude erases the blink structure") {}
};

struct ParseError : Error {
  ParseError(std::size_t line, const std::string& what)
      : Error("parse error at line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

struct OrderError : Error {
  explicit OrderError(std::size_t line)
      : Error("timestamps must strictly increase (line " + std::to_string(line) + ")"),
        line(line) {}
  std::size_t line;
};

}  // namespace blinkspeed
