#pragma once

#include <cmath>

#include "blinkspeed/errors.hpp"

namespace blinkspeed {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Six-point eye model: p1 outer corner, p4 inner corner,
// p2/p3 upper lid, p6/p5 lower lid.
struct EyeLandmarks {
  Point2 p1, p2, p3, p4, p5, p6;
};

struct LandmarkFrame {
  double timestamp = 0.0;  // seconds
  EyeLandmarks left;
  EyeLandmarks right;
};

struct EarSample {
  double timestamp = 0.0;  // seconds
  double ear = 0.0;        // dimensionless, >= 0
};

enum class EyeState { Open, Closed, Intermediate };

// Eyes narrower than this are treated as broken frames, not closed eyes.
inline constexpr double kMinEyeWidth = 1e-9;

// EAR heuristic bounds: open above 0.35, closed below 0.15, boundaries
// classify as Intermediate.
inline constexpr double kOpenEar = 0.35;
inline constexpr double kClosedEar = 0.15;

inline double ear_of_eye(const EyeLandmarks& eye) {
  const double width = distance(eye.p1, eye.p4);
  if (!(width > kMinEyeWidth)) throw DegenerateEyeError{};
  return (distance(eye.p2, eye.p6) + distance(eye.p3, eye.p5)) / (2.0 * width);
}

// Mean of the per-eye EARs; falls back to the single valid eye when the
// other is degenerate.
inline EarSample ear_of_frame(const LandmarkFrame& frame) {
  double sum = 0.0;
  int valid = 0;
  for (const EyeLandmarks* eye : {&frame.left, &frame.right}) {
    try {
      sum += ear_of_eye(*eye);
      ++valid;
    } catch (const DegenerateEyeError&) {
    }
  }
  if (valid == 0) throw DegenerateEyeError{};
  return EarSample{frame.timestamp, sum / valid};
}

inline EyeState eye_state(double ear) {
  if (ear > kOpenEar) return EyeState::Open;
  if (ear < kClosedEar) return EyeState::Closed;
  return EyeState::Intermediate;
}

}  // namespace blinkspeed
