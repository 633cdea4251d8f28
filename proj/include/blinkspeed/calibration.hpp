#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "blinkspeed/errors.hpp"
#include "blinkspeed/geometry.hpp"

namespace blinkspeed {

// The slope/intercept/offset constants are empirical; they are configuration
// so they can be re-tuned without code changes.
struct CalibrationConfig {
  std::size_t required_blinks = 3;
  double slope = 2.0 / 3.0;
  double intercept = 0.0467;
  double min_offset = 0.05;
};

struct CalibrationState {
  std::vector<double> collected_maxima;

  bool complete(const CalibrationConfig& cfg) const {
    return collected_maxima.size() >= cfg.required_blinks;
  }
};

struct Thresholds {
  double aes = 0.0;
  double max_threshold = 0.0;
  double min_threshold = 0.0;
};

inline CalibrationState record_blink_max(CalibrationState state, double max_ear,
                                         const CalibrationConfig& cfg) {
  if (state.complete(cfg)) throw AlreadyCompleteError{};
  if (!(max_ear > 0.0) || !std::isfinite(max_ear)) throw InvalidMaximumError{};
  state.collected_maxima.push_back(max_ear);
  return state;
}

inline Thresholds finalize(const CalibrationState& state, const CalibrationConfig& cfg) {
  if (state.collected_maxima.size() < cfg.required_blinks) throw IncompleteCalibrationError{};
  const double aes =
      std::accumulate(state.collected_maxima.begin(), state.collected_maxima.end(), 0.0) /
      static_cast<double>(state.collected_maxima.size());
  Thresholds t;
  t.aes = aes;
  t.max_threshold = cfg.slope * aes + cfg.intercept;
  t.min_threshold = t.max_threshold - cfg.min_offset;
  return t;
}

// Result of scanning a stream prefix for calibration blinks. next_index is
// the position of the sample on which the last required blink completed;
// detection resumes from that sample.
struct CalibrationScan {
  std::vector<double> maxima;
  std::size_t next_index = 0;
};

// Segments the prefix into blinks with the generic open/closed heuristic:
// a blink is an excursion into Closed (< 0.15) that returns to Open (> 0.35).
// Each blink's maximum is the largest EAR seen since the end of the previous
// blink, including the sample immediately preceding closure. A closure that
// begins before any open-window sample was seen yields no usable maximum and
// is not counted.
inline CalibrationScan scan_calibration(std::span<const EarSample> samples,
                                        const CalibrationConfig& cfg) {
  CalibrationScan scan;
  bool in_blink = false;
  bool window_has_max = false;
  double window_max = 0.0;
  double pending_max = 0.0;
  bool pending_valid = false;

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double ear = samples[i].ear;
    if (!in_blink) {
      if (eye_state(ear) == EyeState::Closed) {
        in_blink = true;
        pending_max = window_max;
        pending_valid = window_has_max;
      } else {
        window_max = window_has_max ? std::max(window_max, ear) : ear;
        window_has_max = true;
      }
    } else if (eye_state(ear) == EyeState::Open) {
      in_blink = false;
      if (pending_valid) scan.maxima.push_back(pending_max);
      window_max = ear;  // the completing sample opens the next window
      window_has_max = true;
      if (scan.maxima.size() == cfg.required_blinks) {
        scan.next_index = i;
        return scan;
      }
    }
  }
  throw InsufficientBlinksError{};
}

inline std::vector<double> extract_calibration_maxima(std::span<const EarSample> samples,
                                                      const CalibrationConfig& cfg) {
  return scan_calibration(samples, cfg).maxima;
}

}  // namespace blinkspeed
