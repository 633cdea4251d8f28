#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "blinkspeed/calibration.hpp"
#include "blinkspeed/errors.hpp"
#include "blinkspeed/geometry.hpp"

namespace blinkspeed {

enum class Classification { Wakeful, Drowsy };

// Tuning knobs that exist before calibration produces thresholds.
struct DetectorTuning {
  double drowsiness_threshold = 0.55;  // EAR-units/second; alarm below this
  double wakeful_reference = 1.0;      // informational lower bound of normal speeds
  double tie_epsilon = 0.01;           // a later minimum must undercut by this much
};

struct DetectorConfig {
  Thresholds thresholds;
  double drowsiness_threshold = 0.55;
  double wakeful_reference = 1.0;
  double tie_epsilon = 0.01;

  static DetectorConfig with(const Thresholds& t, const DetectorTuning& tuning) {
    return DetectorConfig{t, tuning.drowsiness_threshold, tuning.wakeful_reference,
                          tuning.tie_epsilon};
  }
};

struct BlinkEvent {
  double max_ear = 0.0;
  double min_ear = 0.0;
  double start_time = 0.0;
  double stop_time = 0.0;
  double speed = 0.0;  // (max_ear - min_ear) / (stop_time - start_time)
  Classification classification = Classification::Wakeful;
};

struct AlarmSignal {
  double time = 0.0;  // stop time of the drowsy blink
};

struct DetectorOutput {
  std::optional<BlinkEvent> event;
  std::optional<AlarmSignal> alarm;  // present exactly when the event is drowsy
};

inline double compute_speed(double max_ear, double min_ear, double start_time,
                            double stop_time) {
  if (!(stop_time > start_time)) throw InvalidIntervalError{};
  if (!(max_ear > min_ear)) throw InvalidAmplitudeError{};
  return (max_ear - min_ear) / (stop_time - start_time);
}

inline Classification classify(double speed, const DetectorConfig& cfg) {
  return speed < cfg.drowsiness_threshold ? Classification::Drowsy : Classification::Wakeful;
}

// Incremental blink detector.
//
// Phases:
//   Open    — track the running maximum; once it has reached max_threshold,
//             a sample dropping below max_threshold starts a closure.
//   Closing — track the minimum below min_threshold (a later value replaces
//             the current minimum only when it undercuts it by tie_epsilon,
//             otherwise the first value stands). The first sample above the
//             current minimum stops the timer and emits the event. A closure
//             that climbs back to max_threshold without ever crossing
//             min_threshold is a partial blink and emits nothing.
class BlinkDetector {
 public:
  explicit BlinkDetector(const DetectorConfig& cfg) : cfg_(cfg) {}

  DetectorOutput step(const EarSample& sample) {
    if (!(sample.timestamp > last_time_)) throw OutOfOrderSampleError{sample.timestamp};
    last_time_ = sample.timestamp;
    const double ear = sample.ear;

    DetectorOutput out;
    if (auto* open = std::get_if<Open>(&phase_)) {
      open->running_max = std::max(open->running_max, ear);
      if (ear < cfg_.thresholds.max_threshold &&
          open->running_max >= cfg_.thresholds.max_threshold) {
        phase_ = Closing{open->running_max, sample.timestamp, std::nullopt};
      }
      return out;
    }

    auto& closing = std::get<Closing>(phase_);
    if (ear < cfg_.thresholds.min_threshold) {
      if (!closing.min_ear) {
        closing.min_ear = ear;
      } else if (ear <= *closing.min_ear - cfg_.tie_epsilon) {
        closing.min_ear = ear;
      }
    }
    if (closing.min_ear && ear > *closing.min_ear) {
      BlinkEvent event;
      event.max_ear = closing.max_ear;
      event.min_ear = *closing.min_ear;
      event.start_time = closing.start_time;
      event.stop_time = sample.timestamp;
      event.speed =
          compute_speed(event.max_ear, event.min_ear, event.start_time, event.stop_time);
      event.classification = classify(event.speed, cfg_);
      out.event = event;
      if (event.classification == Classification::Drowsy) {
        out.alarm = AlarmSignal{event.stop_time};
      }
      phase_ = Open{ear};
    } else if (!closing.min_ear && ear >= cfg_.thresholds.max_threshold) {
      phase_ = Open{ear};  // partial blink, no event
    }
    return out;
  }

  const DetectorConfig& config() const { return cfg_; }

 private:
  struct Open {
    double running_max = 0.0;
  };
  struct Closing {
    double max_ear = 0.0;
    double start_time = 0.0;
    std::optional<double> min_ear;  // set only by samples below min_threshold
  };

  DetectorConfig cfg_;
  std::variant<Open, Closing> phase_ = Open{};
  double last_time_ = -std::numeric_limits<double>::infinity();
};

struct SessionResult {
  Thresholds thresholds;
  std::vector<BlinkEvent> events;
  std::vector<AlarmSignal> alarms;
  std::size_t skipped_frames = 0;
};

// Streams samples through calibration and then detection. Usable one sample
// at a time; run_session wraps it for whole traces.
class SessionEngine {
 public:
  SessionEngine(const CalibrationConfig& cal_cfg, const DetectorTuning& tuning)
      : cal_cfg_(cal_cfg), tuning_(tuning) {}

  DetectorOutput push(const EarSample& sample) {
    if (!(sample.timestamp > last_time_)) throw OutOfOrderSampleError{sample.timestamp};
    last_time_ = sample.timestamp;

    if (detector_) return detector_->step(sample);

    const double ear = sample.ear;
    if (!in_blink_) {
      if (eye_state(ear) == EyeState::Closed) {
        in_blink_ = true;
        pending_valid_ = window_has_max_;
        pending_max_ = window_max_;
      } else {
        window_max_ = window_has_max_ ? std::max(window_max_, ear) : ear;
        window_has_max_ = true;
      }
    } else if (eye_state(ear) == EyeState::Open) {
      in_blink_ = false;
      if (pending_valid_) {
        state_ = record_blink_max(std::move(state_), pending_max_, cal_cfg_);
      }
      window_max_ = ear;
      window_has_max_ = true;
      if (state_.complete(cal_cfg_)) {
        thresholds_ = finalize(state_, cal_cfg_);
        detector_.emplace(DetectorConfig::with(*thresholds_, tuning_));
        // The completing sample is also the detector's first input.
        return detector_->step(sample);
      }
    }
    return {};
  }

  bool calibrated() const { return thresholds_.has_value(); }

  const Thresholds& thresholds() const {
    if (!thresholds_) throw InsufficientBlinksError{};
    return *thresholds_;
  }

 private:
  CalibrationConfig cal_cfg_;
  DetectorTuning tuning_;
  CalibrationState state_;
  bool in_blink_ = false;
  bool window_has_max_ = false;
  double window_max_ = 0.0;
  double pending_max_ = 0.0;
  bool pending_valid_ = false;
  std::optional<Thresholds> thresholds_;
  std::optional<BlinkDetector> detector_;
  double last_time_ = -std::numeric_limits<double>::infinity();
};

inline SessionResult run_session(std::span<const EarSample> samples,
                                 const CalibrationConfig& cal_cfg,
                                 const DetectorTuning& tuning) {
  SessionEngine engine(cal_cfg, tuning);
  SessionResult result;
  for (const EarSample& s : samples) {
    DetectorOutput out = engine.push(s);
    if (out.event) result.events.push_back(*out.event);
    if (out.alarm) result.alarms.push_back(*out.alarm);
  }
  result.thresholds = engine.thresholds();  // throws if calibration never finished
  return result;
}

inline SessionResult run_session(std::span<const LandmarkFrame> frames,
                                 const CalibrationConfig& cal_cfg,
                                 const DetectorTuning& tuning) {
  std::vector<EarSample> samples;
  samples.reserve(frames.size());
  std::size_t skipped = 0;
  for (const LandmarkFrame& f : frames) {
    try {
      samples.push_back(ear_of_frame(f));
    } catch (const DegenerateEyeError&) {
      ++skipped;  // a dropped frame must not end the session
    }
  }
  SessionResult result = run_session(std::span<const EarSample>(samples), cal_cfg, tuning);
  result.skipped_frames = skipped;
  return result;
}

}  // namespace blinkspeed
