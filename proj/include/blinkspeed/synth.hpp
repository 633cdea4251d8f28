#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "blinkspeed/detector.hpp"
#include "blinkspeed/errors.hpp"
#include "blinkspeed/geometry.hpp"

namespace blinkspeed {

// Uniform doubles from a seeded engine with full 53-bit mantissas, so traces
// are reproducible independent of the platform's distribution internals.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Parametric blink waveform: plateau at open_ear, linear descent to
// closed_ear over close_duration, hold, linear ascent over reopen_duration,
// then an inter-blink plateau. Uniform noise is bounded by noise_amplitude.
struct BlinkProfile {
  double open_ear = 0.45;
  double closed_ear = 0.10;
  double close_duration = 0.175;    // seconds
  double hold_duration = 0.05;      // seconds
  double reopen_duration = 0.175;   // seconds
  double inter_blink_interval = 0.8;  // seconds of plateau before each blink
  double sample_rate = 30.0;        // Hz
  double noise_amplitude = 0.0;
  std::uint64_t rng_seed = 0;
};

struct GroundTruthRecord {
  double true_max = 0.0;
  double true_min = 0.0;
  double true_speed = 0.0;  // (true_max - true_min) / close_duration
  double onset = 0.0;       // descent begins
  double offset = 0.0;      // reopening completes
};

using GroundTruth = std::vector<GroundTruthRecord>;

struct EarTrace {
  std::vector<EarSample> samples;
  GroundTruth truth;
};

struct LandmarkTrace {
  std::vector<LandmarkFrame> frames;
  GroundTruth truth;
};

// Orthographic foreshortening of a pitched face; pitch in [0, pi/2).
struct TiltPerturbation {
  double pitch_angle = 0.0;  // radians
};

namespace detail {

inline void validate_profile(const BlinkProfile& p) {
  if (!(p.open_ear > p.closed_ear) || !(p.closed_ear >= 0.0) || !(p.close_duration > 0.0) ||
      !(p.hold_duration > 0.0) || !(p.reopen_duration > 0.0) ||
      !(p.inter_blink_interval > 0.0) || !(p.sample_rate > 0.0) ||
      !(p.noise_amplitude >= 0.0)) {
    throw std::invalid_argument("blink profile violates its invariants");
  }
  if (p.open_ear - p.noise_amplitude <= p.closed_ear + p.noise_amplitude) {
    throw InfeasibleProfileError{};
  }
}

inline double waveform_value(const BlinkProfile& p, double t) {
  const double cycle = p.inter_blink_interval + p.close_duration + p.hold_duration +
                       p.reopen_duration;
  if (t < p.inter_blink_interval) return p.open_ear;
  const double phase = std::fmod(t - p.inter_blink_interval, cycle);
  if (phase < p.close_duration) {
    return p.open_ear - phase * (p.open_ear - p.closed_ear) / p.close_duration;
  }
  if (phase < p.close_duration + p.hold_duration) return p.closed_ear;
  if (phase < p.close_duration + p.hold_duration + p.reopen_duration) {
    const double rise = phase - p.close_duration - p.hold_duration;
    return p.closed_ear + rise * (p.open_ear - p.closed_ear) / p.reopen_duration;
  }
  return p.open_ear;
}

}  // namespace detail

inline EarTrace generate_ear_trace(const BlinkProfile& profile, std::size_t n_blinks) {
  detail::validate_profile(profile);
  if (n_blinks < 1) throw std::invalid_argument("n_blinks must be at least 1");

  const double cycle = profile.inter_blink_interval + profile.close_duration +
                       profile.hold_duration + profile.reopen_duration;
  const double total = profile.inter_blink_interval + static_cast<double>(n_blinks) * cycle;

  EarTrace trace;
  trace.truth.reserve(n_blinks);
  for (std::size_t k = 0; k < n_blinks; ++k) {
    GroundTruthRecord rec;
    rec.true_max = profile.open_ear;
    rec.true_min = profile.closed_ear;
    rec.true_speed = (profile.open_ear - profile.closed_ear) / profile.close_duration;
    rec.onset = profile.inter_blink_interval + static_cast<double>(k) * cycle;
    rec.offset = rec.onset + profile.close_duration + profile.hold_duration +
                 profile.reopen_duration;
    trace.truth.push_back(rec);
  }

  SeededRng rng(profile.rng_seed);
  const std::size_t count = static_cast<std::size_t>(total * profile.sample_rate) + 1;
  trace.samples.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / profile.sample_rate;
    double value = detail::waveform_value(profile, t);
    if (profile.noise_amplitude > 0.0) {
      value += rng.uniform(-profile.noise_amplitude, profile.noise_amplitude);
    }
    trace.samples.push_back(EarSample{t, std::max(0.0, value)});
  }
  return trace;
}

// Canonical symmetric hexagon reproducing a target EAR exactly: corners on
// the horizontal axis, lids mirrored about it at height ear * width / 2.
inline EyeLandmarks canonical_eye(double ear, double eye_width) {
  const double h = ear * eye_width / 2.0;
  EyeLandmarks eye;
  eye.p1 = {0.0, 0.0};
  eye.p4 = {eye_width, 0.0};
  eye.p2 = {eye_width / 3.0, h};
  eye.p3 = {2.0 * eye_width / 3.0, h};
  eye.p6 = {eye_width / 3.0, -h};
  eye.p5 = {2.0 * eye_width / 3.0, -h};
  return eye;
}

inline LandmarkTrace generate_landmark_trace(const BlinkProfile& profile, std::size_t n_blinks,
                                             double eye_width) {
  if (!(eye_width > 0.0)) throw std::invalid_argument("eye_width must be positive");
  EarTrace ear_trace = generate_ear_trace(profile, n_blinks);

  LandmarkTrace trace;
  trace.truth = std::move(ear_trace.truth);
  trace.frames.reserve(ear_trace.samples.size());
  for (const EarSample& s : ear_trace.samples) {
    LandmarkFrame frame;
    frame.timestamp = s.timestamp;
    frame.left = canonical_eye(s.ear, eye_width);
    frame.right = frame.left;
    trace.frames.push_back(frame);
  }
  return trace;
}

// Scales every landmark's height above the eye's own p1-p4 axis by
// cos(pitch); horizontal coordinates are unchanged.
inline std::vector<LandmarkFrame> apply_tilt(std::span<const LandmarkFrame> frames,
                                             const TiltPerturbation& tilt) {
  const double c = std::cos(tilt.pitch_angle);
  if (!(c > 0.0)) throw std::invalid_argument("pitch angle must lie in [0, pi/2)");

  auto tilt_eye = [c](EyeLandmarks eye) {
    const double axis = (eye.p1.y + eye.p4.y) / 2.0;
    for (Point2* p : {&eye.p1, &eye.p2, &eye.p3, &eye.p4, &eye.p5, &eye.p6}) {
      p->y = axis + (p->y - axis) * c;
    }
    return eye;
  };

  std::vector<LandmarkFrame> out;
  out.reserve(frames.size());
  for (const LandmarkFrame& f : frames) {
    LandmarkFrame g = f;
    g.left = tilt_eye(f.left);
    g.right = tilt_eye(f.right);
    out.push_back(g);
  }
  return out;
}

// Whole-trace re-derivation of the blink semantics, kept free of the
// incremental detector's transition code so the two can be diffed against
// each other. Each event is found by scanning: a window maximum that reached
// max_threshold followed by a sample below it opens a segment; the segment's
// minimum is folded with the tie rule over the sub-min_threshold excursion;
// the first sample above that minimum closes the segment.
inline std::vector<BlinkEvent> brute_force_oracle(std::span<const EarSample> samples,
                                                  const Thresholds& thresholds,
                                                  const DetectorConfig& cfg) {
  std::vector<BlinkEvent> events;
  const std::size_t n = samples.size();

  auto window_max = [&](std::size_t from, std::size_t to) {
    double m = 0.0;  // EAR is non-negative, so zero is the empty-window seed
    for (std::size_t k = from; k < to; ++k) m = std::max(m, samples[k].ear);
    return m;
  };

  std::size_t window_begin = 0;
  std::size_t candidate = 0;  // first index that may open a segment
  while (candidate < n) {
    std::size_t onset = n;
    double max_ear = 0.0;
    for (std::size_t j = candidate; j < n; ++j) {
      if (samples[j].ear < thresholds.max_threshold) {
        const double wm = window_max(window_begin, j);
        if (wm >= thresholds.max_threshold) {
          onset = j;
          max_ear = wm;
          break;
        }
      }
    }
    if (onset == n) break;

    std::optional<double> segment_min;
    std::size_t resume = n;
    for (std::size_t k = onset + 1; k < n; ++k) {
      const double e = samples[k].ear;
      if (e < thresholds.min_threshold) {
        if (!segment_min) {
          segment_min = e;
        } else if (e <= *segment_min - cfg.tie_epsilon) {
          segment_min = e;
        }
      }
      if (segment_min && e > *segment_min) {
        BlinkEvent ev;
        ev.max_ear = max_ear;
        ev.min_ear = *segment_min;
        ev.start_time = samples[onset].timestamp;
        ev.stop_time = samples[k].timestamp;
        ev.speed = (ev.max_ear - ev.min_ear) / (ev.stop_time - ev.start_time);
        ev.classification = ev.speed < cfg.drowsiness_threshold ? Classification::Drowsy
                                                                : Classification::Wakeful;
        events.push_back(ev);
        resume = k;
        break;
      }
      if (!segment_min && e >= thresholds.max_threshold) {
        resume = k;  // partial blink, nothing emitted
        break;
      }
    }
    if (resume == n) break;  // trace ended inside a segment
    window_begin = resume;
    candidate = resume + 1;
  }
  return events;
}

}  // namespace blinkspeed
