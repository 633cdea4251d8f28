#pragma once

// Blink-speed drowsiness detection: EAR geometry, per-subject calibration,
// the blink state machine, synthetic traces, and trace/event serialization.

#include "blinkspeed/calibration.hpp"
#include "blinkspeed/detector.hpp"
#include "blinkspeed/geometry.hpp"
#include "blinkspeed/io.hpp"
#include "blinkspeed/report.hpp"
#include "blinkspeed/synth.hpp"
