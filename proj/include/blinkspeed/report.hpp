#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "blinkspeed/detector.hpp"

namespace blinkspeed {

struct ReportRow {
  std::size_t index = 0;  // 1-based blink number
  double max_ear = 0.0;
  double min_ear = 0.0;
  double duration = 0.0;  // seconds
  double speed = 0.0;
  Classification classification = Classification::Wakeful;
};

// Per-session summary mirroring a per-participant results table.
struct SessionReport {
  Thresholds thresholds;
  std::vector<ReportRow> rows;
  double average_speed = 0.0;
  std::size_t alarm_count = 0;
  std::size_t skipped_frames = 0;
};

inline SessionReport build_report(const SessionResult& result) {
  SessionReport report;
  report.thresholds = result.thresholds;
  report.skipped_frames = result.skipped_frames;
  double speed_sum = 0.0;
  for (std::size_t i = 0; i < result.events.size(); ++i) {
    const BlinkEvent& e = result.events[i];
    ReportRow row;
    row.index = i + 1;
    row.max_ear = e.max_ear;
    row.min_ear = e.min_ear;
    row.duration = e.stop_time - e.start_time;
    row.speed = e.speed;
    row.classification = e.classification;
    report.rows.push_back(row);
    speed_sum += e.speed;
    if (e.classification == Classification::Drowsy) ++report.alarm_count;
  }
  if (!report.rows.empty()) {
    report.average_speed = speed_sum / static_cast<double>(report.rows.size());
  }
  return report;
}

// Speeds are labelled pixel/second in reports even though the numerator is a
// dimensionless ratio.
inline void format_report(std::ostream& os, const SessionReport& report) {
  char line[160];
  std::snprintf(line, sizeof(line), "thresholds: aes=%.4f max=%.4f min=%.4f\n",
                report.thresholds.aes, report.thresholds.max_threshold,
                report.thresholds.min_threshold);
  os << line;
  os << "blink  max_ear  min_ear  duration_s  speed_px_s  class\n";
  for (const ReportRow& row : report.rows) {
    std::snprintf(line, sizeof(line), "%5zu  %7.4f  %7.4f  %10.4f  %10.4f  %s\n", row.index,
                  row.max_ear, row.min_ear, row.duration, row.speed,
                  row.classification == Classification::Drowsy ? "drowsy" : "wakeful");
    os << line;
  }
  std::snprintf(line, sizeof(line), "average speed: %.4f pixel/second over %zu blinks\n",
                report.average_speed, report.rows.size());
  os << line;
  os << "alarms: " << report.alarm_count << "\n";
  os << "skipped frames: " << report.skipped_frames << "\n";
}

}  // namespace blinkspeed
