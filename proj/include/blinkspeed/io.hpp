#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "blinkspeed/detector.hpp"
#include "blinkspeed/errors.hpp"
#include "blinkspeed/geometry.hpp"

namespace blinkspeed {

enum class TraceFormat { LandmarkCsv, EarCsv, EarJsonLines };

inline std::optional<TraceFormat> trace_format_from_name(std::string_view name) {
  if (name == "landmark-csv") return TraceFormat::LandmarkCsv;
  if (name == "ear-csv") return TraceFormat::EarCsv;
  if (name == "ear-jsonl") return TraceFormat::EarJsonLines;
  return std::nullopt;
}

inline constexpr std::string_view kEarCsvHeader = "t,ear";
inline constexpr std::string_view kLandmarkCsvHeader =
    "t,lx1,ly1,lx2,ly2,lx3,ly3,lx4,ly4,lx5,ly5,lx6,ly6,"
    "rx1,ry1,rx2,ry2,rx3,ry3,rx4,ry4,rx5,ry5,rx6,ry6";

// Serialized with 12 significant digits so a write/parse round trip is
// faithful to 1e-9.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace detail {

inline double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(line, "expected a number, got '" + std::string(field) + "'");
  }
  return value;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace detail

using TraceRecord = std::variant<EarSample, LandmarkFrame>;

// Incremental line parser shared by batch parsing and the streaming CLI so
// both modes decode input identically.
class TraceReader {
 public:
  explicit TraceReader(TraceFormat fmt) : fmt_(fmt) {}

  // Returns a record, or nullopt for header/blank lines.
  std::optional<TraceRecord> push_line(std::string_view line) {
    ++lineno_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) return std::nullopt;

    if (fmt_ != TraceFormat::EarJsonLines && !header_seen_) {
      const std::string_view expected =
          fmt_ == TraceFormat::EarCsv ? kEarCsvHeader : kLandmarkCsvHeader;
      if (line != expected) {
        throw ParseError(lineno_, "expected header '" + std::string(expected) + "'");
      }
      header_seen_ = true;
      return std::nullopt;
    }

    TraceRecord record = parse_record(line);
    const double t = std::holds_alternative<EarSample>(record)
                         ? std::get<EarSample>(record).timestamp
                         : std::get<LandmarkFrame>(record).timestamp;
    if (!(t > last_t_)) throw OrderError(lineno_);
    last_t_ = t;
    return record;
  }

  std::size_t line_number() const { return lineno_; }

 private:
  TraceRecord parse_record(std::string_view line) const {
    switch (fmt_) {
      case TraceFormat::EarCsv: {
        const auto fields = detail::split_fields(line);
        if (fields.size() != 2) throw ParseError(lineno_, "expected 2 fields");
        EarSample s;
        s.timestamp = detail::parse_double(fields[0], lineno_);
        s.ear = detail::parse_double(fields[1], lineno_);
        if (!(s.ear >= 0.0)) throw ParseError(lineno_, "ear must be non-negative");
        return s;
      }
      case TraceFormat::LandmarkCsv: {
        const auto fields = detail::split_fields(line);
        if (fields.size() != 25) {
          throw ParseError(lineno_, "expected 25 fields, got " + std::to_string(fields.size()));
        }
        LandmarkFrame f;
        f.timestamp = detail::parse_double(fields[0], lineno_);
        Point2* points[12] = {&f.left.p1,  &f.left.p2,  &f.left.p3,  &f.left.p4,
                              &f.left.p5,  &f.left.p6,  &f.right.p1, &f.right.p2,
                              &f.right.p3, &f.right.p4, &f.right.p5, &f.right.p6};
        for (int i = 0; i < 12; ++i) {
          points[i]->x = detail::parse_double(fields[1 + 2 * i], lineno_);
          points[i]->y = detail::parse_double(fields[2 + 2 * i], lineno_);
        }
        return f;
      }
      case TraceFormat::EarJsonLines: {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(lineno_, e.what());
        }
        if (!j.is_object() || !j.contains("t") || !j.contains("ear") ||
            !j["t"].is_number() || !j["ear"].is_number()) {
          throw ParseError(lineno_, "expected an object with numeric 't' and 'ear'");
        }
        EarSample s{j["t"].get<double>(), j["ear"].get<double>()};
        if (!(s.ear >= 0.0)) throw ParseError(lineno_, "ear must be non-negative");
        return s;
      }
    }
    throw ParseError(lineno_, "unknown format");
  }

  TraceFormat fmt_;
  std::size_t lineno_ = 0;
  bool header_seen_ = false;
  double last_t_ = -std::numeric_limits<double>::infinity();
};

using ParsedTrace = std::variant<std::vector<EarSample>, std::vector<LandmarkFrame>>;

inline ParsedTrace parse_trace(std::istream& in, TraceFormat fmt) {
  TraceReader reader(fmt);
  std::vector<EarSample> samples;
  std::vector<LandmarkFrame> frames;
  std::string line;
  while (std::getline(in, line)) {
    auto record = reader.push_line(line);
    if (!record) continue;
    if (auto* s = std::get_if<EarSample>(&*record)) {
      samples.push_back(*s);
    } else {
      frames.push_back(std::get<LandmarkFrame>(*record));
    }
  }
  if (fmt == TraceFormat::LandmarkCsv) return frames;
  return samples;
}

inline void write_trace(std::ostream& os, std::span<const EarSample> samples,
                        TraceFormat fmt) {
  if (fmt == TraceFormat::EarCsv) {
    os << kEarCsvHeader << "\n";
    for (const EarSample& s : samples) {
      os << format_number(s.timestamp) << ',' << format_number(s.ear) << "\n";
    }
  } else if (fmt == TraceFormat::EarJsonLines) {
    for (const EarSample& s : samples) {
      os << "{\"t\": " << format_number(s.timestamp) << ", \"ear\": " << format_number(s.ear)
         << "}\n";
    }
  } else {
    throw std::invalid_argument("an EAR trace cannot be written as landmark-csv");
  }
}

inline void write_trace(std::ostream& os, std::span<const LandmarkFrame> frames,
                        TraceFormat fmt) {
  if (fmt != TraceFormat::LandmarkCsv) {
    throw std::invalid_argument("a landmark trace must be written as landmark-csv");
  }
  os << kLandmarkCsvHeader << "\n";
  for (const LandmarkFrame& f : frames) {
    os << format_number(f.timestamp);
    const Point2* points[12] = {&f.left.p1,  &f.left.p2,  &f.left.p3,  &f.left.p4,
                                &f.left.p5,  &f.left.p6,  &f.right.p1, &f.right.p2,
                                &f.right.p3, &f.right.p4, &f.right.p5, &f.right.p6};
    for (const Point2* p : points) {
      os << ',' << format_number(p->x) << ',' << format_number(p->y);
    }
    os << "\n";
  }
}

inline void write_event_line(std::ostream& os, const BlinkEvent& event) {
  os << "{\"start\": " << format_number(event.start_time)
     << ", \"stop\": " << format_number(event.stop_time)
     << ", \"max_ear\": " << format_number(event.max_ear)
     << ", \"min_ear\": " << format_number(event.min_ear)
     << ", \"speed\": " << format_number(event.speed) << ", \"class\": \""
     << (event.classification == Classification::Drowsy ? "drowsy" : "wakeful") << "\"}\n";
}

inline void write_alarm_line(std::ostream& os, const AlarmSignal& alarm) {
  os << "{\"alarm\": " << format_number(alarm.time) << "}\n";
}

// Events one per line; each drowsy event is followed by its alarm line.
inline void write_events(std::ostream& os, std::span<const BlinkEvent> events,
                         std::span<const AlarmSignal> alarms) {
  std::size_t alarm_index = 0;
  for (const BlinkEvent& e : events) {
    write_event_line(os, e);
    if (e.classification == Classification::Drowsy && alarm_index < alarms.size()) {
      write_alarm_line(os, alarms[alarm_index++]);
    }
  }
}

// CSV feed for external plotting of a session against its thresholds.
inline void write_plot_data(std::ostream& os, std::span<const EarSample> samples,
                            const Thresholds& thresholds) {
  os << "frame_index,t,ear,max_threshold,min_threshold\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    os << i << ',' << format_number(samples[i].timestamp) << ','
       << format_number(samples[i].ear) << ',' << format_number(thresholds.max_threshold)
       << ',' << format_number(thresholds.min_threshold) << "\n";
  }
}

}  // namespace blinkspeed
