#include "blinkspeed/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "blinkspeed/report.hpp"
#include "blinkspeed/synth.hpp"

namespace blinkspeed {
namespace {

TEST(ParseTrace, EarCsv) {
  std::istringstream in("t,ear\n0.0,0.35\n0.1,0.28\n");
  const ParsedTrace trace = parse_trace(in, TraceFormat::EarCsv);
  const auto& samples = std::get<std::vector<EarSample>>(trace);
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_DOUBLE_EQ(samples[0].timestamp, 0.0);
  EXPECT_DOUBLE_EQ(samples[0].ear, 0.35);
  EXPECT_DOUBLE_EQ(samples[1].timestamp, 0.1);
  EXPECT_DOUBLE_EQ(samples[1].ear, 0.28);
}

TEST(ParseTrace, EarJsonLines) {
  std::istringstream in("{\"t\": 0.0, \"ear\": 0.4}\n{\"t\": 0.5, \"ear\": 0.1}\n");
  const auto samples =
      std::get<std::vector<EarSample>>(parse_trace(in, TraceFormat::EarJsonLines));
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_DOUBLE_EQ(samples[1].timestamp, 0.5);
  EXPECT_DOUBLE_EQ(samples[1].ear, 0.1);
}

TEST(ParseTrace, EmptyInputIsEmptyTrace) {
  std::istringstream in("");
  const auto samples = std::get<std::vector<EarSample>>(parse_trace(in, TraceFormat::EarCsv));
  EXPECT_TRUE(samples.empty());
}

TEST(ParseTrace, WrongFieldCountReportsLine) {
  // 24 fields instead of 25
  std::string row = "0.0";
  for (int i = 0; i < 23; ++i) row += ",1.0";
  std::istringstream in(std::string(kLandmarkCsvHeader) + "\n" + row + "\n");
  try {
    parse_trace(in, TraceFormat::LandmarkCsv);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
  }
}

TEST(ParseTrace, NonIncreasingTimestampIsOrderError) {
  std::istringstream in("t,ear\n0.1,0.3\n0.1,0.31\n");
  try {
    parse_trace(in, TraceFormat::EarCsv);
    FAIL() << "expected OrderError";
  } catch (const OrderError& e) {
    EXPECT_EQ(e.line, 3u);
  }
}

TEST(ParseTrace, BadHeaderIsParseError) {
  std::istringstream in("time,value\n0.0,0.3\n");
  EXPECT_THROW(parse_trace(in, TraceFormat::EarCsv), ParseError);
}

TEST(ParseTrace, GarbageNumberIsParseError) {
  std::istringstream in("t,ear\n0.0,abc\n");
  EXPECT_THROW(parse_trace(in, TraceFormat::EarCsv), ParseError);
}

TEST(RoundTripProperty, EarTraceSurvivesWriteParse) {
  BlinkProfile p;
  p.noise_amplitude = 0.013;
  p.rng_seed = 77;
  const EarTrace trace = generate_ear_trace(p, 3);

  for (TraceFormat fmt : {TraceFormat::EarCsv, TraceFormat::EarJsonLines}) {
    std::ostringstream out;
    write_trace(out, trace.samples, fmt);
    std::istringstream in(out.str());
    const auto parsed = std::get<std::vector<EarSample>>(parse_trace(in, fmt));
    ASSERT_EQ(parsed.size(), trace.samples.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      EXPECT_NEAR(parsed[i].timestamp, trace.samples[i].timestamp, 1e-9);
      EXPECT_NEAR(parsed[i].ear, trace.samples[i].ear, 1e-9);
    }
  }
}

TEST(RoundTripProperty, LandmarkTraceSurvivesWriteParse) {
  BlinkProfile p;
  p.noise_amplitude = 0.005;
  p.rng_seed = 3;
  const LandmarkTrace trace = generate_landmark_trace(p, 2, 4.0);

  std::ostringstream out;
  write_trace(out, trace.frames, TraceFormat::LandmarkCsv);
  std::istringstream in(out.str());
  const auto parsed =
      std::get<std::vector<LandmarkFrame>>(parse_trace(in, TraceFormat::LandmarkCsv));
  ASSERT_EQ(parsed.size(), trace.frames.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_NEAR(parsed[i].timestamp, trace.frames[i].timestamp, 1e-9);
    EXPECT_NEAR(parsed[i].left.p2.y, trace.frames[i].left.p2.y, 1e-9);
    EXPECT_NEAR(parsed[i].right.p5.y, trace.frames[i].right.p5.y, 1e-9);
    EXPECT_NEAR(ear_of_frame(parsed[i]).ear, ear_of_frame(trace.frames[i]).ear, 1e-9);
  }
}

TEST(WriteEvents, EmptyInputsGiveEmptyOutput) {
  std::ostringstream out;
  write_events(out, {}, {});
  EXPECT_TRUE(out.str().empty());
}

TEST(WriteEvents, WakefulEventIsOneLine) {
  BlinkEvent e;
  e.max_ear = 0.45;
  e.min_ear = 0.11;
  e.start_time = 1.0;
  e.stop_time = 1.2;
  e.speed = 1.7;
  e.classification = Classification::Wakeful;
  std::ostringstream out;
  write_events(out, std::vector<BlinkEvent>{e}, {});
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_NE(text.find("\"class\": \"wakeful\""), std::string::npos);
  EXPECT_EQ(text.find("alarm"), std::string::npos);
}

TEST(WriteEvents, DrowsyEventIsFollowedByAlarm) {
  BlinkEvent e;
  e.max_ear = 0.30;
  e.min_ear = 0.14;
  e.start_time = 2.0;
  e.stop_time = 2.5;
  e.speed = 0.32;
  e.classification = Classification::Drowsy;
  std::ostringstream out;
  write_events(out, std::vector<BlinkEvent>{e}, std::vector<AlarmSignal>{{2.5}});
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  const auto event_pos = text.find("\"class\": \"drowsy\"");
  const auto alarm_pos = text.find("{\"alarm\": 2.5}");
  ASSERT_NE(event_pos, std::string::npos);
  ASSERT_NE(alarm_pos, std::string::npos);
  EXPECT_LT(event_pos, alarm_pos);
}

TEST(PlotData, RowsCarryThresholds) {
  Thresholds thr{0.45, 0.3467, 0.2967};
  const std::vector<EarSample> samples{{0.0, 0.4}, {0.1, 0.35}};
  std::ostringstream out;
  write_plot_data(out, samples, thr);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "frame_index,t,ear,max_threshold,min_threshold");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "0,");
  EXPECT_NE(line.find("0.3467"), std::string::npos);
  EXPECT_NE(line.find("0.2967"), std::string::npos);
}

TEST(Report, InvariantsHold) {
  BlinkProfile p;
  p.open_ear = 0.40;
  p.closed_ear = 0.10;
  p.close_duration = 0.6;  // slow enough for drowsy classifications
  p.hold_duration = 0.1;
  p.reopen_duration = 0.4;
  const EarTrace trace = generate_ear_trace(p, 6);
  const SessionResult result = run_session(trace.samples, CalibrationConfig{}, DetectorTuning{});
  const SessionReport report = build_report(result);

  ASSERT_EQ(report.rows.size(), result.events.size());
  double sum = 0.0;
  std::size_t drowsy = 0;
  for (const ReportRow& row : report.rows) {
    sum += row.speed;
    if (row.classification == Classification::Drowsy) ++drowsy;
  }
  EXPECT_NEAR(report.average_speed, sum / report.rows.size(), 1e-12);
  EXPECT_EQ(report.alarm_count, drowsy);
  EXPECT_EQ(report.alarm_count, result.alarms.size());

  std::ostringstream out;
  format_report(out, report);
  EXPECT_NE(out.str().find("pixel/second"), std::string::npos);
}

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.35), "0.35");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
}

}  // namespace
}  // namespace blinkspeed
