// Command-line front end: synthesize traces, run detection over files or
// stdin, and export plot-ready CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "blinkspeed/blinkspeed.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInsufficientBlinks = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitUsage = 64;

struct ProfileArgs {
  std::string spec;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

// --profile accepts comma-separated key=value pairs:
//   open, closed, close, hold, reopen, ibi, rate, noise, seed
blinkspeed::BlinkProfile parse_profile(const std::string& spec) {
  blinkspeed::BlinkProfile profile;
  if (spec.empty()) return profile;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string item =
        spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    start = comma == std::string::npos ? spec.size() + 1 : comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--profile", "expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "open") profile.open_ear = std::stod(value);
      else if (key == "closed") profile.closed_ear = std::stod(value);
      else if (key == "close") profile.close_duration = std::stod(value);
      else if (key == "hold") profile.hold_duration = std::stod(value);
      else if (key == "reopen") profile.reopen_duration = std::stod(value);
      else if (key == "ibi") profile.inter_blink_interval = std::stod(value);
      else if (key == "rate") profile.sample_rate = std::stod(value);
      else if (key == "noise") profile.noise_amplitude = std::stod(value);
      else if (key == "seed") profile.rng_seed = std::stoull(value);
      else throw CLI::ValidationError("--profile", "unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw CLI::ValidationError("--profile", "bad value for '" + key + "'");
    }
  }
  return profile;
}

blinkspeed::TraceFormat require_format(const std::string& name) {
  const auto fmt = blinkspeed::trace_format_from_name(name);
  if (!fmt) {
    throw CLI::ValidationError("--format",
                               "expected landmark-csv, ear-csv or ear-jsonl, got '" + name + "'");
  }
  return *fmt;
}

int run_simulate(const ProfileArgs& args, std::size_t blinks, const std::string& format,
                 double eye_width) {
  const blinkspeed::TraceFormat fmt = require_format(format);
  blinkspeed::BlinkProfile profile = parse_profile(args.spec);
  if (args.seed_set) profile.rng_seed = args.seed;

  try {
    if (fmt == blinkspeed::TraceFormat::LandmarkCsv) {
      const auto trace = blinkspeed::generate_landmark_trace(profile, blinks, eye_width);
      blinkspeed::write_trace(std::cout, trace.frames, fmt);
    } else {
      const auto trace = blinkspeed::generate_ear_trace(profile, blinks);
      blinkspeed::write_trace(std::cout, trace.samples, fmt);
    }
  } catch (const std::exception& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int run_detect(const std::string& input, const std::string& format,
               const blinkspeed::CalibrationConfig& cal_cfg,
               const blinkspeed::DetectorTuning& tuning, const std::string& report_path) {
  const blinkspeed::TraceFormat fmt = require_format(format);

  std::ifstream file;
  std::istream* in = &std::cin;
  if (input != "-") {
    file.open(input);
    if (!file) {
      std::cerr << "detect: cannot open '" << input << "'\n";
      return kExitBadInput;
    }
    in = &file;
  }

  blinkspeed::SessionEngine engine(cal_cfg, tuning);
  blinkspeed::SessionResult result;
  blinkspeed::TraceReader reader(fmt);
  std::string line;
  try {
    while (std::getline(*in, line)) {
      const auto record = reader.push_line(line);
      if (!record) continue;
      blinkspeed::EarSample sample;
      if (const auto* frame = std::get_if<blinkspeed::LandmarkFrame>(&*record)) {
        try {
          sample = blinkspeed::ear_of_frame(*frame);
        } catch (const blinkspeed::DegenerateEyeError&) {
          ++result.skipped_frames;
          continue;
        }
      } else {
        sample = std::get<blinkspeed::EarSample>(*record);
      }
      // Emit each event before the next input line is read.
      const blinkspeed::DetectorOutput out = engine.push(sample);
      if (out.event) {
        result.events.push_back(*out.event);
        blinkspeed::write_event_line(std::cout, *out.event);
        if (out.alarm) {
          result.alarms.push_back(*out.alarm);
          blinkspeed::write_alarm_line(std::cout, *out.alarm);
        }
        std::cout.flush();
      }
    }
  } catch (const blinkspeed::ParseError& e) {
    std::cerr << "detect: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const blinkspeed::OrderError& e) {
    std::cerr << "detect: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const blinkspeed::OutOfOrderSampleError& e) {
    std::cerr << "detect: " << e.what() << "\n";
    return kExitBadInput;
  }

  if (!engine.calibrated()) {
    std::cerr << "detect: " << blinkspeed::InsufficientBlinksError{}.what() << "\n";
    return kExitInsufficientBlinks;
  }
  result.thresholds = engine.thresholds();

  const blinkspeed::SessionReport report = blinkspeed::build_report(result);
  if (report_path.empty()) {
    blinkspeed::format_report(std::cerr, report);
  } else {
    std::ofstream rf(report_path);
    if (!rf) {
      std::cerr << "detect: cannot write report to '" << report_path << "'\n";
      return kExitBadInput;
    }
    blinkspeed::format_report(rf, report);
  }
  return kExitOk;
}

int run_plot_data(const std::string& input, const std::string& format,
                  const std::string& out_path) {
  const blinkspeed::TraceFormat fmt = require_format(format);

  std::ifstream file;
  std::istream* in = &std::cin;
  if (input != "-") {
    file.open(input);
    if (!file) {
      std::cerr << "plot-data: cannot open '" << input << "'\n";
      return kExitBadInput;
    }
    in = &file;
  }

  std::vector<blinkspeed::EarSample> samples;
  try {
    const blinkspeed::ParsedTrace trace = blinkspeed::parse_trace(*in, fmt);
    if (const auto* frames = std::get_if<std::vector<blinkspeed::LandmarkFrame>>(&trace)) {
      for (const auto& frame : *frames) {
        try {
          samples.push_back(blinkspeed::ear_of_frame(frame));
        } catch (const blinkspeed::DegenerateEyeError&) {
        }
      }
    } else {
      samples = std::get<std::vector<blinkspeed::EarSample>>(trace);
    }
  } catch (const blinkspeed::Error& e) {
    std::cerr << "plot-data: " << e.what() << "\n";
    return kExitBadInput;
  }

  blinkspeed::Thresholds thresholds;
  try {
    const auto scan = blinkspeed::scan_calibration(samples, blinkspeed::CalibrationConfig{});
    blinkspeed::CalibrationState state;
    for (double m : scan.maxima) {
      state = blinkspeed::record_blink_max(std::move(state), m, blinkspeed::CalibrationConfig{});
    }
    thresholds = blinkspeed::finalize(state, blinkspeed::CalibrationConfig{});
  } catch (const blinkspeed::InsufficientBlinksError& e) {
    std::cerr << "plot-data: " << e.what() << "\n";
    return kExitInsufficientBlinks;
  }

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "plot-data: cannot write '" << out_path << "'\n";
    return kExitBadInput;
  }
  blinkspeed::write_plot_data(out, samples, thresholds);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blink-speed drowsiness detection over EAR/landmark streams"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic trace to stdout");
  ProfileArgs profile_args;
  std::size_t blinks = 8;
  std::string sim_format = "ear-csv";
  double eye_width = 4.0;
  simulate->add_option("--profile", profile_args.spec,
                       "comma-separated key=value blink parameters "
                       "(open,closed,close,hold,reopen,ibi,rate,noise,seed)");
  simulate->add_option("--blinks", blinks, "number of blinks")->check(CLI::PositiveNumber);
  simulate->add_option("--format", sim_format, "landmark-csv | ear-csv | ear-jsonl");
  auto* seed_opt = simulate->add_option("--seed", profile_args.seed, "RNG seed");
  simulate->add_option("--eye-width", eye_width, "eye width in pixels for landmark-csv");

  // detect
  auto* detect = app.add_subcommand("detect", "Run calibration + detection over a trace");
  std::string input;
  std::string det_format = "ear-csv";
  std::string report_path;
  blinkspeed::CalibrationConfig cal_cfg;
  blinkspeed::DetectorTuning tuning;
  detect->add_option("--input", input, "trace path, or - for stdin")->required();
  detect->add_option("--format", det_format, "landmark-csv | ear-csv | ear-jsonl");
  detect->add_option("--drowsy-threshold", tuning.drowsiness_threshold,
                     "alarm when blink speed falls below this");
  detect->add_option("--slope", cal_cfg.slope, "max-threshold slope");
  detect->add_option("--intercept", cal_cfg.intercept, "max-threshold intercept");
  detect->add_option("--min-offset", cal_cfg.min_offset, "min-threshold offset");
  detect->add_option("--tie-epsilon", tuning.tie_epsilon, "minimum-undercut tie epsilon");
  detect->add_option("--calibration-blinks", cal_cfg.required_blinks,
                     "blinks used for calibration");
  detect->add_option("--report", report_path, "write the session report here (default stderr)");

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "Export frame,ear,thresholds CSV");
  std::string plot_input, plot_format = "ear-csv", plot_out;
  plot->add_option("--input", plot_input, "trace path, or - for stdin")->required();
  plot->add_option("--format", plot_format, "landmark-csv | ear-csv | ear-jsonl");
  plot->add_option("--out", plot_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      profile_args.seed_set = seed_opt->count() > 0;
      return run_simulate(profile_args, blinks, sim_format, eye_width);
    }
    if (detect->parsed()) {
      return run_detect(input, det_format, cal_cfg, tuning, report_path);
    }
    return run_plot_data(plot_input, plot_format, plot_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
}
