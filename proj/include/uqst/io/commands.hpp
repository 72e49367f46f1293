#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "uqst/error.hpp"
#include "uqst/sim/frame.hpp"
#include "uqst/tomo/qgrid.hpp"
#include "uqst/tomo/quadrature.hpp"

namespace uqst::io {

// One function per pipeline stage. Each reads its inputs from files, writes
// its outputs to files, reports to `log`, and throws uqst::Error on failure.

struct SimulateOptions {
  std::string config_path;
  sim::FrameKind kind = sim::FrameKind::signal;
  std::string out_path;
  std::optional<std::size_t> shots; ///< default: shots (signal) or vacuum_shots
  std::optional<std::uint64_t> seed;
};
void cmd_simulate(const SimulateOptions &opt, std::ostream &log);

struct CalibrateOptions {
  std::string frames_path;
  std::string out_path;
};
void cmd_calibrate(const CalibrateOptions &opt, std::ostream &log);

struct ReconstructOptions {
  std::string frames_path;
  std::string calibration_path;
  std::string out_dir;
  std::optional<tomo::ModeRange> modes;
  std::optional<int> q_mode; ///< mode for the Q-function export; default: brightest
  bool dump_quadratures = false;
  std::size_t bins = tomo::default_histogram_bins;
  std::size_t kde_grid = tomo::default_kde_grid;
  tomo::NtScaling scaling = tomo::NtScaling::per_shot;
};
void cmd_reconstruct(const ReconstructOptions &opt, std::ostream &log);

struct QfuncOptions {
  std::string frames_path;
  std::string calibration_path;
  std::string out_dir;
  int mode = 0;
  std::optional<int> joint;
  std::string axes = "xy"; ///< quadrature of mode, then of joint (or of mode again)
  tomo::Estimator estimator = tomo::Estimator::histogram;
  std::size_t bins = tomo::default_histogram_bins;
  std::size_t kde_grid = tomo::default_kde_grid;
};
void cmd_qfunc(const QfuncOptions &opt, std::ostream &log);

struct NoiseOptions {
  std::string lit_path;
  std::string dark_path;
};
/// Returns the lit/dark variance ratio in dB.
double cmd_noise(const NoiseOptions &opt, std::ostream &log);

/// Process exit code for an error category (0 is success, 1 unexpected).
int exit_code(const Error &e);

} // namespace uqst::io
