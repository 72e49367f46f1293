#include "uqst/io/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uqst/error.hpp"
#include "uqst/io/config.hpp"
#include "uqst/io/export.hpp"
#include "uqst/io/frame_file.hpp"
#include "uqst/io/pipeline.hpp"
#include "uqst/sim/optics.hpp"
#include "uqst/tomo/calibration.hpp"
#include "uqst/tomo/statistics.hpp"

namespace uqst::io {

namespace fs = std::filesystem;

namespace {

struct LoadedFrames {
  DecodedFrameSet decoded;
  std::vector<tomo::ReducedTrace> traces;
  std::string canonical_config;
};

tomo::Roi roi_for(const DecodedFrameSet &d) {
  if (d.config.run && d.config.run->roi)
    return *d.config.run->roi;
  if (d.set.frames.empty())
    return full_roi(d.set.detector);
  return {0, 0, d.set.frames.front().width, d.set.frames.front().height};
}

LoadedFrames load_frames(const std::string &path) {
  LoadedFrames out;
  out.decoded = read_frameset(path);
  if (out.decoded.set.frames.empty())
    throw Error(ErrorCategory::format, "frame file '" + path + "' holds no frames");
  out.traces = reduce_frameset(out.decoded.set, roi_for(out.decoded));
  out.canonical_config = serialize_config(out.decoded.config);
  return out;
}

tomo::VacuumCalibration load_calibration(const std::string &path) {
  if (path.empty())
    throw Error(ErrorCategory::missing_calibration,
                "no vacuum calibration given; run 'uqst calibrate' on signal-blocked frames first");
  if (!fs::exists(path))
    throw Error(ErrorCategory::missing_calibration,
                "vacuum calibration '" + path +
                    "' not found; run 'uqst calibrate' on signal-blocked frames first");
  return parse_calibration_json(read_text_file(path));
}

int lo_halfwidth(const DecodedFrameSet &d) {
  return d.config.scenario ? d.config.scenario->lo_mode_halfwidth : 0;
}

double wavelength_of(const DecodedFrameSet &d) {
  return d.config.scenario ? d.config.scenario->wavelength : 780e-9;
}

// Writes every file only after all of them have been produced in memory, so a
// failure leaves no partial bundle behind.
void commit(const std::string &dir, const std::vector<std::pair<std::string, std::string>> &files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorCategory::io, "cannot create output directory '" + dir + "': " + ec.message());
  for (const auto &[name, contents] : files)
    write_text_file((fs::path(dir) / name).string(), contents);
}

std::string grid_csv(const tomo::QGrid &g, const Provenance &p) {
  std::ostringstream os;
  write_qgrid_csv(os, g, p);
  return os.str();
}

tomo::Quadrature quadrature_from(char c) {
  if (c == 'x')
    return tomo::Quadrature::x;
  if (c == 'y')
    return tomo::Quadrature::y;
  throw Error(ErrorCategory::config, std::string("axes letters must be x or y, got '") + c + "'");
}

} // namespace

int exit_code(const Error &e) {
  switch (e.category()) {
  case ErrorCategory::config: return 2;
  case ErrorCategory::range: return 3;
  case ErrorCategory::format: return 4;
  case ErrorCategory::io: return 5;
  case ErrorCategory::numeric: return 6;
  case ErrorCategory::missing_calibration: return 7;
  }
  return 1;
}

void cmd_simulate(const SimulateOptions &opt, std::ostream &log) {
  RunConfig config = load_config(opt.config_path);
  if (opt.seed)
    config.run.seed = *opt.seed;
  const std::size_t shots =
      opt.shots.value_or(opt.kind == sim::FrameKind::signal ? config.run.shots
                                                            : config.run.vacuum_shots);
  if (shots < 1 || shots > max_shots)
    throw Error(ErrorCategory::config, "shot count must lie in [1, 10^7]");

  const sim::FrameSet set = sim::run_exposure_sequence(config.scenario, config.detector, shots,
                                                       opt.kind, config.run.seed);
  write_frameset(opt.out_path, set, config.run);
  log << "wrote " << shots << " " << sim::to_string(opt.kind) << " frames ("
      << config.detector.n_pixels_x << "x" << config.detector.n_rows << ") to " << opt.out_path
      << "\n";
}

void cmd_calibrate(const CalibrateOptions &opt, std::ostream &log) {
  const LoadedFrames frames = load_frames(opt.frames_path);
  if (frames.decoded.set.kind != sim::FrameKind::vacuum)
    log << "warning: calibrating from " << sim::to_string(frames.decoded.set.kind)
        << " frames; vacuum (signal-blocked) frames are expected\n";
  const tomo::VacuumCalibration cal = tomo::vacuum_average(frames.traces);
  const Provenance p = make_provenance(frames.canonical_config, frames.decoded.set.master_seed,
                                       {opt.frames_path});
  write_text_file(opt.out_path, calibration_json(cal, p));
  log << "vacuum calibration from " << cal.n_exposures << " exposures (mean n_t "
      << format_number(cal.mean_n_t) << ") written to " << opt.out_path << "\n";
}

void cmd_reconstruct(const ReconstructOptions &opt, std::ostream &log) {
  // refuse before touching anything else
  const tomo::VacuumCalibration cal = load_calibration(opt.calibration_path);
  const LoadedFrames frames = load_frames(opt.frames_path);
  const auto &decoded = frames.decoded;

  tomo::ModeRange range = opt.modes.value_or(
      decoded.config.run ? decoded.config.run->mode_range
                         : tomo::ModeRange{2 * lo_halfwidth(decoded) + 1,
                                           static_cast<int>(frames.traces.front().values.size() / 2) - 1});
  tomo::ExtractOptions extract;
  extract.lo_halfwidth = lo_halfwidth(decoded);
  extract.scaling = opt.scaling;
  const tomo::QuadratureSamples samples =
      tomo::extract_quadratures(frames.traces, cal, range, extract);
  const double pitch = decoded.set.detector.pixel_pitch;
  const double lambda = wavelength_of(decoded);
  const auto stats = tomo::mode_spectrum(samples, range, pitch, lambda);

  int q_mode = 0;
  if (opt.q_mode) {
    q_mode = *opt.q_mode;
    if (!range.contains(q_mode))
      throw Error(ErrorCategory::range, "Q-function mode " + std::to_string(q_mode) +
                                            " outside the reconstructed range");
  } else {
    q_mode = std::max_element(stats.begin(), stats.end(), [](const auto &a, const auto &b) {
               return a.mean_n < b.mean_n;
             })->p;
  }
  tomo::HistogramOptions hist;
  hist.bins = opt.bins;
  tomo::KdeOptions kde;
  kde.grid = opt.kde_grid;
  const tomo::QGrid qh = tomo::q_histogram(samples, q_mode, hist);
  const tomo::QGrid qk = tomo::q_kde(samples, q_mode, kde);

  const Provenance p = make_provenance(frames.canonical_config, decoded.set.master_seed,
                                       {opt.frames_path, opt.calibration_path});
  std::vector<std::pair<std::string, std::string>> files;
  {
    std::ostringstream os;
    write_mode_stats_csv(os, stats, p);
    files.emplace_back("mode_stats.csv", os.str());
  }
  {
    std::ostringstream os;
    write_spectrum_csv(os, stats, p);
    files.emplace_back("spectrum.csv", os.str());
  }
  const std::string tag = "p" + std::to_string(q_mode);
  files.emplace_back("q_hist_" + tag + ".csv", grid_csv(qh, p));
  files.emplace_back("q_hist_" + tag + ".pgm", render_pgm(qh));
  files.emplace_back("q_kde_" + tag + ".csv", grid_csv(qk, p));
  files.emplace_back("q_kde_" + tag + ".pgm", render_pgm(qk));
  if (opt.dump_quadratures) {
    std::ostringstream os;
    write_quadratures_csv(os, samples, p);
    files.emplace_back("quadratures.csv", os.str());
  }
  files.emplace_back("provenance.json", provenance_json(p));
  commit(opt.out_dir, files);

  const auto &sel = stats[static_cast<std::size_t>(q_mode - range.p_min)];
  log << "reconstructed modes " << range.p_min << ".." << range.p_max << " from "
      << samples.n_shots << " shots (" << samples.n_excluded << " excluded)\n"
      << "mode " << q_mode << ": theta = " << format_number(sel.theta_p * 1e3)
      << " mrad, <n> = " << format_number(sel.mean_n) << " +/- "
      << format_number(sel.mean_n_stderr) << ", delta_n = " << format_number(sel.delta_n)
      << "\n";
}

void cmd_qfunc(const QfuncOptions &opt, std::ostream &log) {
  if (opt.axes.size() != 2)
    throw Error(ErrorCategory::config, "--axes takes two letters (xx, xy, yx or yy)");
  const tomo::AxisSpec a{opt.mode, quadrature_from(opt.axes[0])};
  const tomo::AxisSpec b{opt.joint.value_or(opt.mode), quadrature_from(opt.axes[1])};
  if (a == b)
    throw Error(ErrorCategory::config, "axes '" + opt.axes + "' select the same quadrature twice" +
                                           (opt.joint ? "" : "; pass --joint for a two-mode grid"));

  const tomo::VacuumCalibration cal = load_calibration(opt.calibration_path);
  const LoadedFrames frames = load_frames(opt.frames_path);
  const int lo = std::min(a.p, b.p), hi = std::max(a.p, b.p);
  tomo::ExtractOptions extract;
  extract.lo_halfwidth = lo_halfwidth(frames.decoded);
  const tomo::QuadratureSamples samples =
      tomo::extract_quadratures(frames.traces, cal, {lo, hi}, extract);

  tomo::HistogramOptions hist;
  hist.bins = opt.bins;
  tomo::KdeOptions kde;
  kde.grid = opt.kde_grid;
  const tomo::QGrid g = tomo::joint_q(samples, a, b, opt.estimator, hist, kde);

  const Provenance p = make_provenance(frames.canonical_config, frames.decoded.set.master_seed,
                                       {opt.frames_path, opt.calibration_path});
  const std::string stem = std::string(opt.estimator == tomo::Estimator::histogram ? "q_hist_"
                                                                                   : "q_kde_") +
                           g.x_label + "_" + g.y_label;
  std::vector<std::pair<std::string, std::string>> files{
      {stem + ".csv", grid_csv(g, p)}, {stem + ".pgm", render_pgm(g)},
      {"provenance.json", provenance_json(p)}};
  commit(opt.out_dir, files);

  log << "Q(" << g.x_label << ", " << g.y_label << ") from " << samples.n_shots << " shots";
  if (a.p != b.p)
    log << ", pearson r = " << format_number(tomo::quadrature_correlation(samples, a, b));
  log << ", written to " << (fs::path(opt.out_dir) / (stem + ".csv")).string() << "\n";
}

double cmd_noise(const NoiseOptions &opt, std::ostream &log) {
  const LoadedFrames lit = load_frames(opt.lit_path);
  const LoadedFrames dark = load_frames(opt.dark_path);
  const double db = tomo::readout_noise_snr(lit.traces, dark.traces);
  log << "snr_db = " << format_number(db) << "\n";
  return db;
}

} // namespace uqst::io
