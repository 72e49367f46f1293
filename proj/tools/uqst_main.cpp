// uqst: simulate -> calibrate -> reconstruct pipeline for unbalanced array
// heterodyne tomography.

#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "uqst/error.hpp"
#include "uqst/execution.hpp"
#include "uqst/io/commands.hpp"
#include "uqst/io/config.hpp"

int main(int argc, char **argv) {
  using namespace uqst;

  CLI::App app{"Multimode quantum state tomography by unbalanced array detection"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  io::SimulateOptions sim;
  std::string kind = "signal";
  auto *simulate = app.add_subcommand("simulate", "synthesize a frame set from a config");
  simulate->add_option("--config", sim.config_path, "run configuration")->required()->check(CLI::ExistingFile);
  simulate->add_option("--kind", kind, "signal | vacuum | dark")
      ->check(CLI::IsMember({"signal", "vacuum", "dark"}));
  simulate->add_option("--out", sim.out_path, "output .uqst file")->required();
  simulate->add_option("--shots", sim.shots, "override the configured shot count");
  simulate->add_option("--seed", sim.seed, "override the configured master seed");

  io::CalibrateOptions cal;
  auto *calibrate = app.add_subcommand("calibrate", "average signal-blocked frames into a vacuum calibration");
  calibrate->add_option("--frames", cal.frames_path, "vacuum frame set")->required();
  calibrate->add_option("--out", cal.out_path, "output calibration (.json)")->required();

  io::ReconstructOptions rec;
  std::vector<int> rec_modes;
  std::string scaling = "per-shot";
  auto *reconstruct = app.add_subcommand("reconstruct", "mode statistics, spectrum and Q-function of a signal frame set");
  reconstruct->add_option("--frames", rec.frames_path, "signal frame set")->required();
  reconstruct->add_option("--calibration", rec.calibration_path, "vacuum calibration from 'calibrate'");
  reconstruct->add_option("--out", rec.out_dir, "output directory")->required();
  reconstruct->add_option("--modes", rec_modes, "p_min p_max (default: from the embedded config)")->expected(2);
  reconstruct->add_option("--qmode", rec.q_mode, "mode for the Q-function export (default: brightest)");
  reconstruct->add_flag("--dump-quadratures", rec.dump_quadratures, "also write quadratures.csv");
  reconstruct->add_option("--bins", rec.bins, "histogram bins per axis")->check(CLI::PositiveNumber);
  reconstruct->add_option("--kde-grid", rec.kde_grid, "KDE grid points per axis")->check(CLI::Range(2, 4096));
  reconstruct->add_option("--nt", scaling, "per-shot | ensemble")->check(CLI::IsMember({"per-shot", "ensemble"}));

  io::QfuncOptions qf;
  std::string estimator = "hist";
  auto *qfunc = app.add_subcommand("qfunc", "single- or two-mode Q-function grid");
  qfunc->add_option("--frames", qf.frames_path, "signal frame set")->required();
  qfunc->add_option("--calibration", qf.calibration_path, "vacuum calibration");
  qfunc->add_option("--mode", qf.mode, "mode p")->required();
  qfunc->add_option("--joint", qf.joint, "second mode p' for a joint Q-function");
  qfunc->add_option("--axes", qf.axes, "quadratures: xx | xy | yx | yy");
  qfunc->add_option("--estimator", estimator, "hist | kde")->check(CLI::IsMember({"hist", "kde"}));
  qfunc->add_option("--bins", qf.bins, "histogram bins per axis")->check(CLI::PositiveNumber);
  qfunc->add_option("--kde-grid", qf.kde_grid, "KDE grid points per axis")->check(CLI::Range(2, 4096));
  qfunc->add_option("--out", qf.out_dir, "output directory")->required();

  io::NoiseOptions noise;
  auto *noise_cmd = app.add_subcommand("noise", "lit/dark shot-to-shot variance ratio in dB");
  noise_cmd->add_option("--lit", noise.lit_path, "illuminated (LO only) frame set")->required();
  noise_cmd->add_option("--dark", noise.dark_path, "dark frame set")->required();

  auto *tmpl = app.add_subcommand("config-template", "print the reference single-mode configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    // --help exits 0; any other argument error counts as a config error
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (threads > 0)
    set_thread_count(threads);

  try {
    if (*simulate) {
      sim.kind = sim::frame_kind_from_string(kind.c_str());
      io::cmd_simulate(sim, std::cout);
    } else if (*calibrate) {
      io::cmd_calibrate(cal, std::cout);
    } else if (*reconstruct) {
      if (!rec_modes.empty())
        rec.modes = tomo::ModeRange{rec_modes[0], rec_modes[1]};
      rec.scaling = scaling == "ensemble" ? tomo::NtScaling::ensemble_mean : tomo::NtScaling::per_shot;
      io::cmd_reconstruct(rec, std::cout);
    } else if (*qfunc) {
      qf.estimator = estimator == "kde" ? tomo::Estimator::kde : tomo::Estimator::histogram;
      io::cmd_qfunc(qf, std::cout);
    } else if (*noise_cmd) {
      io::cmd_noise(noise, std::cout);
    } else if (*tmpl) {
      std::cout << io::serialize_config(io::reference_config());
    }
  } catch (const Error &e) {
    std::cerr << "error[" << category_name(e.category()) << "]: " << e.what() << "\n";
    return io::exit_code(e);
  } catch (const std::exception &e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
