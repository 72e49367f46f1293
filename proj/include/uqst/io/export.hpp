#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "uqst/tomo/calibration.hpp"
#include "uqst/tomo/qgrid.hpp"
#include "uqst/tomo/quadrature.hpp"
#include "uqst/tomo/statistics.hpp"

namespace uqst::io {

inline constexpr const char *tool_version = "uqst 0.1.0";

/// Where an artifact came from. The CSV comment form omits the timestamp so
/// outputs stay byte-identical across reruns.
struct Provenance {
  std::string config_hash; ///< CRC-32 of the canonical config text, hex
  std::uint64_t seed = 0;
  std::string tool = tool_version;
  std::string created;     ///< UTC, ISO 8601
  std::vector<std::string> inputs;
};

Provenance make_provenance(const std::string &canonical_config, std::uint64_t seed,
                           std::vector<std::string> inputs = {});
std::string provenance_comment(const Provenance &p);
std::string provenance_json(const Provenance &p);

/// CSV numbers use 17 significant digits (exact round trip).
std::string format_number(double v);

void write_mode_stats_csv(std::ostream &os, std::span<const tomo::ModeStats> stats,
                          const Provenance &p);
void write_spectrum_csv(std::ostream &os, std::span<const tomo::ModeStats> stats,
                        const Provenance &p);
void write_quadratures_csv(std::ostream &os, const tomo::QuadratureSamples &samples,
                           const Provenance &p);

/// Header comments, then an x-axis line, a y-axis line, and one row of
/// density per y coordinate.
void write_qgrid_csv(std::ostream &os, const tomo::QGrid &grid, const Provenance &p);

/// 8-bit binary PGM, min-max normalised with gamma 1; the top image row is the
/// largest y. Pure function of the grid.
std::string render_pgm(const tomo::QGrid &grid);

std::string calibration_json(const tomo::VacuumCalibration &cal, const Provenance &p);
tomo::VacuumCalibration parse_calibration_json(const std::string &text);

void write_text_file(const std::string &path, const std::string &contents);
std::string read_text_file(const std::string &path);

} // namespace uqst::io
