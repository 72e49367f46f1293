#include "uqst/io/export.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "uqst/error.hpp"
#include "uqst/io/frame_file.hpp"

namespace uqst::io {

using nlohmann::json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Provenance make_provenance(const std::string &canonical_config, std::uint64_t seed,
                           std::vector<std::string> inputs) {
  Provenance p;
  char hex[9];
  const auto *bytes = reinterpret_cast<const std::uint8_t *>(canonical_config.data());
  std::snprintf(hex, sizeof hex, "%08x", crc32({bytes, canonical_config.size()}));
  p.config_hash = hex;
  p.seed = seed;
  p.inputs = std::move(inputs);

  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  p.created = stamp;
  return p;
}

std::string provenance_comment(const Provenance &p) {
  return "# " + p.tool + " config_crc32=" + p.config_hash + " seed=" + std::to_string(p.seed) +
         "\n";
}

std::string provenance_json(const Provenance &p) {
  json j{{"tool", p.tool},
         {"config_crc32", p.config_hash},
         {"seed", p.seed},
         {"created", p.created},
         {"inputs", p.inputs}};
  return j.dump(2) + "\n";
}

void write_mode_stats_csv(std::ostream &os, std::span<const tomo::ModeStats> stats,
                          const Provenance &p) {
  os << provenance_comment(p);
  os << "p,theta_p,mean_n,delta_n,var_x,var_y,mean_x,mean_y,mean_n_stderr,n_shots\n";
  for (const auto &s : stats)
    os << s.p << ',' << format_number(s.theta_p) << ',' << format_number(s.mean_n) << ','
       << format_number(s.delta_n) << ',' << format_number(s.var_x) << ','
       << format_number(s.var_y) << ',' << format_number(s.mean_x) << ','
       << format_number(s.mean_y) << ',' << format_number(s.mean_n_stderr) << ',' << s.n_shots
       << '\n';
}

void write_spectrum_csv(std::ostream &os, std::span<const tomo::ModeStats> stats,
                        const Provenance &p) {
  os << provenance_comment(p);
  os << "# mean photon number vs plane-wave mode angle; error bar = delta_n\n";
  os << "p,theta_mrad,mean_n,delta_n,mean_n_stderr\n";
  for (const auto &s : stats)
    os << s.p << ',' << format_number(s.theta_p * 1e3) << ',' << format_number(s.mean_n) << ','
       << format_number(s.delta_n) << ',' << format_number(s.mean_n_stderr) << '\n';
}

void write_quadratures_csv(std::ostream &os, const tomo::QuadratureSamples &samples,
                           const Provenance &p) {
  os << provenance_comment(p);
  os << "shot,p,x,y\n";
  const std::size_t width = static_cast<std::size_t>(samples.modes.size());
  for (std::size_t s = 0; s < samples.n_shots; ++s)
    for (std::size_t c = 0; c < width; ++c)
      os << samples.shot_indices[s] << ',' << samples.modes.p_min + static_cast<int>(c) << ','
         << format_number(samples.x[s * width + c]) << ','
         << format_number(samples.y[s * width + c]) << '\n';
}

void write_qgrid_csv(std::ostream &os, const tomo::QGrid &grid, const Provenance &p) {
  os << provenance_comment(p);
  os << "# kind=" << (grid.kind == tomo::GridKind::histogram ? "histogram" : "kde")
     << " x_label=" << grid.x_label << " y_label=" << grid.y_label << " nx=" << grid.nx()
     << " ny=" << grid.ny() << '\n';
  os << "# " << (grid.kind == tomo::GridKind::histogram ? "bin edges" : "grid coordinates")
     << " along x, then y, then density rows (one per y)\n";
  auto line = [&os](const std::vector<double> &v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      os << (i ? "," : "") << format_number(v[i]);
    os << '\n';
  };
  line(grid.x_edges);
  line(grid.y_edges);
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    for (std::size_t ix = 0; ix < grid.nx(); ++ix)
      os << (ix ? "," : "") << format_number(grid.at(ix, iy));
    os << '\n';
  }
}

std::string render_pgm(const tomo::QGrid &grid) {
  const std::size_t nx = grid.nx(), ny = grid.ny();
  const auto [lo_it, hi_it] = std::minmax_element(grid.density.begin(), grid.density.end());
  const double lo = *lo_it, span = *hi_it - *lo_it;
  std::string out = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  out.reserve(out.size() + nx * ny);
  for (std::size_t row = 0; row < ny; ++row) {
    const std::size_t iy = ny - 1 - row;
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double t = span > 0.0 ? (grid.at(ix, iy) - lo) / span : 0.0;
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
    }
  }
  return out;
}

std::string calibration_json(const tomo::VacuumCalibration &cal, const Provenance &p) {
  json k = json::array();
  for (const auto &c : cal.mean_k)
    k.push_back({c.real(), c.imag()});
  json j{{"format", "uqst-vacuum-calibration"},
         {"version", 1},
         {"n_exposures", cal.n_exposures},
         {"mean_n_t", cal.mean_n_t},
         {"trace_length", cal.mean_k.size()},
         {"mean_k", k},
         {"provenance", json::parse(provenance_json(p))}};
  return j.dump(1) + "\n";
}

tomo::VacuumCalibration parse_calibration_json(const std::string &text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "uqst-vacuum-calibration" || j.at("version") != 1)
      throw Error(ErrorCategory::format, "not a version-1 uqst vacuum calibration");
    tomo::VacuumCalibration cal;
    cal.n_exposures = j.at("n_exposures").get<std::size_t>();
    cal.mean_n_t = j.at("mean_n_t").get<double>();
    for (const auto &pair : j.at("mean_k"))
      cal.mean_k.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    if (cal.mean_k.size() != j.at("trace_length").get<std::size_t>() || cal.n_exposures < 1)
      throw Error(ErrorCategory::format, "calibration file is inconsistent");
    for (const auto &c : cal.mean_k)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw Error(ErrorCategory::format, "calibration contains non-finite values");
    return cal;
  } catch (const json::exception &e) {
    throw Error(ErrorCategory::format, std::string("malformed calibration file: ") + e.what());
  }
}

void write_text_file(const std::string &path, const std::string &contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorCategory::io, "cannot write '" + path + "'");
  out << contents;
  if (!out)
    throw Error(ErrorCategory::io, "write to '" + path + "' failed");
}

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCategory::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace uqst::io
