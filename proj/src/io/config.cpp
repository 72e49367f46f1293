#include "uqst/io/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "uqst/error.hpp"

namespace uqst::io {

namespace {

[[noreturn]] void fail_at(std::size_t line, const std::string &msg) {
  throw Error(ErrorCategory::config, "line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos)
      return out;
    start = pos + 1;
  }
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
      ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t')
      ++i;
    if (i > start)
      out.push_back(s.substr(start, i - start));
  }
  return out;
}

double to_double(std::string_view s, std::size_t line, std::string_view key) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    fail_at(line, std::string(key) + ": '" + std::string(s) + "' is not a finite number");
  return v;
}

template <class Int> Int to_int(std::string_view s, std::size_t line, std::string_view key) {
  s = trim(s);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    fail_at(line, std::string(key) + ": '" + std::string(s) + "' is not an integer");
  return v;
}

// "name(a, b)" -> {"name", {"a", "b"}}
std::pair<std::string_view, std::vector<std::string_view>> call_form(std::string_view s) {
  const auto open = s.find('(');
  if (open == std::string_view::npos)
    return {trim(s), {}};
  const auto close = s.rfind(')');
  if (close == std::string_view::npos || close < open)
    return {{}, {}};
  return {trim(s.substr(0, open)), split(s.substr(open + 1, close - open - 1), ',')};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class Section { none, detector, scenario, run };

struct KeyLines {
  std::map<std::string, std::size_t, std::less<>> line;
};

// Attaches the line of the key an invariant message starts with.
[[noreturn]] void rethrow_with_line(const Error &e, const KeyLines &keys) {
  const std::string msg = e.what();
  static const std::vector<std::pair<std::string, std::string>> prefixes = {
      {"signal mode", "signal_modes"}, {"gaussian LO waist", "lo_envelope"},
      {"sinusoidal dither", "phase_dither"}, {"full_well + adc_offset", "full_well"},
      {"ROI", "roi"}, {"mode range", "mode_range"}};
  std::string key;
  for (const auto &[prefix, k] : prefixes)
    if (msg.rfind(prefix, 0) == 0)
      key = k;
  if (key.empty())
    key = msg.substr(0, msg.find_first_of(" :"));
  const auto it = keys.line.find(key);
  if (it != keys.line.end())
    fail_at(it->second, msg);
  throw Error(ErrorCategory::config, msg);
}

struct Parsed {
  ConfigDocument doc;
  KeyLines keys;
  bool has_detector = false;
};

Parsed parse(std::string_view text) {
  Parsed out;
  sim::OpticalScenario scenario;
  RunSettings run;
  bool has_scenario = false, has_run = false;
  Section section = Section::none;

  static const std::map<std::string, Section, std::less<>> section_names = {
      {"detector", Section::detector}, {"scenario", Section::scenario}, {"run", Section::run}};
  static const std::map<Section, std::vector<std::string>> required = {
      {Section::detector, {"n_pixels_x", "n_rows", "pixel_pitch", "quantum_efficiency"}},
      {Section::scenario, {"wavelength", "lo_photons_per_shot", "tilt_angle"}},
      {Section::run, {"shots", "seed", "mode_range"}}};
  std::map<Section, std::size_t> section_line;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        fail_at(line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      const auto it = section_names.find(name);
      if (it == section_names.end())
        fail_at(line_no, "unknown section [" + std::string(name) + "]");
      section = it->second;
      if (section_line.count(section))
        fail_at(line_no, "section [" + std::string(name) + "] appears twice");
      section_line[section] = line_no;
      if (section == Section::detector)
        out.has_detector = true;
      if (section == Section::scenario)
        has_scenario = true;
      if (section == Section::run)
        has_run = true;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail_at(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section == Section::none)
      fail_at(line_no, "key '" + key + "' appears before any section");
    if (!out.keys.line.emplace(key, line_no).second)
      fail_at(line_no, "duplicate key '" + key + "'");

    auto &d = out.doc.detector;
    auto dbl = [&] { return to_double(value, line_no, key); };
    auto size = [&] { return to_int<std::size_t>(value, line_no, key); };

    bool known = true;
    switch (section) {
    case Section::detector:
      if (key == "n_pixels_x") d.n_pixels_x = size();
      else if (key == "n_rows") d.n_rows = size();
      else if (key == "pixel_pitch") d.pixel_pitch = dbl();
      else if (key == "quantum_efficiency") d.quantum_efficiency = dbl();
      else if (key == "read_noise_rms") d.read_noise_rms = dbl();
      else if (key == "dark_rate") d.dark_rate = dbl();
      else if (key == "full_well") d.full_well = dbl();
      else if (key == "adc_offset") d.adc_offset = dbl();
      else known = false;
      break;
    case Section::scenario:
      if (key == "wavelength") scenario.wavelength = dbl();
      else if (key == "lo_photons_per_shot") scenario.lo_photons_per_shot = dbl();
      else if (key == "lo_mode_halfwidth") scenario.lo_mode_halfwidth = to_int<int>(value, line_no, key);
      else if (key == "lo_jitter_rms") scenario.lo_jitter_rms = dbl();
      else if (key == "tilt_angle") scenario.tilt_angle = dbl();
      else if (key == "signal_jitter_rms") scenario.signal_jitter_rms = dbl();
      else if (key == "lo_envelope") {
        const auto [name, args] = call_form(value);
        if (name == "uniform" && args.empty())
          scenario.lo_envelope = sim::UniformEnvelope{};
        else if (name == "gaussian" && args.size() == 1)
          scenario.lo_envelope = sim::GaussianEnvelope{to_double(args[0], line_no, key)};
        else
          fail_at(line_no, "lo_envelope must be 'uniform' or 'gaussian(<waist>)'");
      } else if (key == "phase_dither") {
        const auto [name, args] = call_form(value);
        if (name == "none" && args.empty())
          scenario.phase_dither = sim::NoDither{};
        else if (name == "uniform_random" && args.empty())
          scenario.phase_dither = sim::UniformRandomDither{};
        else if (name == "sinusoidal" && args.size() == 2)
          scenario.phase_dither = sim::SinusoidalDither{to_double(args[0], line_no, key),
                                                        to_double(args[1], line_no, key)};
        else
          fail_at(line_no, "phase_dither must be 'none', 'uniform_random' or "
                           "'sinusoidal(<depth>, <period>)'");
      } else if (key == "signal_modes") {
        scenario.signal_modes.clear();
        if (!value.empty() && value != "none") {
          for (const auto entry : split(value, ';')) {
            const auto w = words(entry);
            if (w.size() != 3)
              fail_at(line_no, "signal_modes entries are '<p> <re> <im>', got '" +
                                   std::string(entry) + "'");
            scenario.signal_modes.push_back(
                {to_int<int>(w[0], line_no, key),
                 {to_double(w[1], line_no, key), to_double(w[2], line_no, key)}});
          }
        }
      } else known = false;
      break;
    case Section::run:
      if (key == "shots") run.shots = size();
      else if (key == "vacuum_shots") run.vacuum_shots = size();
      else if (key == "seed") run.seed = to_int<std::uint64_t>(value, line_no, key);
      else if (key == "output_dir") run.output_dir = std::string(value);
      else if (key == "roi") {
        const auto w = words(value);
        if (w.size() != 4)
          fail_at(line_no, "roi is '<x0> <y0> <width> <height>'");
        run.roi = tomo::Roi{to_int<std::size_t>(w[0], line_no, key),
                            to_int<std::size_t>(w[1], line_no, key),
                            to_int<std::size_t>(w[2], line_no, key),
                            to_int<std::size_t>(w[3], line_no, key)};
      } else if (key == "mode_range") {
        const auto w = words(value);
        if (w.size() != 2)
          fail_at(line_no, "mode_range is '<p_min> <p_max>'");
        run.mode_range = {to_int<int>(w[0], line_no, key), to_int<int>(w[1], line_no, key)};
      } else known = false;
      break;
    case Section::none:
      break;
    }
    if (!known)
      fail_at(line_no, "unknown key '" + key + "'");
  }

  for (const auto &[sec, line] : section_line) {
    for (const auto &key : required.at(sec)) {
      if (!out.keys.line.count(key)) {
        // tilt is only meaningful with a signal
        if (key == "tilt_angle" && scenario.signal_modes.empty())
          continue;
        fail_at(line, "missing required key '" + key + "'");
      }
    }
  }
  if (!out.has_detector)
    fail_at(line_no, "missing required section [detector]");
  if (has_scenario)
    out.doc.scenario = scenario;
  if (has_run)
    out.doc.run = run;
  return out;
}

} // namespace

tomo::Roi RunConfig::roi() const {
  return run.roi.value_or(tomo::Roi{0, 0, detector.n_pixels_x, detector.n_rows});
}

void validate(const RunConfig &c) {
  sim::validate(c.detector);
  sim::validate(c.scenario, c.detector);
  if (c.run.shots < 1 || c.run.shots > max_shots)
    throw Error(ErrorCategory::config, "shots must lie in [1, 10^7]");
  if (c.run.vacuum_shots < 1 || c.run.vacuum_shots > max_shots)
    throw Error(ErrorCategory::config, "vacuum_shots must lie in [1, 10^7]");
  const tomo::Roi roi = c.roi();
  if (roi.width < 2 || roi.width % 2 != 0 || roi.height < 1 ||
      roi.x0 + roi.width > c.detector.n_pixels_x || roi.y0 + roi.height > c.detector.n_rows)
    throw Error(ErrorCategory::config,
                "ROI must be inside the detector with an even width >= 2");
  const auto &r = c.run.mode_range;
  if (r.p_min <= 2 * c.scenario.lo_mode_halfwidth || r.p_max < r.p_min ||
      2 * static_cast<std::size_t>(r.p_max) >= roi.width)
    throw Error(ErrorCategory::config, "mode range must satisfy 2M < p_min <= p_max < N/2");
}

ConfigDocument parse_config_document(std::string_view text) {
  Parsed parsed = parse(text);
  try {
    sim::validate(parsed.doc.detector);
    if (parsed.doc.scenario)
      sim::validate(*parsed.doc.scenario, parsed.doc.detector);
  } catch (const Error &e) {
    rethrow_with_line(e, parsed.keys);
  }
  return parsed.doc;
}

RunConfig parse_config(std::string_view text) {
  Parsed parsed = parse(text);
  if (!parsed.doc.scenario)
    throw Error(ErrorCategory::config, "missing required section [scenario]");
  if (!parsed.doc.run)
    throw Error(ErrorCategory::config, "missing required section [run]");
  RunConfig config{parsed.doc.detector, *parsed.doc.scenario, *parsed.doc.run};
  try {
    validate(config);
  } catch (const Error &e) {
    rethrow_with_line(e, parsed.keys);
  }
  return config;
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCategory::io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ConfigDocument &doc) {
  std::ostringstream os;
  const auto &d = doc.detector;
  os << "[detector]\n"
     << "n_pixels_x = " << d.n_pixels_x << "\n"
     << "n_rows = " << d.n_rows << "\n"
     << "pixel_pitch = " << fmt(d.pixel_pitch) << "\n"
     << "quantum_efficiency = " << fmt(d.quantum_efficiency) << "\n"
     << "read_noise_rms = " << fmt(d.read_noise_rms) << "\n"
     << "dark_rate = " << fmt(d.dark_rate) << "\n"
     << "full_well = " << fmt(d.full_well) << "\n"
     << "adc_offset = " << fmt(d.adc_offset) << "\n";

  if (doc.scenario) {
    const auto &s = *doc.scenario;
    os << "\n[scenario]\n"
       << "wavelength = " << fmt(s.wavelength) << "\n"
       << "lo_photons_per_shot = " << fmt(s.lo_photons_per_shot) << "\n"
       << "lo_mode_halfwidth = " << s.lo_mode_halfwidth << "\n";
    if (const auto *g = std::get_if<sim::GaussianEnvelope>(&s.lo_envelope))
      os << "lo_envelope = gaussian(" << fmt(g->waist) << ")\n";
    else
      os << "lo_envelope = uniform\n";
    os << "lo_jitter_rms = " << fmt(s.lo_jitter_rms) << "\n"
       << "tilt_angle = " << fmt(s.tilt_angle) << "\n"
       << "signal_modes = ";
    if (s.signal_modes.empty())
      os << "none";
    for (std::size_t i = 0; i < s.signal_modes.size(); ++i) {
      const auto &m = s.signal_modes[i];
      os << (i ? "; " : "") << m.index << " " << fmt(m.amplitude.real()) << " "
         << fmt(m.amplitude.imag());
    }
    os << "\nphase_dither = ";
    if (std::holds_alternative<sim::UniformRandomDither>(s.phase_dither))
      os << "uniform_random";
    else if (const auto *sd = std::get_if<sim::SinusoidalDither>(&s.phase_dither))
      os << "sinusoidal(" << fmt(sd->depth) << ", " << fmt(sd->period) << ")";
    else
      os << "none";
    os << "\nsignal_jitter_rms = " << fmt(s.signal_jitter_rms) << "\n";
  }

  if (doc.run) {
    const auto &r = *doc.run;
    os << "\n[run]\n"
       << "shots = " << r.shots << "\n"
       << "vacuum_shots = " << r.vacuum_shots << "\n";
    if (r.roi)
      os << "roi = " << r.roi->x0 << " " << r.roi->y0 << " " << r.roi->width << " "
         << r.roi->height << "\n";
    os << "mode_range = " << r.mode_range.p_min << " " << r.mode_range.p_max << "\n"
       << "seed = " << r.seed << "\n"
       << "output_dir = " << r.output_dir << "\n";
  }
  return os.str();
}

RunConfig reference_config() {
  RunConfig c;
  c.detector.n_pixels_x = 600;
  c.detector.n_rows = 10;
  c.detector.pixel_pitch = 20e-6;
  c.detector.quantum_efficiency = 0.98;
  c.detector.dark_rate = 0.0;
  c.detector.full_well = 60000.0;
  c.detector.adc_offset = 500.0;

  c.scenario.wavelength = 780e-9;
  c.scenario.lo_photons_per_shot = 3.0e7;
  c.scenario.lo_mode_halfwidth = 0;
  c.scenario.tilt_angle = 12.8e-3;
  c.scenario.signal_modes = {{197, {std::sqrt(7.2), 0.0}}};

  const double lit_pixel = c.detector.quantum_efficiency * c.scenario.lo_photons_per_shot /
                           static_cast<double>(c.detector.n_pixels_x * c.detector.n_rows);
  c.detector.read_noise_rms = sim::read_noise_for_snr_db(lit_pixel, 15.0);

  c.run.shots = 8000;
  c.run.vacuum_shots = 500;
  c.run.roi = tomo::Roi{0, 0, 600, 10};
  c.run.mode_range = {180, 215};
  c.run.seed = 20130617;
  c.run.output_dir = "out";
  return c;
}

} // namespace uqst::io
