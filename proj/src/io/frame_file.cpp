#include "uqst/io/frame_file.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "uqst/error.hpp"

namespace uqst::io {

namespace {

using FR = FormatError::Reason;

class Writer {
public:
  explicit Writer(std::vector<std::uint8_t> &out) : out_(out) {}

  template <class T> void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
      out_.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
  }
  void bytes(const void *p, std::size_t n) {
    const auto *b = static_cast<const std::uint8_t *>(p);
    out_.insert(out_.end(), b, b + n);
  }

private:
  std::vector<std::uint8_t> &out_;
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  template <class T> T le() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n)
      throw FormatError(FR::truncated, "frame file truncated at byte " + std::to_string(pos_));
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

} // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths
  std::size_t done = 0;
  while (done < bytes.size()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size() - done, 1u << 30);
    crc = ::crc32(crc, bytes.data() + done, static_cast<uInt>(chunk));
    done += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> encode_frameset(const sim::FrameSet &set,
                                          const std::optional<RunSettings> &run) {
  sim::validate(set);
  const std::size_t width = set.frames.empty() ? set.detector.n_pixels_x : set.frames[0].width;
  const std::size_t height = set.frames.empty() ? set.detector.n_rows : set.frames[0].height;

  ConfigDocument doc{set.detector, std::nullopt, run};
  if (set.kind != sim::FrameKind::dark)
    doc.scenario = set.scenario;
  const std::string config = serialize_config(doc);

  std::vector<std::uint8_t> out;
  out.reserve(64 + config.size() + set.frames.size() * (4 + 2 * width * height));
  Writer w(out);
  w.bytes(frame_magic, 4);
  w.le<std::uint16_t>(frame_format_version);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(set.frames.size()));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(width));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(height));
  w.le<std::uint8_t>(static_cast<std::uint8_t>(set.kind));
  w.le<std::uint64_t>(set.master_seed);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(config.size()));
  w.bytes(config.data(), config.size());
  for (const auto &f : set.frames) {
    w.le<std::uint32_t>(f.shot_index);
    for (std::uint16_t c : f.counts)
      w.le<std::uint16_t>(c);
  }
  w.le<std::uint32_t>(crc32(out));
  return out;
}

DecodedFrameSet decode_frameset(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.take(4);
  if (std::memcmp(magic.data(), frame_magic, 4) != 0)
    throw FormatError(FR::bad_magic, "not a UQST frame file (bad magic)");
  const auto version = r.le<std::uint16_t>();
  if (version != frame_format_version)
    throw FormatError(FR::version_mismatch, "unsupported frame format version " +
                                                std::to_string(version) + " (expected " +
                                                std::to_string(frame_format_version) + ")");
  const auto n_frames = r.le<std::uint32_t>();
  const auto width = r.le<std::uint32_t>();
  const auto height = r.le<std::uint32_t>();
  const auto kind = r.le<std::uint8_t>();
  const auto seed = r.le<std::uint64_t>();
  const auto config_len = r.le<std::uint32_t>();

  const std::size_t frame_bytes = 4 + 2 * static_cast<std::size_t>(width) * height;
  const std::size_t expected = r.pos() + config_len + n_frames * frame_bytes + 4;
  if (bytes.size() < expected)
    throw FormatError(FR::truncated, "frame file truncated: " + std::to_string(bytes.size()) +
                                         " bytes, header implies " + std::to_string(expected));
  if (bytes.size() > expected)
    throw FormatError(FR::inconsistent, "frame file has " +
                                            std::to_string(bytes.size() - expected) +
                                            " trailing bytes");
  const std::uint32_t stored_crc = static_cast<std::uint32_t>(bytes[expected - 4]) |
                                   static_cast<std::uint32_t>(bytes[expected - 3]) << 8 |
                                   static_cast<std::uint32_t>(bytes[expected - 2]) << 16 |
                                   static_cast<std::uint32_t>(bytes[expected - 1]) << 24;
  if (crc32(bytes.first(expected - 4)) != stored_crc)
    throw FormatError(FR::crc_mismatch, "frame file CRC mismatch: contents are corrupted");
  if (kind > static_cast<std::uint8_t>(sim::FrameKind::dark))
    throw FormatError(FR::inconsistent, "unknown frame kind " + std::to_string(kind));

  const auto config_bytes = r.take(config_len);
  DecodedFrameSet out;
  try {
    out.config = parse_config_document(
        std::string_view(reinterpret_cast<const char *>(config_bytes.data()), config_bytes.size()));
  } catch (const Error &e) {
    throw FormatError(FR::inconsistent, std::string("embedded config is invalid: ") + e.what());
  }

  auto &set = out.set;
  set.detector = out.config.detector;
  set.scenario = out.config.scenario;
  set.master_seed = seed;
  set.kind = static_cast<sim::FrameKind>(kind);
  set.frames.resize(n_frames);
  const double max_count = set.detector.max_count();
  for (auto &f : set.frames) {
    f.width = width;
    f.height = height;
    f.kind = set.kind;
    f.shot_index = r.le<std::uint32_t>();
    f.counts.resize(static_cast<std::size_t>(width) * height);
    for (auto &c : f.counts) {
      c = r.le<std::uint16_t>();
      if (c >= max_count)
        ++f.saturated_pixels;
    }
  }
  try {
    sim::validate(set);
  } catch (const Error &e) {
    throw FormatError(FR::inconsistent, e.what());
  }
  return out;
}

void write_frameset(const std::string &path, const sim::FrameSet &set,
                    const std::optional<RunSettings> &run) {
  const auto bytes = encode_frameset(set, run);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorCategory::io, "cannot write frame file '" + path + "'");
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw Error(ErrorCategory::io, "write to '" + path + "' failed");
}

DecodedFrameSet read_frameset(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCategory::io, "cannot open frame file '" + path + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_frameset(bytes);
}

} // namespace uqst::io
