#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uqst/io/config.hpp"
#include "uqst/sim/frame.hpp"

namespace uqst::io {

inline constexpr char frame_magic[4] = {'U', 'Q', 'S', 'T'};
inline constexpr std::uint16_t frame_format_version = 1;

/// Binary layout, little-endian:
///   "UQST" | u16 version | u32 n_frames | u32 width | u32 height | u8 kind |
///   u64 master_seed | u32 config_len | config_len bytes UTF-8 config |
///   n_frames x (u32 shot_index | width*height u16 counts, row-major) |
///   u32 CRC-32 of every preceding byte
///
/// The config block is serialize_config() of the set's detector, scenario
/// (omitted for dark sets) and, when given, the run settings.
std::vector<std::uint8_t> encode_frameset(const sim::FrameSet &set,
                                          const std::optional<RunSettings> &run = std::nullopt);

struct DecodedFrameSet {
  sim::FrameSet set;
  ConfigDocument config;
};

/// Throws FormatError with a distinct reason for bad magic, version mismatch,
/// truncation and CRC failure.
DecodedFrameSet decode_frameset(std::span<const std::uint8_t> bytes);

void write_frameset(const std::string &path, const sim::FrameSet &set,
                    const std::optional<RunSettings> &run = std::nullopt);
DecodedFrameSet read_frameset(const std::string &path);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

} // namespace uqst::io
