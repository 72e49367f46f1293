#pragma once

#include <cstdint>
#include <random>

namespace uqst {

/// Independent random streams within one shot.
enum class Stream : std::uint64_t { signal = 1, lo = 2, pixels = 3 };

/// Counter-based seed derivation: the seed of a per-shot stream is a pure
/// function of (master seed, frame kind, shot index, stream), so frames can
/// be generated in any order or on any thread.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t kind_tag,
                          std::uint64_t shot_index, Stream stream) noexcept;

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master_seed, std::uint64_t kind_tag,
                          std::uint64_t shot_index, Stream stream) {
  return Engine(derive_seed(master_seed, kind_tag, shot_index, stream));
}

} // namespace uqst
