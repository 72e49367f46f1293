#include "uqst/error.hpp"
#include "uqst/execution.hpp"
#include "uqst/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace uqst {

std::string_view category_name(ErrorCategory c) noexcept {
  switch (c) {
  case ErrorCategory::config: return "config";
  case ErrorCategory::range: return "range";
  case ErrorCategory::format: return "format";
  case ErrorCategory::io: return "io";
  case ErrorCategory::numeric: return "numeric";
  case ErrorCategory::missing_calibration: return "missing_calibration";
  }
  return "unknown";
}

int set_thread_count(int n) {
#ifdef _OPENMP
  int previous = omp_get_max_threads();
  if (n > 0)
    omp_set_num_threads(n);
  return previous;
#else
  (void)n;
  return 1;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t kind_tag,
                          std::uint64_t shot_index, Stream stream) noexcept {
  std::uint64_t h = mix(master_seed);
  h = mix(h ^ (kind_tag + 0x51ed2701ULL));
  h = mix(h ^ shot_index);
  return mix(h ^ static_cast<std::uint64_t>(stream));
}

} // namespace uqst
