#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "uqst/execution.hpp"
#include "uqst/tomo/trace.hpp"

namespace uqst::tomo {

using Complex = std::complex<double>;

/// K_p = (1/sqrt N) sum_j exp(+i 2 pi p j / N) n_j for p = 0..N-1.
/// Real input, so k[N-p] == conj(k[p]) exactly; p < N/2 are the unique modes.
struct ModeAmplitudes {
  std::vector<Complex> k;
  std::uint32_t shot_index = 0;
};

ModeAmplitudes dft_modes(const ReducedTrace &trace);
ModeAmplitudes dft_modes(std::span<const double> values, std::uint32_t shot_index = 0);

std::vector<ModeAmplitudes> dft_modes(std::span<const ReducedTrace> traces,
                                      Execution exec = Execution::parallel);

} // namespace uqst::tomo
