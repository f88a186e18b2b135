#pragma once

#include <vector>

#include "fockdelay/envelope.hpp"

namespace fockdelay::detail {

// In-place DFT. Forward uses exp(-i w t) (analysis), inverse uses
// exp(+i w t) and divides by N (synthesis). Size must be a power of two.
void fft_forward(std::vector<Complex>& data);
void fft_inverse(std::vector<Complex>& data);

// Angular frequency of bin k for a grid of n samples spaced dt apart,
// wrapped to [-pi/dt, pi/dt).
double bin_frequency(std::size_t k, std::size_t n, double dt);

}  // namespace fockdelay::detail
