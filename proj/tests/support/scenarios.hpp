#pragma once

#include <cmath>
#include <vector>

#include "fockdelay/config.hpp"
#include "fockdelay/params.hpp"

namespace scenarios {

// The demo medium and cavity with a single-photon Gaussian of duration T.
inline fockdelay::Scenario demo(double T, int n_max = 2) {
  fockdelay::Scenario s = fockdelay::preset("demo-feasible").scenario;
  std::vector<fockdelay::Complex> a(static_cast<std::size_t>(n_max) + 1);
  a[1] = 1.0;
  s.pulse = fockdelay::ProbePulse(fockdelay::EnvelopeShape::gaussian, T, a);
  return s;
}

// Demo cavity, arbitrary optical depth and length.
inline fockdelay::Scenario with_medium(fockdelay::Scenario s, double od, double length = 0.01) {
  s.medium = fockdelay::from_macroscopic(od, s.medium.gamma, length, 1e6);
  return s;
}

// Balanced one- and two-photon probe.
inline std::vector<fockdelay::Complex> balanced_pair() {
  const double h = 1.0 / std::sqrt(2.0);
  return {0.0, h, h};
}

}  // namespace scenarios
