#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace fockdelay {

using Complex = std::complex<double>;

// Complex pulse envelope on a uniform time grid. Samples follow the
// single-mode convention: integral of |f|^2 dt equals one for a normalized
// pulse. The sample count is always a power of two so the envelope can be
// handed to the FFT without reshaping.
class SampledEnvelope {
 public:
  SampledEnvelope() = default;
  SampledEnvelope(double t0, double dt, std::vector<Complex> samples);

  // Appends zeros up to the next power of two (or `min_size`, whichever is
  // larger, also rounded up to a power of two).
  static SampledEnvelope zero_padded(double t0, double dt, std::vector<Complex> samples,
                                     std::size_t min_size = 0);

  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double time(std::size_t i) const noexcept { return t0_ + dt_ * static_cast<double>(i); }
  double t_end() const noexcept { return time(samples_.size()); }

  std::span<const Complex> samples() const noexcept { return samples_; }
  std::span<Complex> samples() noexcept { return samples_; }
  const Complex& operator[](std::size_t i) const { return samples_[i]; }
  Complex& operator[](std::size_t i) { return samples_[i]; }

  // Integral of |f|^2 dt (rectangle rule, exact for the trapezoid rule when
  // the end samples vanish).
  double energy() const noexcept;
  // Energy-weighted mean time. Requires energy() > 0.
  double centroid() const;
  // Times between which the cumulative energy fraction stays inside
  // [fraction, 1 - fraction].
  std::pair<double, double> support(double fraction = 1e-10) const;

  // Same grid, shifted time origin.
  SampledEnvelope retimed(double new_t0) const;
  // Linear interpolation; zero outside the grid.
  Complex at(double t) const noexcept;

  bool operator==(const SampledEnvelope&) const = default;

 private:
  double t0_ = 0.0;
  double dt_ = 1.0;
  std::vector<Complex> samples_;
};

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

// CSV with header "t_seconds,re,im"; values written in shortest round-trip
// form so a write/read cycle is exact.
void write_csv(std::ostream& out, const SampledEnvelope& envelope);
// Accepts any sample count and zero-pads to a power of two. Rejects
// non-uniform time columns.
SampledEnvelope read_csv(std::istream& in);

}  // namespace fockdelay
