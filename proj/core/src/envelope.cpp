#include "fockdelay/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fockdelay/errors.hpp"
#include "fockdelay/format.hpp"

namespace fockdelay {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

SampledEnvelope::SampledEnvelope(double t0, double dt, std::vector<Complex> samples)
    : t0_(t0), dt_(dt), samples_(std::move(samples)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ValidationError("dt", "must be positive and finite");
  if (!std::isfinite(t0_)) throw ValidationError("t0", "must be finite");
  if (!is_power_of_two(samples_.size()))
    throw ValidationError("samples", "count must be a power of two, got " +
                                         std::to_string(samples_.size()));
  for (const auto& s : samples_)
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw ValidationError("samples", "non-finite amplitude");
}

SampledEnvelope SampledEnvelope::zero_padded(double t0, double dt, std::vector<Complex> samples,
                                             std::size_t min_size) {
  samples.resize(next_power_of_two(std::max(samples.size(), min_size)), Complex{});
  return SampledEnvelope(t0, dt, std::move(samples));
}

double SampledEnvelope::energy() const noexcept {
  double sum = 0.0;
  for (const auto& s : samples_) sum += std::norm(s);
  return sum * dt_;
}

double SampledEnvelope::centroid() const {
  double weight = 0.0;
  double moment = 0.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double p = std::norm(samples_[i]);
    weight += p;
    moment += p * time(i);
  }
  if (!(weight > 0.0)) throw NumericalError("zero-norm", "centroid of an empty envelope");
  return moment / weight;
}

std::pair<double, double> SampledEnvelope::support(double fraction) const {
  const double total = energy() / dt_;
  if (!(total > 0.0)) return {t0_, t0_};
  double running = 0.0;
  std::size_t first = 0;
  std::size_t last = samples_.size() - 1;
  bool found_first = false;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    running += std::norm(samples_[i]);
    if (!found_first && running > fraction * total) {
      first = i;
      found_first = true;
    }
    if (running >= (1.0 - fraction) * total) {
      last = i;
      break;
    }
  }
  return {time(first), time(last)};
}

SampledEnvelope SampledEnvelope::retimed(double new_t0) const {
  SampledEnvelope copy = *this;
  copy.t0_ = new_t0;
  return copy;
}

Complex SampledEnvelope::at(double t) const noexcept {
  const double x = (t - t0_) / dt_;
  if (x < 0.0 || samples_.empty()) return {};
  const auto i = static_cast<std::size_t>(x);
  const double w = x - static_cast<double>(i);
  if (i + 1 >= samples_.size()) return (i + 1 == samples_.size() && w == 0.0) ? samples_[i] : Complex{};
  return samples_[i] * (1.0 - w) + samples_[i + 1] * w;
}

void write_csv(std::ostream& out, const SampledEnvelope& envelope) {
  out << "t_seconds,re,im\n";
  for (std::size_t i = 0; i < envelope.size(); ++i) {
    out << shortest(envelope.time(i)) << ',' << shortest(envelope[i].real()) << ','
        << shortest(envelope[i].imag()) << '\n';
  }
}

SampledEnvelope read_csv(std::istream& in) {
  std::string line;
  std::vector<double> times;
  std::vector<Complex> values;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("t_seconds", 0) == 0) continue;
    std::stringstream row(line);
    std::string cell[3];
    for (auto& c : cell)
      if (!std::getline(row, c, ','))
        throw ValidationError("csv", "line " + std::to_string(line_no) + ": expected 3 columns");
    double t = 0, re = 0, im = 0;
    if (!parse_double(cell[0], t) || !parse_double(cell[1], re) || !parse_double(cell[2], im))
      throw ValidationError("csv", "line " + std::to_string(line_no) + ": not a number");
    times.push_back(t);
    values.emplace_back(re, im);
  }
  if (times.size() < 2) throw ValidationError("csv", "need at least two samples");
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - dt) > 1e-9 * dt)
      throw ValidationError("csv", "time column is not uniform at row " + std::to_string(i + 1));
  }
  return SampledEnvelope::zero_padded(times.front(), dt, std::move(values));
}

}  // namespace fockdelay
