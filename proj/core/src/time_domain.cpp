#include "fockdelay/time_domain.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fockdelay/errors.hpp"
#include "fockdelay/format.hpp"
#include "fockdelay/spectral.hpp"

namespace fockdelay {
namespace {

// One exponential-integrator step for x = (P, S):
//   x' = A x + b E(t),  A = [[-Gamma, i Omega], [i Omega, 0]],  b = (i g sqrt(N), 0)
// with E linear across the step. Then x1 = phi x0 + u E0 + w E1.
struct AtomStep {
  Eigen::Matrix2cd phi;
  Eigen::Vector2cd u;
  Eigen::Vector2cd w;
};

AtomStep make_step(double gamma, double omega, double coupling, double dt) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = -gamma;
  m(0, 1) = i * omega;
  m(1, 0) = i * omega;
  m(0, 2) = i * coupling;  // forcing by E(t) = w0 + s w1
  m(2, 3) = 1.0;           // w0' = w1
  const Eigen::Matrix4cd e = (m * dt).exp();
  AtomStep step;
  step.phi = e.topLeftCorner<2, 2>();
  const Eigen::Vector2cd c0 = e.block<2, 1>(0, 2);
  const Eigen::Vector2cd c1 = e.block<2, 1>(0, 3) / dt;
  step.u = c0 - c1;
  step.w = c1;
  return step;
}

double integrate_sq(const std::vector<Complex>& f, double dz) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (std::norm(f.front()) + std::norm(f.back()));
  for (std::size_t j = 1; j + 1 < f.size(); ++j) sum += std::norm(f[j]);
  return sum * dz;
}

}  // namespace

TimeDomainResult solve(const Scenario& scenario, const SolveOptions& options) {
  return solve(scenario, sample_envelope(scenario), options);
}

TimeDomainResult solve(const Scenario& scenario, const SampledEnvelope& input,
                       const SolveOptions& options) {
  const MediumSpec& medium = scenario.medium;
  const CavitySpec& cavity = scenario.cavity;
  if (!(medium.length > 0.0) || !(medium.c > 0.0) || medium.gamma < 0.0 || !(cavity.G > 0.0))
    throw ValidationError("scenario", "time-domain solver needs L > 0, c > 0, Gamma >= 0, G > 0");
  if (input.empty()) throw ValidationError("envelope", "empty input");
  if (options.mode == SolveMode::fixed_sector && options.sector < 0)
    throw ValidationError("sector", "must be >= 0");

  const int z_points = options.z_points.value_or(scenario.numerics.z_points);
  if (z_points < 2) throw ValidationError("z_points", "must be >= 2");
  if (!(options.max_rotation > 0.0) || !(options.max_courant > 0.0))
    throw ValidationError("step", "max_rotation and max_courant must be positive");
  const auto nz = static_cast<std::size_t>(z_points);
  const double dz = medium.length / static_cast<double>(nz - 1);
  const double dt = input.dt();
  const std::size_t steps = input.size();
  const double coupling = std::sqrt(medium.collective_coupling_sq());
  const double inv_c = 1.0 / medium.c;
  const Complex a(0.0, 0.5 * coupling * dz * inv_c);

  TimeDomainResult r;
  r.mode = options.mode;
  r.sector = options.mode == SolveMode::fixed_sector ? options.sector : -1;
  r.n0 = cavity.n0;
  r.vacuum_transit = medium.length * inv_c;
  if (options.photons > 0.0) {
    r.photons = options.photons;
  } else if (options.mode == SolveMode::fixed_sector) {
    r.photons = std::max(options.sector, 1);
  } else {
    r.photons = scenario.pulse.n_max();
  }
  r.input = input;

  std::vector<Complex> E(nz, input[0]);
  std::vector<Complex> P(nz, Complex{});
  std::vector<Complex> S(nz, Complex{});
  if (!options.initial_spin.empty()) {
    if (options.initial_spin.size() != nz)
      throw ValidationError("initial_spin", "needs one value per z node");
    S = options.initial_spin;
  }
  std::vector<Complex> out(steps);
  out[0] = E.back();

  const double np = r.photons;
  const double initial_atomic = np * inv_c * (integrate_sq(S, dz) + integrate_sq(P, dz));
  // Reference norm: injected energy plus whatever the medium starts with.
  const double input_norm = std::sqrt(std::max(input.energy() + initial_atomic / np, 1e-300));

  r.n_cav.resize(steps);
  r.spin.resize(steps);
  r.excited.resize(steps);
  r.probe.resize(steps);
  r.net_flux.resize(steps);
  r.scattered.resize(steps);

  auto flux_rate = [&](Complex e0, Complex el) { return np * (std::norm(e0) - std::norm(el)); };
  auto record = [&](std::size_t k) {
    r.spin[k] = np * inv_c * integrate_sq(S, dz);
    r.excited[k] = np * inv_c * integrate_sq(P, dz);
    r.probe[k] = np * inv_c * integrate_sq(E, dz);
  };
  record(0);
  r.n_cav[0] = static_cast<double>(cavity.n0) + initial_atomic;
  r.net_flux[0] = 0.0;
  r.scattered[0] = 0.0;

  const int snapshot_count = options.snapshot_count.value_or(scenario.numerics.snapshot_count);
  std::vector<std::size_t> snapshot_at;
  if (snapshot_count == 1) {
    snapshot_at.push_back(0);
  } else {
    for (int s = 0; s < snapshot_count; ++s)
      snapshot_at.push_back(static_cast<std::size_t>(
          std::llround(static_cast<double>(s) * static_cast<double>(steps - 1) / (snapshot_count - 1))));
  }
  std::size_t next_snapshot = 0;
  auto maybe_snapshot = [&](std::size_t k) {
    while (next_snapshot < snapshot_at.size() && snapshot_at[next_snapshot] == k) {
      r.snapshots.push_back(FieldState{input.time(k), dz, E, P, S, r.n_cav[k]});
      ++next_snapshot;
    }
  };
  maybe_snapshot(0);

  // Sub-step each input interval so Omega dt stays below max_rotation and
  // the slowest pulse moves at most max_courant cells per step; the
  // probe at z = 0 is interpolated linearly in between.
  const double omega_max = cavity.G * std::sqrt(
      (options.mode == SolveMode::fixed_sector ? static_cast<double>(r.sector)
                                               : r.n_cav[0] + np) + 1.0);
  const double omega_min =
      cavity.G * std::sqrt((options.mode == SolveMode::fixed_sector
                                ? static_cast<double>(r.sector)
                                : std::max(0.0, static_cast<double>(cavity.n0))) +
                           1.0);
  const double cell_transit = dz * coupling * coupling * inv_c / (omega_min * omega_min);
  double h_max = options.max_rotation / omega_max;
  if (cell_transit > 0.0) h_max = std::min(h_max, options.max_courant * cell_transit);
  const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(dt / h_max)));
  const double h = dt / static_cast<double>(substeps);

  AtomStep step;
  double current_omega = -1.0;
  const double scatter_rate = 2.0 * medium.gamma * inv_c * np;
  double loss_prev = scatter_rate * integrate_sq(P, dz);
  double rate_prev = flux_rate(E.front(), E.back());
  double net_flux = 0.0;
  double scattered = 0.0;
  double occupation_now = r.n_cav[0];

  for (std::size_t k = 0; k + 1 < steps; ++k) {
    for (std::size_t sub = 0; sub < substeps; ++sub) {
      double occupation = static_cast<double>(r.sector);
      if (options.mode == SolveMode::dynamic_filling) {
        // Midpoint predictor for the cavity photon number over the step.
        occupation = std::max(0.0, occupation_now + 0.5 * h * rate_prev);
      }
      const double omega = cavity.G * std::sqrt(occupation + 1.0);
      if (omega != current_omega) {
        step = make_step(medium.gamma, omega, coupling, h);
        current_omega = omega;
      }
      const Complex phi00 = step.phi(0, 0), phi01 = step.phi(0, 1);
      const Complex phi10 = step.phi(1, 0), phi11 = step.phi(1, 1);
      const Complex u0 = step.u(0), u1 = step.u(1);
      const Complex w0 = step.w(0), w1 = step.w(1);
      const Complex denom = 1.0 - a * w0;

      const double frac = static_cast<double>(sub + 1) / static_cast<double>(substeps);
      Complex e_new = input[k] + (input[k + 1] - input[k]) * frac;
      Complex e_old = E[0];
      const Complex p_new = phi00 * P[0] + phi01 * S[0] + u0 * e_old + w0 * e_new;
      const Complex s_new = phi10 * P[0] + phi11 * S[0] + u1 * e_old + w1 * e_new;
      E[0] = e_new;
      P[0] = p_new;
      S[0] = s_new;
      for (std::size_t j = 1; j < nz; ++j) {
        e_old = E[j];
        const Complex p_known = phi00 * P[j] + phi01 * S[j] + u0 * e_old;
        const Complex s_known = phi10 * P[j] + phi11 * S[j] + u1 * e_old;
        const Complex e_next = (E[j - 1] + a * (P[j - 1] + p_known)) / denom;
        E[j] = e_next;
        P[j] = p_known + w0 * e_next;
        S[j] = s_known + w1 * e_next;
      }

      const double rate = flux_rate(E.front(), E.back());
      net_flux += 0.5 * h * (rate_prev + rate);
      const double loss = scatter_rate * integrate_sq(P, dz);
      scattered += 0.5 * h * (loss_prev + loss);
      rate_prev = rate;
      loss_prev = loss;
      occupation_now = std::max(0.0, r.n_cav[0] + net_flux);
    }
    out[k + 1] = E.back();
    record(k + 1);
    r.net_flux[k + 1] = net_flux;
    r.scattered[k + 1] = scattered;
    r.n_cav[k + 1] = occupation_now;

    const double atomic = (r.spin[k + 1] + r.excited[k + 1]) / np;
    if (!std::isfinite(atomic) || std::sqrt(atomic) > options.blowup_factor * input_norm) {
      throw NumericalError("instability", "field norm exceeded " + shortest(options.blowup_factor) +
                                              " x input norm at t = " + shortest(input.time(k + 1)));
    }
    maybe_snapshot(k + 1);
  }

  r.output = SampledEnvelope(input.t0() + r.vacuum_transit, dt, std::move(out));
  return r;
}

std::vector<double> cavity_occupation_trace(const TimeDomainResult& result) {
  std::vector<double> trace(result.net_flux.size());
  const double base = result.n_cav.empty() ? static_cast<double>(result.n0) : result.n_cav.front();
  for (std::size_t k = 0; k < trace.size(); ++k)
    trace[k] = std::max(0.0, base + result.net_flux[k]);
  return trace;
}

ConservationAudit conservation_audit(const TimeDomainResult& result) {
  ConservationAudit audit;
  if (result.spin.empty()) return audit;
  const double initial = result.spin.front() + result.excited.front();
  const double initial_raw = result.spin.front() + result.probe.front();
  for (std::size_t k = 0; k < result.spin.size(); ++k) {
    const double closure = result.spin[k] + result.excited[k] - initial - result.net_flux[k] +
                           result.scattered[k];
    audit.drift = std::max(audit.drift, std::abs(closure));
    const double raw = result.spin[k] + result.probe[k] - initial_raw - result.net_flux[k];
    audit.raw_deficit = std::max(audit.raw_deficit, std::abs(raw));
  }
  audit.scattered = result.scattered.back();
  return audit;
}

std::vector<Complex> dark_state_spin_wave(const Scenario& scenario, int z_points, double center,
                                          double width) {
  if (z_points < 2) throw ValidationError("z_points", "must be >= 2");
  if (!(width > 0.0)) throw ValidationError("width", "must be positive");
  const double L = scenario.medium.length;
  const double dz = L / static_cast<double>(z_points - 1);
  std::vector<Complex> s(static_cast<std::size_t>(z_points));
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double x = (static_cast<double>(j) * dz - center) / width;
    s[j] = std::exp(-0.5 * x * x);
  }
  const double energy = integrate_sq(s, dz) / scenario.medium.c;
  for (auto& v : s) v /= std::sqrt(energy);
  return s;
}

void write_snapshot_csv(std::ostream& out, const FieldState& state) {
  out << "z,re_E,im_E,re_P,im_P,re_S,im_S\n";
  for (std::size_t j = 0; j < state.E.size(); ++j) {
    out << shortest(state.dz * static_cast<double>(j)) << ',' << shortest(state.E[j].real()) << ','
        << shortest(state.E[j].imag()) << ',' << shortest(state.P[j].real()) << ','
        << shortest(state.P[j].imag()) << ',' << shortest(state.S[j].real()) << ','
        << shortest(state.S[j].imag()) << '\n';
  }
}

}  // namespace fockdelay
