#pragma once

#include <optional>
#include <vector>

#include "fockdelay/envelope.hpp"
#include "fockdelay/params.hpp"

namespace fockdelay {

// Direct integration of the linearized Maxwell-Bloch system
//
//   (d/dt + c d/dz) E = i g sqrt(N) P
//   dP/dt = -Gamma P + i Omega S + i g sqrt(N) E
//   dS/dt = i Omega P
//
// where P and S are the collective (sqrt(N)-scaled) optical and spin
// coherences and Omega = G sqrt(n + 1). The equations are solved on the
// characteristics of the advection operator: in retarded time
// tau = t - z/c the probe obeys dE/dz = i (g sqrt(N) / c) P exactly, so the
// free-space part of the propagation carries no discretization error.
//
// Atomic variables step with an exponential integrator that is exact for a
// probe varying linearly across a step (stable for any Gamma dt), and the
// z-integration uses the trapezoid rule, solved implicitly node by node.
// Photon numbers are the unit-normalized energies scaled by the run's photon
// count.

enum class SolveMode { fixed_sector, dynamic_filling };

struct SolveOptions {
  SolveMode mode = SolveMode::fixed_sector;
  int sector = 1;  // Fock sector for fixed_sector runs
  // Photon count n_p,in used to convert energies to photons. Non-positive
  // means: the sector index for fixed_sector (1 for the vacuum sector),
  // the pulse's n_max for dynamic_filling.
  double photons = 0.0;
  std::optional<int> z_points;        // overrides scenario numerics
  std::optional<int> snapshot_count;  // overrides scenario numerics
  // Spin wave present at the first time step (one value per z node), in
  // solver units; see dark_state_spin_wave().
  std::vector<Complex> initial_spin;
  // Largest Omega dt per internal step (rad). Input intervals are split
  // until this holds; output stays on the input grid.
  double max_rotation = 0.5;
  // Largest internal step as a fraction of the time the slowest pulse needs
  // to cross one z cell, so that refining z also refines t.
  double max_courant = 1.0;
  // Abort when sqrt(atomic energy) exceeds this multiple of the input norm.
  double blowup_factor = 1e6;
};

struct FieldState {
  double t = 0.0;  // retarded time
  double dz = 0.0;
  std::vector<Complex> E;
  std::vector<Complex> P;
  std::vector<Complex> S;
  double n_cav = 0.0;
};

struct TimeDomainResult {
  SolveMode mode = SolveMode::fixed_sector;
  int sector = 0;
  double photons = 1.0;
  int n0 = 0;
  double vacuum_transit = 0.0;
  SampledEnvelope input;
  // E(L, t): same sample grid as the input, stamped t0 + L/c.
  SampledEnvelope output;
  std::vector<FieldState> snapshots;

  // Per time step, in photons.
  std::vector<double> n_cav;      // occupation driving Omega (flux integral)
  std::vector<double> spin;       // n_p / c * integral |S|^2 dz
  std::vector<double> excited;    // n_p / c * integral |P|^2 dz
  std::vector<double> probe;      // n_p / c * integral |E|^2 dz on the slice
  std::vector<double> net_flux;   // n_p * integral (|E(0)|^2 - |E(L)|^2) dt
  std::vector<double> scattered;  // n_p * integral (2 Gamma / c) integral |P|^2 dz dt

  double time(std::size_t k) const { return input.time(k); }
};

TimeDomainResult solve(const Scenario& scenario, const SampledEnvelope& input,
                       const SolveOptions& options = {});
TimeDomainResult solve(const Scenario& scenario, const SolveOptions& options = {});

// n(t) = n0 + n_p integral (|E(0)|^2 - |E(L)|^2) dt, clamped at zero.
std::vector<double> cavity_occupation_trace(const TimeDomainResult& result);

struct ConservationAudit {
  // max_t |spin + excited - initial - net_flux + scattered|: closure of the
  // photon balance including the Gamma losses.
  double drift = 0.0;
  // max_t |spin + probe - initial - net_flux|: balance without the loss
  // channel; grows with the scattered photons.
  double raw_deficit = 0.0;
  // Photons lost to spontaneous emission by the end of the run.
  double scattered = 0.0;
};

ConservationAudit conservation_audit(const TimeDomainResult& result);

// Gaussian spin wave centred at `center` (m) with rms amplitude width
// `width` (m), normalized so it holds one unit of photon-normalized energy:
// (1/c) integral |S|^2 dz = 1.
std::vector<Complex> dark_state_spin_wave(const Scenario& scenario, int z_points, double center,
                                          double width);

// Snapshot rows: z, re E, im E, re P, im P, re S, im S.
void write_snapshot_csv(std::ostream& out, const FieldState& state);

}  // namespace fockdelay
