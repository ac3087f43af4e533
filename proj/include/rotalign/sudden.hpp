#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rotalign/dynamics.hpp"
#include "rotalign/observables.hpp"

namespace rotalign {

struct SuddenValidationRow {
  double fwhm = 0.0;                // hbar/B
  double trace_distance = 0.0;      // between the post-pulse states
  double max_trace_deviation = 0.0; // max_t |<cos^2 theta_z>_sudden - <cos^2 theta_z>_pulse| over one period
  double norm_drift = 0.0;
};

struct SuddenValidationSetup {
  double a2 = 1.0 / 3.0;
  double xi = 11.1;
  int j0 = 0;
  int m0 = 0;
  int j_max = 40;
  int time_samples = 4096;
  int steps_per_fwhm = 200;
};

/// FWHM ladder 1e-2 tau_rot, halved while above 1e-4 tau_rot, ending at 1e-4 tau_rot.
inline std::vector<double> default_fwhm_ladder() {
  std::vector<double> out;
  for (double f = 1e-2; f > 1e-4 * (1.0 + 1e-9); f *= 0.5)
    out.push_back(f * rotational_period);
  out.push_back(1e-4 * rotational_period);
  return out;
}

/// Compares the sudden kick against propagation through Gaussian pulses of
/// decreasing duration. The sudden kick is applied at the pulse center.
inline std::vector<SuddenValidationRow> validate_sudden(const SuddenValidationSetup &setup,
                                                        const std::vector<double> &fwhms) {
  const WavePacket initial = basis_state(setup.j0, setup.m0, setup.j_max);
  const AlignmentOperators ops(initial.block);
  const KickOperator kick = prepare_kick(ops, setup.a2);

  std::vector<SuddenValidationRow> rows;
  for (double fwhm : fwhms) {
    TimeDependentOptions opt;
    opt.fwhm = fwhm;
    opt.steps_per_fwhm = setup.steps_per_fwhm;
    const double half_window = opt.half_window_fwhm * fwhm;

    const WavePacket pulsed = integrate_timedependent(initial, kick, setup.xi, opt);
    const WavePacket sudden =
        free_evolve(apply_kick(free_evolve(initial, half_window), kick, setup.xi), half_window);

    const auto times = linspace(pulsed.t, pulsed.t + rotational_period, setup.time_samples);
    const auto fs = spectrum_of(sudden, ops.z);
    const auto fp = spectrum_of(pulsed, ops.z);
    double dev = 0.0;
    for (double t : times)
      dev = std::max(dev, std::abs(fs(t) - fp(t)));
    rows.push_back({fwhm, trace_distance(sudden, pulsed), dev, std::abs(pulsed.norm() - 1.0)});
  }
  return rows;
}

} // namespace rotalign
