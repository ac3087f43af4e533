#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "rotalign/errors.hpp"

namespace rotalign {

namespace si {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double speed_of_light = 299792458.0;  // m / s
inline constexpr double epsilon0 = 8.8541878128e-12;   // F / m
inline constexpr double boltzmann_cm_per_K = 0.695034800; // k_B / (h c), cm^-1 / K
} // namespace si

enum class Envelope { gaussian };

/// Pulse in laboratory units. The envelope is the cycle-averaged intensity
/// profile I(t); the field amplitude follows from I = c eps0 E^2 / 2.
struct PhysicalPulse {
  double peak_intensity_W_cm2 = 0.0;
  double fwhm_s = 0.0;
  double delta_alpha_SI = 0.0; // C m^2 / V
  Envelope envelope = Envelope::gaussian;
};

/// Polarizability volume (Angstrom^3) to SI polarizability (C m^2 / V).
inline double polarizability_from_A3(double volume_A3) {
  return 4.0 * std::numbers::pi * si::epsilon0 * volume_A3 * 1e-30;
}

/// Dimensionless temperature kT/B from kelvin and B in cm^-1.
inline double reduced_temperature(double kelvin, double B_cm) {
  if (!(kelvin > 0.0) || !(B_cm > 0.0))
    throw validation_error("reduced_temperature: temperature and B must be positive");
  return si::boltzmann_cm_per_K * kelvin / B_cm;
}

/// \int I(t) dt / I_peak for the given envelope with the given FWHM.
inline double envelope_area(Envelope env, double fwhm) {
  switch (env) {
  case Envelope::gaussian:
    return fwhm * std::sqrt(std::numbers::pi / (4.0 * std::numbers::ln2));
  }
  throw validation_error("envelope_area: unknown envelope");
}

/// Kick strength xi = (delta_alpha / 4 hbar) \int E^2(t) dt, with E(t) the field
/// amplitude envelope.
inline double kick_strength_from_pulse(const PhysicalPulse &p) {
  if (p.peak_intensity_W_cm2 < 0.0)
    throw validation_error("kick_strength_from_pulse: negative intensity");
  if (!(p.fwhm_s > 0.0))
    throw validation_error("kick_strength_from_pulse: duration must be positive");
  if (!(p.delta_alpha_SI > 0.0))
    throw validation_error("kick_strength_from_pulse: delta_alpha must be positive");
  const double fluence = p.peak_intensity_W_cm2 * 1e4 * envelope_area(p.envelope, p.fwhm_s); // J / m^2
  const double field_sq_time = 2.0 * fluence / (si::speed_of_light * si::epsilon0);          // V^2 s / m^2
  return p.delta_alpha_SI / (4.0 * si::hbar) * field_sq_time;
}

/// Pulse in the engine's dimensionless units: ellipse half-axis a^2 along x
/// (b^2 = 1 - a^2) and kick strength xi.
struct PulseParams {
  double a2 = 1.0 / 3.0;
  double xi = 11.1;
  std::optional<PhysicalPulse> physical;

  double b2() const { return 1.0 - a2; }

  void validate() const {
    if (!(a2 >= 0.0 && a2 <= 1.0))
      throw validation_error("pulse: a2 must lie in [0, 1]");
    if (!(xi >= 0.0) || !std::isfinite(xi))
      throw validation_error("pulse: xi must be finite and non-negative");
  }
};

} // namespace rotalign
