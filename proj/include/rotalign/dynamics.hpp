#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "rotalign/angular.hpp"
#include "rotalign/basis.hpp"
#include "rotalign/errors.hpp"
#include "rotalign/pulse.hpp"

// Units: energies in B, time in hbar/B. The rotational period is pi.

namespace rotalign {

using cplx = std::complex<double>;

inline constexpr double rotational_period = std::numbers::pi;

inline double rotor_energy(int j) { return double(j) * double(j + 1); }

struct WavePacket {
  BasisBlock block;
  Eigen::VectorXcd coeffs;
  double t = 0.0;

  double norm() const { return coeffs.norm(); }
};

/// |j,m> at time t, truncated at j_max.
inline WavePacket basis_state(int j, int m, int j_max, double t = 0.0) {
  WavePacket psi{block_for(j, m, j_max), {}, t};
  psi.coeffs = Eigen::VectorXcd::Zero(psi.block.dim());
  psi.coeffs(psi.block.row(j, m)) = 1.0;
  return psi;
}

/// Eigendecomposition of the angular factor of the kick,
///   O = (a^2 - b^2) M_x + b^2 (I - M_z) = a^2 M_x + b^2 M_y.
struct KickOperator {
  BasisBlock block;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  double a2 = 0.0;

  Eigen::MatrixXd reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

inline Eigen::MatrixXd kick_matrix(const AlignmentOperators &ops, double a2) {
  const double b2 = 1.0 - a2;
  const int n = ops.block().dim();
  return (a2 - b2) * ops.x.entries + b2 * (Eigen::MatrixXd::Identity(n, n) - ops.z.entries);
}

inline KickOperator prepare_kick(const AlignmentOperators &ops, double a2) {
  if (!(a2 >= 0.0 && a2 <= 1.0))
    throw validation_error("prepare_kick: a2 must lie in [0, 1]");
  KickOperator kick{ops.block(), {}, {}, a2};
  if (kick.block.dim() == 0)
    return kick;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kick_matrix(ops, a2));
  if (solver.info() != Eigen::Success)
    throw convergence_error("prepare_kick: symmetric eigensolver failed");
  kick.eigenvalues = solver.eigenvalues();
  kick.eigenvectors = solver.eigenvectors();
  return kick;
}

inline KickOperator prepare_kick(const BasisBlock &block, double a2) {
  return prepare_kick(AlignmentOperators(block), a2);
}

/// Sudden kick: coeffs <- V exp(i xi Lambda) V^T coeffs. Time is unchanged.
inline WavePacket apply_kick(const WavePacket &state, const KickOperator &kick, double xi) {
  if (!(state.block == kick.block))
    throw validation_error("apply_kick: state and kick live on different blocks");
  WavePacket out = state;
  if (state.block.dim() == 0)
    return out;
  const Eigen::VectorXcd phases =
      (cplx(0.0, xi) * kick.eigenvalues.cast<cplx>()).array().exp().matrix();
  const Eigen::VectorXcd in_eigenbasis = kick.eigenvectors.transpose().cast<cplx>() * state.coeffs;
  out.coeffs = kick.eigenvectors.cast<cplx>() * phases.cwiseProduct(in_eigenbasis);
  return out;
}

/// Field-free rotation under H0 = J^2 for a time dt (may be negative).
inline WavePacket free_evolve(const WavePacket &state, double dt) {
  WavePacket out = state;
  for (int r = 0; r < state.block.dim(); ++r) {
    const double phase = -rotor_energy(state.block.state(r).j) * dt;
    out.coeffs(r) *= std::polar(1.0, phase);
  }
  out.t += dt;
  return out;
}

/// sqrt(1 - |<a|b>|^2) for normalized pure states.
inline double trace_distance(const WavePacket &a, const WavePacket &b) {
  if (!(a.block == b.block))
    throw validation_error("trace_distance: different blocks");
  const double overlap = std::norm(a.coeffs.dot(b.coeffs));
  return std::sqrt(std::max(0.0, 1.0 - overlap));
}

/// Time-dependent propagation through a finite pulse, used to validate the
/// sudden kick.
struct TimeDependentOptions {
  double fwhm = 1e-4 * rotational_period; // intensity FWHM in hbar/B
  int steps_per_fwhm = 200;
  double half_window_fwhm = 3.0;          // integrate over center +- half_window_fwhm * fwhm
  double norm_tolerance = 1e-8;
};

/// Normalized Gaussian intensity envelope s(t) with \int s dt = 1, centered at 0.
inline double gaussian_envelope(double t, double fwhm) {
  const double area = envelope_area(Envelope::gaussian, fwhm);
  return std::exp(-4.0 * std::numbers::ln2 * t * t / (fwhm * fwhm)) / area;
}

/// Propagates i dpsi/dt = [J^2 - xi s(t - t_c) O] psi from initial.t to
/// initial.t + 2 * half_window, the pulse centered at t_c = initial.t + half_window.
/// Strang splitting with the interaction applied exactly in the eigenbasis of O,
/// so every step is unitary.
inline WavePacket integrate_timedependent(const WavePacket &initial, const KickOperator &kick, double xi,
                                          const TimeDependentOptions &opt = {}) {
  if (!(initial.block == kick.block))
    throw validation_error("integrate_timedependent: state and kick live on different blocks");
  if (!(opt.fwhm > 0.0) || opt.steps_per_fwhm < 100 || !(opt.half_window_fwhm > 0.0))
    throw validation_error("integrate_timedependent: need fwhm > 0 and at least 100 steps per fwhm");

  const int n = initial.block.dim();
  const double half_window = opt.half_window_fwhm * opt.fwhm;
  const int steps = static_cast<int>(std::ceil(2.0 * opt.half_window_fwhm * opt.steps_per_fwhm));
  const double dt = 2.0 * half_window / steps;

  Eigen::VectorXcd half_free(n);
  for (int r = 0; r < n; ++r)
    half_free(r) = std::polar(1.0, -rotor_energy(initial.block.state(r).j) * 0.5 * dt);

  const Eigen::MatrixXcd V = kick.eigenvectors.cast<cplx>();
  const Eigen::MatrixXcd Vt = V.transpose();
  Eigen::VectorXcd psi = initial.coeffs;
  const double norm0 = psi.norm();

  for (int k = 0; k < steps; ++k) {
    const double t_mid = -half_window + (k + 0.5) * dt;
    const double strength = xi * gaussian_envelope(t_mid, opt.fwhm) * dt;
    psi = half_free.cwiseProduct(psi);
    Eigen::VectorXcd u = Vt * psi;
    for (int i = 0; i < n; ++i)
      u(i) *= std::polar(1.0, strength * kick.eigenvalues(i));
    psi = half_free.cwiseProduct(V * u);
  }

  if (std::abs(psi.norm() - norm0) > opt.norm_tolerance)
    throw convergence_error("integrate_timedependent: norm drift exceeds tolerance; reduce the step");

  WavePacket out{initial.block, psi, initial.t + 2.0 * half_window};
  return out;
}

} // namespace rotalign
