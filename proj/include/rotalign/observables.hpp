#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rotalign/angular.hpp"
#include "rotalign/dynamics.hpp"
#include "rotalign/errors.hpp"
#include "rotalign/legendre.hpp"

namespace rotalign {

enum class Axis { x, y, z };

inline const char *to_string(Axis a) {
  switch (a) {
  case Axis::x: return "x";
  case Axis::y: return "y";
  case Axis::z: return "z";
  }
  return "?";
}

/// <psi| M |psi>. M is real symmetric so the result is real; a larger imaginary
/// residue means the inputs are corrupt.
inline double expectation(const WavePacket &state, const OperatorMatrix &op) {
  if (!(state.block == op.block))
    throw validation_error("expectation: state and operator live on different blocks");
  if (state.block.dim() == 0)
    return 0.0;
  const cplx v = state.coeffs.dot(op.entries.cast<cplx>() * state.coeffs);
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
    throw convergence_error("expectation: imaginary residue above 1e-12");
  return v.real();
}

/// Sampled <cos^2 theta_i>(t), times in hbar/B.
struct TraceSeries {
  std::vector<double> times;
  std::vector<double> cos2x;
  std::vector<double> cos2y;
  std::vector<double> cos2z;

  std::size_t size() const { return times.size(); }

  const std::vector<double> &values(Axis a) const {
    switch (a) {
    case Axis::x: return cos2x;
    case Axis::y: return cos2y;
    case Axis::z: return cos2z;
    }
    return cos2z;
  }

  /// Largest |cos2x + cos2y + cos2z - 1| over the samples.
  double sum_rule_error() const {
    double err = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      err = std::max(err, std::abs(cos2x[i] + cos2y[i] + cos2z[i] - 1.0));
    return err;
  }
};

/// Field-free expectation value of one observable written as a sum of revival
/// harmonics:
///   f(t) = constant + sum_j Re[ harmonics[j] exp(i (4j + 6) t) ],
/// where 4j + 6 = E(j+2) - E(j) is the only frequency the Δj = 2 couplings carry.
/// Sums of weighted spectra represent incoherent ensembles exactly.
struct RevivalSpectrum {
  double constant = 0.0;
  std::vector<cplx> harmonics;

  static double frequency(std::size_t j) { return 4.0 * double(j) + 6.0; }

  double operator()(double t) const {
    double f = constant;
    for (std::size_t j = 0; j < harmonics.size(); ++j)
      if (harmonics[j] != cplx(0.0))
        f += (harmonics[j] * std::polar(1.0, frequency(j) * t)).real();
    return f;
  }

  void add(const RevivalSpectrum &other, double weight) {
    constant += weight * other.constant;
    if (harmonics.size() < other.harmonics.size())
      harmonics.resize(other.harmonics.size(), cplx(0.0));
    for (std::size_t j = 0; j < other.harmonics.size(); ++j)
      harmonics[j] += weight * other.harmonics[j];
  }

  /// Upper bound on sup_t |f(t) - g(t)|.
  friend double sup_distance(const RevivalSpectrum &f, const RevivalSpectrum &g) {
    double d = std::abs(f.constant - g.constant);
    const std::size_t n = std::max(f.harmonics.size(), g.harmonics.size());
    for (std::size_t j = 0; j < n; ++j) {
      const cplx a = j < f.harmonics.size() ? f.harmonics[j] : cplx(0.0);
      const cplx b = j < g.harmonics.size() ? g.harmonics[j] : cplx(0.0);
      d += std::abs(a - b);
    }
    return d;
  }
};

/// Spectrum of <psi(t)|M|psi(t)> for the free evolution of `state` (which is
/// given at time state.t).
inline RevivalSpectrum spectrum_of(const WavePacket &state, const OperatorMatrix &op) {
  if (!(state.block == op.block))
    throw validation_error("spectrum_of: state and operator live on different blocks");
  const auto &block = state.block;
  const int n = block.dim();
  // coefficients referred to t = 0
  Eigen::VectorXcd c(n);
  for (int r = 0; r < n; ++r)
    c(r) = state.coeffs(r) * std::polar(1.0, rotor_energy(block.state(r).j) * state.t);

  RevivalSpectrum s;
  s.harmonics.assign(static_cast<std::size_t>(std::max(0, block.j_max() - 1)), cplx(0.0));
  for (int col = 0; col < n; ++col) {
    const auto [j, m] = block.state(col);
    if (c(col) == cplx(0.0))
      continue;
    for (int dm = -2; dm <= 2; dm += 2) {
      if (auto r = block.index(j, m + dm))
        s.constant += op.entries(*r, col) * (std::conj(c(*r)) * c(col)).real();
      if (auto r = block.index(j + 2, m + dm))
        s.harmonics[static_cast<std::size_t>(j)] += 2.0 * op.entries(*r, col) * std::conj(c(*r)) * c(col);
    }
  }
  return s;
}

/// Spectra of the three alignment observables.
struct AlignmentSpectrum {
  RevivalSpectrum x, y, z;

  const RevivalSpectrum &operator[](Axis a) const {
    return a == Axis::x ? x : (a == Axis::y ? y : z);
  }

  void add(const AlignmentSpectrum &o, double weight) {
    x.add(o.x, weight);
    y.add(o.y, weight);
    z.add(o.z, weight);
  }

  TraceSeries evaluate(std::span<const double> times) const {
    TraceSeries tr;
    tr.times.assign(times.begin(), times.end());
    tr.cos2x.reserve(times.size());
    tr.cos2y.reserve(times.size());
    tr.cos2z.reserve(times.size());
    for (double t : times) {
      tr.cos2x.push_back(x(t));
      tr.cos2y.push_back(y(t));
      tr.cos2z.push_back(z(t));
    }
    return tr;
  }

  friend double sup_distance(const AlignmentSpectrum &a, const AlignmentSpectrum &b) {
    return std::max({sup_distance(a.x, b.x), sup_distance(a.y, b.y), sup_distance(a.z, b.z)});
  }
};

inline AlignmentSpectrum spectrum_of(const WavePacket &state, const AlignmentOperators &ops) {
  return {spectrum_of(state, ops.x), spectrum_of(state, ops.y), spectrum_of(state, ops.z)};
}

/// Evenly spaced samples on [start, end] inclusive.
inline std::vector<double> linspace(double start, double end, int count) {
  if (count < 1)
    throw validation_error("linspace: need at least one sample");
  std::vector<double> v(static_cast<std::size_t>(count));
  if (count == 1) {
    v[0] = start;
    return v;
  }
  for (int i = 0; i < count; ++i)
    v[static_cast<std::size_t>(i)] = start + (end - start) * double(i) / double(count - 1);
  return v;
}

/// scale * (<cos^2 theta_axis>(t) - 1/3)^2, proportional to the probe-defocusing
/// Kerr signal for a probe polarized along `axis`.
inline std::vector<double> kerr_signal(const TraceSeries &trace, Axis axis, double scale) {
  const auto &v = trace.values(axis);
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [scale](double c) {
    const double d = c - 1.0 / 3.0;
    return scale * d * d;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Angular distributions

struct AngularGridSpec {
  int n_theta = 64;
  int n_phi = 64;
};

/// Density |psi(theta, phi)|^2 on a product grid. Theta nodes are Gauss-Legendre
/// in cos(theta) and phi nodes are uniform, so `integral()` is exact for band
/// limited densities.
struct AngularGrid {
  std::vector<double> theta;
  std::vector<double> theta_weights; // Gauss-Legendre weights in cos(theta)
  std::vector<double> phi;
  Eigen::MatrixXd density;           // rows theta, cols phi

  double integral() const {
    const double dphi = 2.0 * std::numbers::pi / double(phi.size());
    double s = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i)
      s += theta_weights[i] * density.row(static_cast<Eigen::Index>(i)).sum() * dphi;
    return s;
  }
};

struct WeightedState {
  WavePacket state;
  double weight = 1.0;
};

/// Incoherent sum over ensemble members of |sum_jm c_jm Y_jm(theta, phi)|^2.
/// The grid is enlarged when needed so that it resolves j_max exactly.
inline AngularGrid angular_distribution(std::span<const WeightedState> members, AngularGridSpec spec = {}) {
  if (members.empty())
    throw validation_error("angular_distribution: empty ensemble");
  int j_max = 0;
  for (const auto &m : members)
    j_max = std::max(j_max, m.state.block.j_max());
  const int n_theta = std::max(spec.n_theta, j_max + 1);
  const int n_phi = std::max(spec.n_phi, 2 * j_max + 1);

  AngularGrid grid;
  const GaussLegendre gl(n_theta);
  // ascending theta = descending cos(theta)
  for (int i = n_theta - 1; i >= 0; --i) {
    grid.theta.push_back(std::acos(gl.nodes[static_cast<std::size_t>(i)]));
    grid.theta_weights.push_back(gl.weights[static_cast<std::size_t>(i)]);
  }
  for (int k = 0; k < n_phi; ++k)
    grid.phi.push_back(2.0 * std::numbers::pi * k / n_phi);
  grid.density = Eigen::MatrixXd::Zero(n_theta, n_phi);

  // legendre[m][i][j - m] for m = 0..j_max
  std::vector<std::vector<std::vector<double>>> legendre(static_cast<std::size_t>(j_max + 1));
  for (int m = 0; m <= j_max; ++m)
    for (double th : grid.theta)
      legendre[static_cast<std::size_t>(m)].push_back(theta_functions(m, j_max, th));

  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  Eigen::MatrixXcd amp(n_theta, n_phi);
  for (const auto &member : members) {
    const auto &block = member.state.block;
    const int jm = block.j_max();
    amp.setZero();
    for (int m = -jm; m <= jm; ++m) {
      if (parity_of(m) != block.m_parity())
        continue;
      const int am = std::abs(m);
      const double sign = (m < 0 && am % 2 == 1) ? -1.0 : 1.0;
      for (int i = 0; i < n_theta; ++i) {
        const auto &leg = legendre[static_cast<std::size_t>(am)][static_cast<std::size_t>(i)];
        cplx f(0.0);
        for (int j = am; j <= jm; ++j)
          if (auto r = block.index(j, m))
            f += member.state.coeffs(*r) * leg[static_cast<std::size_t>(j - am)];
        if (f == cplx(0.0))
          continue;
        f *= sign * inv_sqrt_2pi;
        for (int k = 0; k < n_phi; ++k)
          amp(i, k) += f * std::polar(1.0, m * grid.phi[static_cast<std::size_t>(k)]);
      }
    }
    grid.density += member.weight * amp.cwiseAbs2();
  }
  return grid;
}

} // namespace rotalign
