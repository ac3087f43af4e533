#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/Dense>

#include "rotalign/basis.hpp"
#include "rotalign/errors.hpp"

// Closed-form matrix elements of cos^2(theta_z), cos^2(theta_x) = cos^2(phi) sin^2(theta)
// and cos^2(theta_y) = sin^2(phi) sin^2(theta) between spherical harmonics |j,m>
// (orthonormal, Condon-Shortley phase). All couplings are real.

namespace rotalign {

namespace detail {

inline void require_state(const char *who, int j, int m) {
  if (j < 0 || std::abs(m) > j)
    throw std::domain_error(std::string(who) + ": invalid (j, m) = (" + std::to_string(j) + ", " +
                            std::to_string(m) + ")");
}

// c_m^j without validation; zero when |j-1, m> does not exist.
inline double c_raw(int j, int m) {
  if (j <= 0 || std::abs(m) >= j)
    return 0.0;
  const double num = double(j - m) * double(j + m);
  const double den = double(2 * j - 1) * double(2 * j + 1);
  return std::sqrt(num / den);
}

inline double A_raw(int j, int m) {
  const double c0 = c_raw(j, m);
  const double c1 = c_raw(j + 1, m);
  return 0.5 * (1.0 - c0 * c0 - c1 * c1);
}

inline double B_raw(int j, int m) { return -0.5 * c_raw(j - 1, m) * c_raw(j, m); }

inline double C_raw(int j, int m) {
  const double p = double(j - m) * double(j - m - 1) * double(j + m + 2) * double(j + m + 1);
  if (p <= 0.0)
    return 0.0;
  return -std::sqrt(p) / (2.0 * double(2 * j - 1) * double(2 * j + 3));
}

// (j+m+4)!/(j+m)! written as a product; zero unless j + m >= 0.
inline double D_raw(int j, int m) {
  if (j < 0 || j + m < 0)
    return 0.0;
  const double n = double(j + m);
  const double rising = (n + 1) * (n + 2) * (n + 3) * (n + 4);
  return std::sqrt(rising / (double(2 * j + 1) * double(2 * j + 5))) / (4.0 * double(2 * j + 3));
}

} // namespace detail

/// c_m^j = sqrt((j-m)(j+m)/((2j-1)(2j+1))), the cos(theta) coupling of |j-1,m> and |j,m>.
inline double c_coeff(int j, int m) {
  detail::require_state("c_coeff", j, m);
  return detail::c_raw(j, m);
}

/// Diagonal of cos^2(phi) sin^2(theta).
inline double coeff_A(int j, int m) {
  detail::require_state("coeff_A", j, m);
  return detail::A_raw(j, m);
}

/// <j-2,m| cos^2(phi) sin^2(theta) |j,m>; zero when |j-2,m> does not exist.
inline double coeff_B(int j, int m) {
  detail::require_state("coeff_B", j, m);
  return detail::B_raw(j, m);
}

/// <j,m+2| cos^2(phi) sin^2(theta) |j,m>.
inline double coeff_C(int j, int m) {
  detail::require_state("coeff_C", j, m);
  return detail::C_raw(j, m);
}

/// <j+2,m+2| cos^2(phi) sin^2(theta) |j,m>.
inline double coeff_D(int j, int m) {
  detail::require_state("coeff_D", j, m);
  return detail::D_raw(j, m);
}

/// <j',m'| cos^2(phi) sin^2(theta) |j,m>, zero outside the Δj, Δm in {0, ±2} selection rules
/// and whenever either state does not exist.
inline double cos2_theta_x_element(int jp, int mp, int j, int m) {
  using namespace detail;
  if (j < 0 || jp < 0 || std::abs(m) > j || std::abs(mp) > jp)
    return 0.0;
  if (mp == m) {
    if (jp == j) return A_raw(j, m);
    if (jp == j + 2) return B_raw(jp, m);
    if (jp == j - 2) return B_raw(j, m);
  } else if (mp == m + 2) {
    if (jp == j) return C_raw(j, m);
    if (jp == j + 2) return D_raw(j, m);
    if (jp == j - 2) return D_raw(jp, -mp);
  } else if (mp == m - 2) {
    if (jp == j) return C_raw(j, mp);
    if (jp == j + 2) return D_raw(j, -m);
    if (jp == j - 2) return D_raw(jp, mp);
  }
  return 0.0;
}

/// <j',m'| cos^2(theta) |j,m>.
inline double cos2_theta_z_element(int jp, int mp, int j, int m) {
  using detail::c_raw;
  if (j < 0 || jp < 0 || std::abs(m) > j || std::abs(mp) > jp || mp != m)
    return 0.0;
  if (jp == j) {
    const double lo = c_raw(j, m);
    const double hi = c_raw(j + 1, m);
    return lo * lo + hi * hi;
  }
  if (jp == j + 2) return c_raw(j + 1, m) * c_raw(j + 2, m);
  if (jp == j - 2) return c_raw(j - 1, m) * c_raw(j, m);
  return 0.0;
}

/// Real symmetric matrix of an angular observable on one basis block.
struct OperatorMatrix {
  BasisBlock block;
  Eigen::MatrixXd entries;

  int dim() const { return block.dim(); }
  double operator()(int r, int c) const { return entries(r, c); }
};

namespace detail {

template <class ElementFn>
OperatorMatrix fill_operator(const BasisBlock &block, ElementFn element) {
  const int n = block.dim();
  OperatorMatrix op{block, Eigen::MatrixXd::Zero(n, n)};
  for (int c = 0; c < n; ++c) {
    const auto [j, m] = block.state(c);
    for (int dj = -2; dj <= 2; dj += 2)
      for (int dm = -2; dm <= 2; dm += 2)
        if (auto r = block.index(j + dj, m + dm))
          op.entries(*r, c) = element(j + dj, m + dm, j, m);
  }
  return op;
}

} // namespace detail

inline OperatorMatrix build_cos2_theta_x(const BasisBlock &block) {
  return detail::fill_operator(block, cos2_theta_x_element);
}

inline OperatorMatrix build_cos2_theta_z(const BasisBlock &block) {
  return detail::fill_operator(block, cos2_theta_z_element);
}

/// cos^2(theta_y) through the sum rule I - M_z - M_x, which makes the three
/// truncated operators add up to the identity exactly.
inline OperatorMatrix build_cos2_theta_y(const BasisBlock &block) {
  const auto mx = build_cos2_theta_x(block);
  const auto mz = build_cos2_theta_z(block);
  const int n = block.dim();
  OperatorMatrix op{block, Eigen::MatrixXd::Zero(n, n)};
  op.entries = Eigen::MatrixXd::Identity(n, n) - mz.entries - mx.entries;
  return op;
}

/// The three alignment observables on a single block.
struct AlignmentOperators {
  OperatorMatrix x;
  OperatorMatrix y;
  OperatorMatrix z;

  explicit AlignmentOperators(const BasisBlock &block)
      : x(build_cos2_theta_x(block)), y(build_cos2_theta_y(block)), z(build_cos2_theta_z(block)) {}

  const BasisBlock &block() const { return x.block; }
};

} // namespace rotalign
