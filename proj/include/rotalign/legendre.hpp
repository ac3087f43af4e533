#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "rotalign/errors.hpp"

namespace rotalign {

/// Gauss-Legendre nodes and weights on [-1, 1], exact for polynomials of degree <= 2n-1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) : nodes(static_cast<std::size_t>(n)), weights(static_cast<std::size_t>(n)) {
    if (n < 1)
      throw validation_error("GaussLegendre: need at least one node");
    for (int i = 0; i < (n + 1) / 2; ++i) {
      // Tricomi initial guess, then Newton on P_n
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16)
          break;
      }
      // recompute derivative at the converged node
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      const auto lo = static_cast<std::size_t>(i);
      const auto hi = static_cast<std::size_t>(n - 1 - i);
      nodes[lo] = -x;
      nodes[hi] = x;
      weights[lo] = w;
      weights[hi] = w;
    }
    if (n % 2 == 1)
      nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  }
};

/// Normalized associated Legendre functions Theta_j^m(theta) for fixed m >= 0 and
/// j = m..j_max, with the Condon-Shortley phase and
/// \int_0^pi Theta_j^m(theta)^2 sin(theta) dtheta = 1, so that
/// Y_jm(theta, phi) = Theta_j^m(theta) e^{i m phi} / sqrt(2 pi).
///
/// Upward recursion in j from the sectoral seed; stable well beyond j = 100.
/// Entry k of the result holds j = m + k.
inline std::vector<double> theta_functions(int m, int j_max, double theta) {
  if (m < 0)
    throw validation_error("theta_functions: m must be non-negative");
  std::vector<double> out;
  if (j_max < m)
    return out;
  out.reserve(static_cast<std::size_t>(j_max - m + 1));
  const double x = std::cos(theta);
  const double s = std::sin(theta);

  // Theta_0^0 = 1/sqrt(2); Theta_m^m = -sqrt((2m+1)/(2m)) sin(theta) Theta_{m-1}^{m-1}
  double pmm = 1.0 / std::sqrt(2.0);
  for (int k = 1; k <= m; ++k)
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  out.push_back(pmm);
  if (j_max == m)
    return out;
  double p_prev = pmm;
  double p_cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
  out.push_back(p_cur);
  for (int j = m + 2; j <= j_max; ++j) {
    const double jj = j, mm = m;
    const double a = std::sqrt((4.0 * jj * jj - 1.0) / (jj * jj - mm * mm));
    const double b = std::sqrt(((jj - 1.0) * (jj - 1.0) - mm * mm) / (4.0 * (jj - 1.0) * (jj - 1.0) - 1.0));
    const double p_next = a * (x * p_cur - b * p_prev);
    p_prev = p_cur;
    p_cur = p_next;
    out.push_back(p_cur);
  }
  return out;
}

/// Theta_j^m for any sign of m: Theta_j^{-m} = (-1)^m Theta_j^m.
inline double theta_function(int j, int m, double theta) {
  const int am = m < 0 ? -m : m;
  if (am > j)
    return 0.0;
  const double v = theta_functions(am, j, theta).back();
  return (m < 0 && (am % 2 == 1)) ? -v : v;
}

} // namespace rotalign
