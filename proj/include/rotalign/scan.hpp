#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rotalign/ensemble.hpp"
#include "rotalign/errors.hpp"
#include "rotalign/observables.hpp"

namespace rotalign {

struct PeakEstimate {
  double t = 0.0;
  double value = 0.0;
  std::size_t index = 0; // best sample
};

/// Vertex of the parabola through (t0,f0), (t1,f1), (t2,f2); nullopt-like
/// fallback to the middle sample when the points are collinear or the vertex
/// falls outside [t0, t2].
inline PeakEstimate refine_quadratic(double t0, double f0, double t1, double f1, double t2, double f2) {
  const double d0 = (f1 - f0) / (t1 - t0);
  const double d1 = (f2 - f1) / (t2 - t1);
  const double curvature = (d1 - d0) / (t2 - t0); // leading coefficient
  if (!(curvature < 0.0))
    return {t1, f1, 0};
  // f(t) = f1 + slope (t - t1) + curvature (t - t1)^2 with slope at t1:
  const double slope = d0 + curvature * (t1 - t0);
  const double tv = t1 - slope / (2.0 * curvature);
  if (tv < t0 || tv > t2)
    return {t1, f1, 0};
  return {tv, f1 - slope * slope / (4.0 * curvature), 0};
}

/// Global maximum over the sampled trace, refined by a parabola through the best
/// sample and its neighbours.
inline PeakEstimate max_over_time(const TraceSeries &trace, Axis axis) {
  if (trace.size() < 3 || trace.times.back() - trace.times.front() < rotational_period * (1.0 - 1e-9))
    throw validation_error("max_over_time: trace must cover at least one rotational period");
  const auto &v = trace.values(axis);
  const auto best = static_cast<std::size_t>(std::distance(v.begin(), std::max_element(v.begin(), v.end())));
  PeakEstimate p{trace.times[best], v[best], best};
  if (best > 0 && best + 1 < v.size()) {
    auto r = refine_quadratic(trace.times[best - 1], v[best - 1], trace.times[best], v[best], trace.times[best + 1],
                              v[best + 1]);
    p.t = r.t;
    p.value = r.value;
  }
  return p;
}

struct ScanResult {
  std::vector<double> a2_grid;
  std::vector<double> max_cos2x, max_cos2y, max_cos2z;
  std::vector<double> t_peak_x, t_peak_y, t_peak_z;
  std::vector<int> j_max;

  const std::vector<double> &maxima(Axis a) const {
    return a == Axis::x ? max_cos2x : (a == Axis::y ? max_cos2y : max_cos2z);
  }
};

inline constexpr double scan_isotropy_slack = 1e-3;

/// Maxima over time of the three thermally averaged observables for each a^2.
inline ScanResult ellipticity_scan(const EnsembleSpec &spec, double xi, std::span<const double> a2_grid,
                                   std::span<const double> times, const EnsembleOptions &opt = {}) {
  if (a2_grid.empty())
    throw validation_error("ellipticity_scan: empty a2 grid");
  require_increasing(times);
  ScanResult res;
  for (double a2 : a2_grid) {
    PulseParams pulse;
    pulse.a2 = a2;
    pulse.xi = xi;
    const auto ens = ensemble_spectrum(spec, pulse, opt);
    const auto trace = ens.evaluate(times);
    const auto px = max_over_time(trace, Axis::x);
    const auto py = max_over_time(trace, Axis::y);
    const auto pz = max_over_time(trace, Axis::z);
    for (double v : {px.value, py.value, pz.value})
      if (v < 1.0 / 3.0 - scan_isotropy_slack || v > 1.0 + scan_isotropy_slack)
        throw convergence_error("ellipticity_scan: maximum " + std::to_string(v) + " at a2 = " + std::to_string(a2) +
                                " is below isotropic; the time grid is too coarse");
    res.a2_grid.push_back(a2);
    res.max_cos2x.push_back(px.value);
    res.max_cos2y.push_back(py.value);
    res.max_cos2z.push_back(pz.value);
    res.t_peak_x.push_back(px.t);
    res.t_peak_y.push_back(py.t);
    res.t_peak_z.push_back(pz.t);
    res.j_max.push_back(ens.j_max);
  }
  return res;
}

enum class CrossingPair { zy, zx };

inline const char *to_string(CrossingPair p) { return p == CrossingPair::zy ? "zy" : "zx"; }

/// a^2 where the z-maximum curve crosses the y (or x) curve.
struct CrossingReport {
  double a2_cross = 0.0;       // the root nearest the expected optimum
  std::vector<double> all;     // every sign change on the grid, in grid order
};

/// Expected optimum: 1/3 for (z, y) and 2/3 for (z, x).
inline double expected_crossing(CrossingPair pair) { return pair == CrossingPair::zy ? 1.0 / 3.0 : 2.0 / 3.0; }

class no_crossing_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline CrossingReport find_crossing(const ScanResult &scan, CrossingPair pair) {
  const auto &other = pair == CrossingPair::zy ? scan.max_cos2y : scan.max_cos2x;
  const auto &a = scan.a2_grid;
  CrossingReport rep;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double di = scan.max_cos2z[i] - other[i];
    if (di == 0.0) {
      rep.all.push_back(a[i]);
      continue;
    }
    if (i + 1 < a.size()) {
      const double dn = scan.max_cos2z[i + 1] - other[i + 1];
      if (dn != 0.0 && (di < 0.0) != (dn < 0.0))
        rep.all.push_back(a[i] + (a[i + 1] - a[i]) * di / (di - dn));
    }
  }
  if (rep.all.empty())
    throw no_crossing_error(std::string("find_crossing: maxima curves for pair ") + to_string(pair) +
                            " never cross on the grid");
  const double target = expected_crossing(pair);
  rep.a2_cross = *std::min_element(rep.all.begin(), rep.all.end(), [target](double x, double y) {
    return std::abs(x - target) < std::abs(y - target);
  });
  return rep;
}

} // namespace rotalign
