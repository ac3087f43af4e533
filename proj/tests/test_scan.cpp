#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "rotalign/scan.hpp"

using namespace rotalign;
using Catch::Matchers::WithinAbs;

namespace {

TraceSeries synthetic(const std::vector<double> &t, double (*f)(double)) {
  TraceSeries tr;
  tr.times = t;
  for (double x : t) {
    tr.cos2z.push_back(f(x));
    tr.cos2x.push_back(1.0 / 3.0);
    tr.cos2y.push_back(2.0 / 3.0 - f(x));
  }
  return tr;
}

ScanResult fake_scan(std::vector<double> a2, std::vector<double> z, std::vector<double> y) {
  ScanResult s;
  s.a2_grid = std::move(a2);
  s.max_cos2z = std::move(z);
  s.max_cos2y = std::move(y);
  s.max_cos2x = s.max_cos2y;
  return s;
}

} // namespace

TEST_CASE("max_over_time on analytic traces", "[scan]") {
  const auto t = linspace(0.0, rotational_period, 401);
  const auto tr = synthetic(t, [](double x) { return 0.5 + 0.1 * std::cos(2.0 * (x - 1.0)); });
  const auto p = max_over_time(tr, Axis::z);
  CHECK_THAT(p.t, WithinAbs(1.0, 1e-4));
  CHECK_THAT(p.value, WithinAbs(0.6, 1e-7));
  const auto flat = max_over_time(tr, Axis::x);
  CHECK_THAT(flat.value, WithinAbs(1.0 / 3.0, 1e-15));
}

TEST_CASE("max_over_time rejects short traces", "[scan]") {
  const auto t = linspace(0.0, 0.5 * rotational_period, 100);
  const auto tr = synthetic(t, [](double x) { return x; });
  CHECK_THROWS_AS(max_over_time(tr, Axis::z), validation_error);
  const auto two = synthetic({0.0, rotational_period}, [](double x) { return x; });
  CHECK_THROWS_AS(max_over_time(two, Axis::z), validation_error);
}

TEST_CASE("find_crossing on synthetic curves", "[scan]") {
  SECTION("single linear crossing") {
    const auto s = fake_scan({0.0, 0.25, 0.5}, {0.8, 0.6, 0.4}, {0.4, 0.5, 0.6});
    const auto r = find_crossing(s, CrossingPair::zy);
    REQUIRE(r.all.size() == 1);
    CHECK_THAT(r.a2_cross, WithinAbs(0.25 + 0.25 * 0.1 / 0.3, 1e-15));
  }
  SECTION("mirror curves cross at the mirror point") {
    std::vector<double> a, z, y;
    for (int i = 0; i <= 20; ++i) {
      const double x = i / 20.0;
      a.push_back(x);
      z.push_back(std::exp(-x));
      y.push_back(std::exp(-(0.8 - x)));
    }
    const auto r = find_crossing(fake_scan(a, z, y), CrossingPair::zy);
    REQUIRE(r.all.size() == 1);
    CHECK_THAT(r.a2_cross, WithinAbs(0.4, 1e-12));
  }
  SECTION("no crossing") {
    const auto s = fake_scan({0.0, 0.5, 1.0}, {0.9, 0.9, 0.9}, {0.4, 0.5, 0.6});
    CHECK_THROWS_AS(find_crossing(s, CrossingPair::zy), no_crossing_error);
  }
  SECTION("several crossings: nearest the expected optimum wins, all are reported") {
    const auto s = fake_scan({0.0, 0.2, 0.4, 0.6, 0.8}, {0.5, 0.3, 0.6, 0.3, 0.6}, {0.4, 0.4, 0.4, 0.4, 0.4});
    const auto r = find_crossing(s, CrossingPair::zy);
    CHECK(r.all.size() == 4);
    CHECK_THAT(r.a2_cross, WithinAbs(0.2 + 0.2 * 0.1 / 0.3, 1e-12));
    const auto rx = find_crossing(s, CrossingPair::zx);
    CHECK_THAT(rx.a2_cross, WithinAbs(0.6 + 0.2 * 0.1 / 0.3, 1e-12));
  }
}

TEST_CASE("circular polarization: x and y are equivalent", "[scan]") {
  EnsembleSpec spec;
  const auto times = linspace(0.0, rotational_period, 1024);
  const std::vector<double> half{0.5};
  const auto s = ellipticity_scan(spec, 11.1, half, times);
  CHECK_THAT(s.max_cos2x[0], WithinAbs(s.max_cos2y[0], 1e-10));
  CHECK(s.max_cos2z[0] > 1.0 / 3.0);
}

TEST_CASE("linear polarization along y aligns the molecule along y", "[scan]") {
  EnsembleSpec spec;
  spec.temperature = 1e-3;
  PulseParams pulse;
  pulse.a2 = 0.0;
  pulse.xi = 4.0;
  EnsembleOptions opt;
  opt.j_max = 30;
  const auto times = linspace(0.0, rotational_period, 2048);
  const auto tr = ensemble_spectrum(spec, pulse, opt).evaluate(times);
  const auto py = max_over_time(tr, Axis::y);
  // a full revival of a single rotor from |0,0> peaks just before tau
  CHECK(py.value > 0.6);
  CHECK(std::min(std::abs(py.t - rotational_period), std::abs(py.t - rotational_period / 2)) < 0.1 * rotational_period);

  // the finite-pulse integrator agrees with the kick at the peak
  const auto psi0 = basis_state(0, 0, 30);
  const auto kick = prepare_kick(psi0.block, 0.0);
  TimeDependentOptions td;
  td.fwhm = 1e-3 * rotational_period;
  const auto after = integrate_timedependent(psi0, kick, 4.0, td);
  const double pulse_center = psi0.t + td.half_window_fwhm * td.fwhm;
  const auto at_peak = free_evolve(after, py.t + pulse_center - after.t);
  const AlignmentOperators ops(psi0.block);
  CHECK_THAT(expectation(at_peak, ops.y), WithinAbs(py.value, 2e-2));
}

TEST_CASE("ellipticity scan on a coarse grid", "[scan]") {
  EnsembleSpec spec;
  const auto times = linspace(0.0, rotational_period, 1024);
  const auto a2 = linspace(0.0, 1.0, 11);
  const auto s = ellipticity_scan(spec, 11.1, a2, times);

  SECTION("symmetric under a2 -> 1 - a2") {
    for (std::size_t i = 0; i < a2.size(); ++i) {
      const auto k = a2.size() - 1 - i;
      CHECK_THAT(s.max_cos2x[i], WithinAbs(s.max_cos2y[k], 1e-8));
      CHECK_THAT(s.max_cos2z[i], WithinAbs(s.max_cos2z[k], 1e-8));
    }
  }
  SECTION("crossings at 1/3 and 2/3") {
    CHECK_THAT(find_crossing(s, CrossingPair::zy).a2_cross, WithinAbs(1.0 / 3.0, 0.03));
    CHECK_THAT(find_crossing(s, CrossingPair::zx).a2_cross, WithinAbs(2.0 / 3.0, 0.03));
  }
}

TEST_CASE("maxima are continuous on a 0.02 grid", "[scan]") {
  EnsembleSpec spec;
  const auto times = linspace(0.0, rotational_period, 2048);
  const auto a2 = linspace(0.2, 0.5, 16);
  const auto s = ellipticity_scan(spec, 11.1, a2, times);
  for (auto axis : {Axis::x, Axis::y, Axis::z})
    for (std::size_t i = 1; i < a2.size(); ++i)
      CHECK(std::abs(s.maxima(axis)[i] - s.maxima(axis)[i - 1]) <= 0.05);
}

TEST_CASE("mirrored scan data gives the mirrored crossing", "[scan]") {
  ScanResult s;
  for (int i = 0; i <= 10; ++i) {
    const double a = i / 10.0;
    s.a2_grid.push_back(a);
    s.max_cos2z.push_back(0.6 - 0.3 * (a - 0.5) * (a - 0.5));
    s.max_cos2y.push_back(0.35 + 0.4 * (1.0 - a) * (1.0 - a));
    s.max_cos2x.push_back(0.35 + 0.4 * a * a);
  }
  ScanResult m;
  for (std::size_t i = s.a2_grid.size(); i-- > 0;) {
    m.a2_grid.push_back(1.0 - s.a2_grid[i]);
    m.max_cos2z.push_back(s.max_cos2z[i]);
    m.max_cos2y.push_back(s.max_cos2x[i]);
    m.max_cos2x.push_back(s.max_cos2y[i]);
  }
  const double zy = find_crossing(s, CrossingPair::zy).a2_cross;
  CHECK_THAT(find_crossing(m, CrossingPair::zx).a2_cross, WithinAbs(1.0 - zy, 1e-12));
}

TEST_CASE("z and y peaks are congruent at the crossing", "[scan]") {
  EnsembleSpec spec;
  const auto times = linspace(0.0, rotational_period, 4096);
  const auto a2 = linspace(0.0, 1.0, 11);
  const auto s = ellipticity_scan(spec, 11.1, a2, times);
  PulseParams pulse;
  pulse.a2 = find_crossing(s, CrossingPair::zy).a2_cross;
  const auto ens = ensemble_spectrum(spec, pulse);
  const auto tr = ens.evaluate(times);
  const double tz = max_over_time(tr, Axis::z).t, ty = max_over_time(tr, Axis::y).t;
  const auto &sp = ens.spectrum;
  CHECK_THAT(sp.x(tz), WithinAbs(sp.x(ty), 0.01));
  CHECK_THAT(sp.z(tz), WithinAbs(sp.y(ty), 0.01));
  CHECK_THAT(sp.y(tz), WithinAbs(sp.z(ty), 0.01));
}

TEST_CASE("at a2 = 1/3 the z and y traces are time mirrors", "[scan]") {
  EnsembleSpec spec;
  PulseParams pulse;
  const auto ens = ensemble_spectrum(spec, pulse);
  for (double t : linspace(0.0, rotational_period, 97))
    REQUIRE_THAT(ens.spectrum.z(t), WithinAbs(ens.spectrum.y(rotational_period - t), 1e-10));
  const auto tr = ens.evaluate(linspace(0.0, rotational_period, 4096));
  CHECK_THAT(max_over_time(tr, Axis::z).value, WithinAbs(max_over_time(tr, Axis::y).value, 1e-2));
}
