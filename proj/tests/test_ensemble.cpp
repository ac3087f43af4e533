#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "rotalign/ensemble.hpp"

using namespace rotalign;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double total_weight(const std::vector<InitialState> &s) {
  return std::accumulate(s.begin(), s.end(), 0.0, [](double a, const InitialState &b) { return a + b.weight; });
}

double weight_of(const std::vector<InitialState> &s, int j, int m) {
  for (const auto &x : s)
    if (x.j == j && x.m == m)
      return x.weight;
  return 0.0;
}

} // namespace

TEST_CASE("cold ensemble is the ground state", "[ensemble]") {
  EnsembleSpec spec;
  spec.temperature = 1e-3;
  const auto s = enumerate_initial_states(spec, 10);
  REQUIRE(s.size() == 1);
  CHECK(s[0].j == 0);
  CHECK(s[0].m == 0);
  CHECK(s[0].weight == 1.0);

  spec.spin = SpinRule::odd_only();
  const auto odd = enumerate_initial_states(spec, 10);
  REQUIRE(odd.size() == 3);
  for (const auto &x : odd)
    CHECK(x.j == 1);
}

TEST_CASE("Boltzmann weights at T = 20, even j", "[ensemble]") {
  EnsembleSpec spec; // T = 20, even_j_only
  const auto s = enumerate_initial_states(spec, 60);
  CHECK_THAT(total_weight(s), WithinAbs(1.0, 1e-12));
  for (const auto &x : s) {
    CHECK(x.weight > 0.0);
    CHECK(x.j % 2 == 0);
  }
  CHECK_THAT(weight_of(s, 2, 1) / weight_of(s, 0, 0), WithinRel(std::exp(-6.0 / 20.0), 1e-14));
  CHECK_THAT(weight_of(s, 2, 1) / weight_of(s, 0, 0), WithinAbs(0.7408, 1e-4));
  int substates = 0;
  for (const auto &x : s)
    substates += x.j == 2;
  CHECK(substates == 5);
  for (std::size_t i = 1; i < s.size(); ++i)
    CHECK(s[i].weight <= s[i - 1].weight);
  // every m of a retained shell is present with equal weight
  for (const auto &x : s)
    CHECK(weight_of(s, x.j, -x.m) == x.weight);
}

TEST_CASE("spin rules", "[ensemble]") {
  CHECK(parse_spin_rule("even_j_only") == SpinRule::even_only());
  CHECK(parse_spin_rule("all_j") == SpinRule::all());
  const auto w = parse_spin_rule("weighted:2,1");
  CHECK(w.g(4) == 2.0);
  CHECK(w.g(3) == 1.0);
  CHECK(parse_spin_rule(to_string(w)) == w);
  CHECK_THROWS_AS(parse_spin_rule("weighted:2"), validation_error);
  CHECK_THROWS_AS(parse_spin_rule("bosons"), validation_error);

  EnsembleSpec spec;
  spec.spin = w;
  const auto s = enumerate_initial_states(spec, 60);
  CHECK_THAT(weight_of(s, 1, 0) / weight_of(s, 0, 0), WithinRel(0.5 * std::exp(-2.0 / 20.0), 1e-14));
}

TEST_CASE("ensemble enumeration errors", "[ensemble]") {
  EnsembleSpec spec;
  CHECK_THROWS_AS(enumerate_initial_states(spec, 6), validation_error); // T = 20 needs j ~ 16
  spec.temperature = 0.0;
  CHECK_THROWS_AS(enumerate_initial_states(spec, 40), validation_error);
  spec.temperature = 20.0;
  spec.weight_cutoff = 1.0;
  CHECK_THROWS_AS(enumerate_initial_states(spec, 40), validation_error);
}

TEST_CASE("thermal ensemble before the kick is isotropic", "[ensemble]") {
  for (double T : {0.5, 5.0, 20.0, 80.0}) {
    EnsembleSpec spec;
    spec.temperature = T;
    PulseParams pulse;
    pulse.xi = 0.0;
    const auto times = linspace(0.0, rotational_period, 64);
    const auto tr = ensemble_trace(spec, pulse, times);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      REQUIRE_THAT(tr.cos2x[i], WithinAbs(1.0 / 3.0, 1e-10));
      REQUIRE_THAT(tr.cos2y[i], WithinAbs(1.0 / 3.0, 1e-10));
      REQUIRE_THAT(tr.cos2z[i], WithinAbs(1.0 / 3.0, 1e-10));
    }
  }
}

TEST_CASE("kicked ensemble traces", "[ensemble]") {
  EnsembleSpec spec;
  PulseParams pulse; // a2 = 1/3, xi = 11.1
  const auto ens = ensemble_spectrum(spec, pulse);
  const auto times = linspace(0.0, 2.0 * rotational_period, 2048);
  const auto tr = ens.evaluate(times);

  SECTION("sum rule and range") {
    CHECK(tr.sum_rule_error() <= 1e-10);
    for (std::size_t i = 0; i < tr.size(); ++i)
      for (auto a : {Axis::x, Axis::y, Axis::z}) {
        REQUIRE(tr.values(a)[i] >= 0.0);
        REQUIRE(tr.values(a)[i] <= 1.0);
      }
  }

  SECTION("period pi") {
    std::vector<double> shifted(times);
    for (auto &t : shifted)
      t += rotational_period;
    const auto tr2 = ens.evaluate(shifted);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      REQUIRE_THAT(tr2.cos2x[i], WithinAbs(tr.cos2x[i], 1e-10));
      REQUIRE_THAT(tr2.cos2z[i], WithinAbs(tr.cos2z[i], 1e-10));
    }
  }

  SECTION("adaptive truncation is stable against j_max + 4") {
    EnsembleOptions opt;
    opt.j_max = ens.j_max + 4;
    const auto finer = ensemble_spectrum(spec, pulse, opt).evaluate(times);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      REQUIRE_THAT(finer.cos2x[i], WithinAbs(tr.cos2x[i], 1e-6));
      REQUIRE_THAT(finer.cos2y[i], WithinAbs(tr.cos2y[i], 1e-6));
      REQUIRE_THAT(finer.cos2z[i], WithinAbs(tr.cos2z[i], 1e-6));
    }
    CHECK(ens.truncation_change <= 1e-6);
  }

  SECTION("folding -m0 onto +m0 changes nothing") {
    EnsembleOptions opt;
    opt.j_max = ens.j_max;
    opt.pair_m = false;
    const auto unfolded = ensemble_spectrum(spec, pulse, opt).evaluate(times);
    for (std::size_t i = 0; i < tr.size(); ++i)
      REQUIRE_THAT(unfolded.cos2y[i], WithinAbs(tr.cos2y[i], 1e-12));
  }

  SECTION("deterministic") {
    const auto again = ensemble_spectrum(spec, pulse).evaluate(times);
    CHECK(again.cos2x == tr.cos2x);
    CHECK(again.cos2z == tr.cos2z);
  }
}

TEST_CASE("(j0, m0) and (j0, -m0) contribute identically", "[ensemble]") {
  const int j_max = 36;
  for (auto [j0, m0] : {std::pair{2, 1}, {4, 2}, {6, 5}, {3, 3}}) {
    const auto plus = basis_state(j0, m0, j_max);
    const auto minus = basis_state(j0, -m0, j_max);
    const AlignmentOperators ops(plus.block);
    const auto kick = prepare_kick(ops, 0.3);
    const auto sp = spectrum_of(apply_kick(plus, kick, 11.1), ops);
    const auto sm = spectrum_of(apply_kick(minus, kick, 11.1), ops);
    for (double t : {0.0, 0.3, 0.78, 1.9, 2.5})
      for (auto a : {Axis::x, Axis::y, Axis::z})
        REQUIRE_THAT(sp[a](t), WithinAbs(sm[a](t), 1e-12));
  }
}

TEST_CASE("ensemble members at a time reproduce the trace", "[ensemble]") {
  EnsembleSpec spec;
  spec.temperature = 5.0;
  PulseParams pulse;
  pulse.xi = 6.0;
  pulse.a2 = 0.25;
  const auto ens = ensemble_spectrum(spec, pulse);
  const double t = 0.61;
  const auto members = ensemble_members_at(ens, pulse, t);
  double z = 0.0, x = 0.0;
  for (const auto &m : members) {
    const AlignmentOperators ops(m.state.block);
    z += m.weight * expectation(m.state, ops.z);
    x += m.weight * expectation(m.state, ops.x);
  }
  CHECK_THAT(z, WithinAbs(ens.spectrum.z(t), 1e-12));
  CHECK_THAT(x, WithinAbs(ens.spectrum.x(t), 1e-12));
}

TEST_CASE("time grid must increase", "[ensemble]") {
  EnsembleSpec spec;
  PulseParams pulse;
  const std::vector<double> bad{0.0, 0.2, 0.2};
  CHECK_THROWS_AS(ensemble_trace(spec, pulse, bad), validation_error);
  pulse.a2 = -0.1;
  CHECK_THROWS_AS(ensemble_spectrum(spec, pulse), validation_error);
}
