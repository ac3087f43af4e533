#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rotalign/angular.hpp"
#include "rotalign/dynamics.hpp"
#include "rotalign/errors.hpp"
#include "rotalign/observables.hpp"
#include "rotalign/pulse.hpp"

namespace rotalign {

/// Nuclear-spin statistical weight g_j of the rotational levels.
struct SpinRule {
  enum class Kind { even_j_only, odd_j_only, all_j, weighted };
  Kind kind = Kind::even_j_only;
  double g_even = 1.0;
  double g_odd = 0.0;

  static SpinRule even_only() { return {Kind::even_j_only, 1.0, 0.0}; }
  static SpinRule odd_only() { return {Kind::odd_j_only, 0.0, 1.0}; }
  static SpinRule all() { return {Kind::all_j, 1.0, 1.0}; }
  static SpinRule weighted(double g_even, double g_odd) { return {Kind::weighted, g_even, g_odd}; }

  double g(int j) const { return (j % 2 == 0) ? g_even : g_odd; }

  friend bool operator==(const SpinRule &, const SpinRule &) = default;
};

/// Accepts even_j_only, odd_j_only, all_j or weighted:<g_even>,<g_odd>.
inline SpinRule parse_spin_rule(const std::string &s) {
  if (s == "even_j_only") return SpinRule::even_only();
  if (s == "odd_j_only") return SpinRule::odd_only();
  if (s == "all_j") return SpinRule::all();
  const std::string prefix = "weighted:";
  if (s.rfind(prefix, 0) == 0) {
    const auto rest = s.substr(prefix.size());
    const auto comma = rest.find(',');
    if (comma != std::string::npos) {
      try {
        std::size_t p1 = 0, p2 = 0;
        const double ge = std::stod(rest.substr(0, comma), &p1);
        const double go = std::stod(rest.substr(comma + 1), &p2);
        if (p1 == comma && p2 == rest.size() - comma - 1 && ge >= 0.0 && go >= 0.0 && ge + go > 0.0)
          return SpinRule::weighted(ge, go);
      } catch (const std::exception &) {
      }
    }
  }
  throw validation_error("unknown spin rule '" + s + "'");
}

inline std::string to_string(const SpinRule &r) {
  switch (r.kind) {
  case SpinRule::Kind::even_j_only: return "even_j_only";
  case SpinRule::Kind::odd_j_only: return "odd_j_only";
  case SpinRule::Kind::all_j: return "all_j";
  case SpinRule::Kind::weighted: {
    auto fmt = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    return "weighted:" + fmt(r.g_even) + "," + fmt(r.g_odd);
  }
  }
  return "?";
}

struct EnsembleSpec {
  double temperature = 20.0; // kT/B
  SpinRule spin = SpinRule::even_only();
  double weight_cutoff = 1e-6;

  void validate() const {
    if (!(temperature > 0.0) || !std::isfinite(temperature))
      throw validation_error("ensemble: temperature must be positive");
    if (!(weight_cutoff >= 0.0 && weight_cutoff < 1.0))
      throw validation_error("ensemble: weight_cutoff must lie in [0, 1)");
  }
};

struct InitialState {
  int j = 0;
  int m = 0;
  double weight = 0.0;
};

/// Boltzmann-weighted initial states g_j exp(-j(j+1)/T), heaviest first.
/// Whole j shells are kept until the retained weight reaches 1 - weight_cutoff,
/// so the retained ensemble stays isotropic. Weights are renormalized.
/// Throws if a shell that must be kept lies above j_max.
inline std::vector<InitialState> enumerate_initial_states(const EnsembleSpec &spec, int j_max) {
  spec.validate();
  struct Shell {
    int j;
    double per_state;
  };
  int j_min = -1;
  for (int j = 0; j <= 1; ++j)
    if (spec.spin.g(j) > 0.0) {
      j_min = j;
      break;
    }
  if (j_min < 0)
    throw validation_error("ensemble: spin rule leaves no populated level");

  std::vector<Shell> shells;
  double total = 0.0;
  const double e0 = rotor_energy(j_min);
  for (int j = j_min;; ++j) {
    const double boltz = std::exp(-(rotor_energy(j) - e0) / spec.temperature);
    if (boltz < 1e-300 || (j > j_max && boltz * (2 * j + 1) < 1e-18 * total))
      break;
    const double w = spec.spin.g(j) * boltz;
    if (w > 0.0) {
      shells.push_back({j, w});
      total += w * (2 * j + 1);
    }
  }
  std::stable_sort(shells.begin(), shells.end(),
                   [](const Shell &a, const Shell &b) { return a.per_state > b.per_state; });

  std::vector<Shell> kept;
  double cumulative = 0.0;
  for (const auto &s : shells) {
    kept.push_back(s);
    cumulative += s.per_state * (2 * s.j + 1) / total;
    if (cumulative >= 1.0 - spec.weight_cutoff)
      break;
  }
  for (const auto &s : kept)
    if (s.j > j_max)
      throw validation_error("ensemble: j_max = " + std::to_string(j_max) + " is too small for T = " +
                             std::to_string(spec.temperature) + " (needs j = " + std::to_string(s.j) + ")");

  double kept_total = 0.0;
  for (const auto &s : kept)
    kept_total += s.per_state * (2 * s.j + 1);
  std::vector<InitialState> out;
  for (const auto &s : kept)
    for (int m = -s.j; m <= s.j; ++m)
      out.push_back({s.j, m, s.per_state / kept_total});
  return out;
}

struct EnsembleOptions {
  int j_max = 0;                      // 0 selects the truncation adaptively
  double truncation_tolerance = 1e-6; // allowed change when j_max grows by 4
  int j_max_limit = 240;
  bool pair_m = true;                 // fold (j0, -m0) onto (j0, m0)
};

struct EnsembleResult {
  AlignmentSpectrum spectrum;
  std::vector<InitialState> states;
  int j_max = 0;
  double truncation_change = 0.0; // sup-norm bound on the change at j_max + 4 (auto mode only)

  TraceSeries evaluate(std::span<const double> times) const { return spectrum.evaluate(times); }
};

namespace detail {

inline int thermal_j(const std::vector<InitialState> &states) {
  int j = 0;
  for (const auto &s : states)
    j = std::max(j, s.j);
  return j;
}

// Kicked |j0,m0> columns are V exp(i xi Lambda) V^T e_k.
inline AlignmentSpectrum kicked_ensemble_spectrum(const std::vector<InitialState> &states, const PulseParams &pulse,
                                                   int j_max, bool pair_m) {
  std::map<std::pair<int, int>, std::vector<const InitialState *>> by_block;
  for (const auto &s : states)
    by_block[{s.j % 2, ((s.m % 2) + 2) % 2}].push_back(&s);

  AlignmentSpectrum total;
  for (const auto &[key, members] : by_block) {
    const BasisBlock block(static_cast<Parity>(key.first), static_cast<Parity>(key.second), j_max);
    const AlignmentOperators ops(block);
    const KickOperator kick = prepare_kick(ops, pulse.a2);
    const Eigen::VectorXcd phases =
        (cplx(0.0, pulse.xi) * kick.eigenvalues.cast<cplx>()).array().exp().matrix();
    for (const InitialState *s : members) {
      double weight = s->weight;
      if (pair_m) {
        if (s->m < 0)
          continue;
        if (s->m > 0)
          weight *= 2.0;
      }
      const int k = block.row(s->j, s->m);
      WavePacket psi{block, {}, 0.0};
      psi.coeffs = kick.eigenvectors.cast<cplx>() *
                   phases.cwiseProduct(kick.eigenvectors.row(k).transpose().cast<cplx>());
      total.add(spectrum_of(psi, ops), weight);
    }
  }
  return total;
}

} // namespace detail

/// Thermal average of the post-kick alignment spectra. The kick acts at t = 0.
inline EnsembleResult ensemble_spectrum(const EnsembleSpec &spec, const PulseParams &pulse,
                                        const EnsembleOptions &opt = {}) {
  spec.validate();
  pulse.validate();
  EnsembleResult result;

  if (opt.j_max > 0) {
    result.states = enumerate_initial_states(spec, opt.j_max);
    result.j_max = opt.j_max;
    result.spectrum = detail::kicked_ensemble_spectrum(result.states, pulse, opt.j_max, opt.pair_m);
    return result;
  }

  result.states = enumerate_initial_states(spec, opt.j_max_limit);
  const int j_thermal = detail::thermal_j(result.states);
  int margin = 4 * static_cast<int>(std::ceil(std::sqrt(pulse.xi)));
  for (;;) {
    const int j_max = std::max(1, j_thermal + margin);
    if (j_max + 4 > opt.j_max_limit)
      throw convergence_error("ensemble: basis truncation did not converge below j_max = " +
                              std::to_string(opt.j_max_limit));
    auto coarse = detail::kicked_ensemble_spectrum(result.states, pulse, j_max, opt.pair_m);
    auto fine = detail::kicked_ensemble_spectrum(result.states, pulse, j_max + 4, opt.pair_m);
    const double change = sup_distance(coarse, fine);
    if (change <= opt.truncation_tolerance) {
      result.j_max = j_max;
      result.truncation_change = change;
      result.spectrum = std::move(coarse);
      return result;
    }
    margin = std::max(4, 2 * margin);
  }
}

inline void require_increasing(std::span<const double> times) {
  if (times.empty())
    throw validation_error("time grid is empty");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw validation_error("time grid must be strictly increasing");
}

inline TraceSeries ensemble_trace(const EnsembleSpec &spec, const PulseParams &pulse, std::span<const double> times,
                                  const EnsembleOptions &opt = {}) {
  require_increasing(times);
  return ensemble_spectrum(spec, pulse, opt).evaluate(times);
}

/// Every ensemble member (both signs of m0) propagated to time t, for angular
/// distributions. With pre_kick the unkicked initial states are returned.
inline std::vector<WeightedState> ensemble_members_at(const EnsembleResult &ens, const PulseParams &pulse, double t,
                                                     bool pre_kick = false) {
  std::vector<WeightedState> out;
  std::map<std::pair<int, int>, KickOperator> kicks;
  for (const auto &s : ens.states) {
    WavePacket psi = basis_state(s.j, s.m, ens.j_max);
    if (!pre_kick) {
      const std::pair<int, int> key{s.j % 2, ((s.m % 2) + 2) % 2};
      auto it = kicks.find(key);
      if (it == kicks.end())
        it = kicks.emplace(key, prepare_kick(psi.block, pulse.a2)).first;
      psi = free_evolve(apply_kick(psi, it->second, pulse.xi), t);
    }
    out.push_back({std::move(psi), s.weight});
  }
  return out;
}

} // namespace rotalign
