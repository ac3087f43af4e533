#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rotalign/ensemble.hpp"
#include "rotalign/errors.hpp"
#include "rotalign/pulse.hpp"

// Flat "key = value" configuration. Every dimensional quantity carries its unit
// in the key name (fwhm_fs, intensity_TWcm2, temperature_K, ...); times are
// given in rotational periods (suffix _rot). '#' starts a comment.

namespace rotalign {

namespace detail {

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string &key, const std::string &v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos == v.size() && std::isfinite(d))
      return d;
  } catch (const std::exception &) {
  }
  throw validation_error("config: '" + key + "' expects a finite number, got '" + v + "'");
}

inline int parse_int(const std::string &key, const std::string &v) {
  try {
    std::size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos == v.size())
      return i;
  } catch (const std::exception &) {
  }
  throw validation_error("config: '" + key + "' expects an integer, got '" + v + "'");
}

inline bool parse_bool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw validation_error("config: '" + key + "' expects true/false, got '" + v + "'");
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Molecular constants

struct Molecule {
  std::string name;
  double B_cm = 0.0;
  double delta_alpha_A3 = 0.0;
  SpinRule spin = SpinRule::even_only();
};

/// Sectioned key-value file: "[NAME]" headers followed by B_cm-1,
/// delta_alpha_A3 and spin_rule entries.
inline std::map<std::string, Molecule> parse_molecules(const std::string &text) {
  std::map<std::string, Molecule> out;
  std::istringstream in(text);
  std::string line;
  Molecule *cur = nullptr;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line.substr(0, line.find('#')));
    if (line.empty())
      continue;
    if (line.front() == '[' && line.back() == ']') {
      const auto name = detail::trim(line.substr(1, line.size() - 2));
      cur = &out[name];
      cur->name = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || cur == nullptr)
      throw validation_error("constants: malformed line " + std::to_string(lineno));
    const auto key = detail::trim(line.substr(0, eq));
    const auto val = detail::trim(line.substr(eq + 1));
    if (key == "B_cm-1")
      cur->B_cm = detail::parse_double(key, val);
    else if (key == "delta_alpha_A3")
      cur->delta_alpha_A3 = detail::parse_double(key, val);
    else if (key == "spin_rule")
      cur->spin = parse_spin_rule(val);
    else
      throw validation_error("constants: unknown key '" + key + "' on line " + std::to_string(lineno));
  }
  for (const auto &[name, m] : out)
    if (!(m.B_cm > 0.0) || !(m.delta_alpha_A3 > 0.0))
      throw validation_error("constants: molecule " + name + " needs positive B_cm-1 and delta_alpha_A3");
  return out;
}

// ---------------------------------------------------------------------------
// Run configuration

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command = "simulate";

  // pulse
  double a2 = 1.0 / 3.0;
  std::optional<double> xi;
  std::optional<double> intensity_TWcm2;
  std::optional<double> fwhm_fs;
  std::optional<double> delta_alpha_A3;
  std::string molecule = "CO2";

  // ensemble
  std::optional<double> temperature_dimensionless;
  std::optional<double> temperature_K;
  std::string spin_rule = "even_j_only";
  double weight_cutoff = 1e-6;
  int jmax = 0;

  // grids
  int time_samples = 4096;
  double time_start_rot = 0.0;
  double time_end_rot = 1.0;
  int a2_steps = 51;
  int theta_points = 64;
  int phi_points = 64;
  double distribution_time_rot = 0.25;
  bool pre_kick = false;
  double kerr_scale = 0.0;

  // validate-sudden
  int sudden_j0 = 0;
  int sudden_m0 = 0;
  int sudden_jmax = 40;

  // output
  std::string output = "-";
  OutputFormat format = OutputFormat::csv;

  void set(const std::string &key, const std::string &value);
  std::string to_text() const;
};

inline const std::vector<std::string> &known_commands() {
  static const std::vector<std::string> c{"simulate", "scan", "distribution", "validate-sudden", "constants"};
  return c;
}

inline void RunConfig::set(const std::string &key, const std::string &raw) {
  using namespace detail;
  const auto v = trim(raw);
  if (key == "command") {
    bool ok = false;
    for (const auto &c : known_commands())
      ok = ok || c == v;
    if (!ok)
      throw validation_error("config: unknown command '" + v + "'");
    command = v;
  } else if (key == "a2") a2 = parse_double(key, v);
  else if (key == "xi") xi = parse_double(key, v);
  else if (key == "intensity_TWcm2") intensity_TWcm2 = parse_double(key, v);
  else if (key == "fwhm_fs") fwhm_fs = parse_double(key, v);
  else if (key == "delta_alpha_A3") delta_alpha_A3 = parse_double(key, v);
  else if (key == "molecule") molecule = v;
  else if (key == "temperature_dimensionless") temperature_dimensionless = parse_double(key, v);
  else if (key == "temperature_K") temperature_K = parse_double(key, v);
  else if (key == "spin_rule") {
    parse_spin_rule(v);
    spin_rule = v;
  } else if (key == "weight_cutoff") weight_cutoff = parse_double(key, v);
  else if (key == "jmax") jmax = parse_int(key, v);
  else if (key == "time_samples") time_samples = parse_int(key, v);
  else if (key == "time_start_rot") time_start_rot = parse_double(key, v);
  else if (key == "time_end_rot") time_end_rot = parse_double(key, v);
  else if (key == "a2_steps") a2_steps = parse_int(key, v);
  else if (key == "theta_points") theta_points = parse_int(key, v);
  else if (key == "phi_points") phi_points = parse_int(key, v);
  else if (key == "distribution_time_rot") distribution_time_rot = parse_double(key, v);
  else if (key == "pre_kick") pre_kick = parse_bool(key, v);
  else if (key == "kerr_scale") kerr_scale = parse_double(key, v);
  else if (key == "sudden_j0") sudden_j0 = parse_int(key, v);
  else if (key == "sudden_m0") sudden_m0 = parse_int(key, v);
  else if (key == "sudden_jmax") sudden_jmax = parse_int(key, v);
  else if (key == "output") output = v;
  else if (key == "format") {
    if (v == "csv") format = OutputFormat::csv;
    else if (v == "json") format = OutputFormat::json;
    else throw validation_error("config: format must be csv or json");
  } else
    throw validation_error("config: unknown key '" + key + "'");
}

/// Canonical serialization; parse_config(to_text()) reproduces the same text.
inline std::string RunConfig::to_text() const {
  using detail::format_double;
  std::ostringstream o;
  auto kv = [&o](const char *k, const std::string &v) { o << k << " = " << v << '\n'; };
  auto opt = [&](const char *k, const std::optional<double> &v) {
    if (v)
      kv(k, format_double(*v));
  };
  kv("command", command);
  kv("a2", format_double(a2));
  opt("xi", xi);
  opt("intensity_TWcm2", intensity_TWcm2);
  opt("fwhm_fs", fwhm_fs);
  opt("delta_alpha_A3", delta_alpha_A3);
  kv("molecule", molecule);
  opt("temperature_dimensionless", temperature_dimensionless);
  opt("temperature_K", temperature_K);
  kv("spin_rule", spin_rule);
  kv("weight_cutoff", format_double(weight_cutoff));
  kv("jmax", std::to_string(jmax));
  kv("time_samples", std::to_string(time_samples));
  kv("time_start_rot", format_double(time_start_rot));
  kv("time_end_rot", format_double(time_end_rot));
  kv("a2_steps", std::to_string(a2_steps));
  kv("theta_points", std::to_string(theta_points));
  kv("phi_points", std::to_string(phi_points));
  kv("distribution_time_rot", format_double(distribution_time_rot));
  kv("pre_kick", pre_kick ? "true" : "false");
  kv("kerr_scale", format_double(kerr_scale));
  kv("sudden_j0", std::to_string(sudden_j0));
  kv("sudden_m0", std::to_string(sudden_m0));
  kv("sudden_jmax", std::to_string(sudden_jmax));
  kv("output", output);
  kv("format", format == OutputFormat::csv ? "csv" : "json");
  return o.str();
}

inline RunConfig parse_config(const std::string &text, RunConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line.substr(0, line.find('#')));
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw validation_error("config: line " + std::to_string(lineno) + " is not 'key = value'");
    base.set(detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

/// Physical inputs reduced to the engine's dimensionless parameters.
struct ResolvedRun {
  PulseParams pulse;
  EnsembleSpec ensemble;
  std::string xi_source;          // "config" or "pulse"
  std::string temperature_source; // "config", "kelvin" or "default"
};

inline constexpr double default_xi = 11.1;
inline constexpr double default_temperature = 20.0;

inline ResolvedRun resolve(const RunConfig &cfg, const std::map<std::string, Molecule> &molecules) {
  ResolvedRun r;
  auto molecule = [&]() -> const Molecule & {
    auto it = molecules.find(cfg.molecule);
    if (it == molecules.end())
      throw validation_error("config: unknown molecule '" + cfg.molecule + "'");
    return it->second;
  };

  r.pulse.a2 = cfg.a2;
  if (cfg.xi) {
    r.pulse.xi = *cfg.xi;
    r.xi_source = "config";
  } else if (cfg.intensity_TWcm2 || cfg.fwhm_fs) {
    if (!cfg.intensity_TWcm2 || !cfg.fwhm_fs)
      throw validation_error("config: intensity_TWcm2 and fwhm_fs must be given together");
    PhysicalPulse p;
    p.peak_intensity_W_cm2 = *cfg.intensity_TWcm2 * 1e12;
    p.fwhm_s = *cfg.fwhm_fs * 1e-15;
    p.delta_alpha_SI = polarizability_from_A3(cfg.delta_alpha_A3 ? *cfg.delta_alpha_A3 : molecule().delta_alpha_A3);
    r.pulse.xi = kick_strength_from_pulse(p);
    r.pulse.physical = p;
    r.xi_source = "pulse";
  } else {
    r.pulse.xi = default_xi;
    r.xi_source = "default";
  }
  r.pulse.validate();

  if (cfg.temperature_dimensionless && cfg.temperature_K)
    throw validation_error("config: give either temperature_dimensionless or temperature_K, not both");
  if (cfg.temperature_dimensionless) {
    r.ensemble.temperature = *cfg.temperature_dimensionless;
    r.temperature_source = "config";
  } else if (cfg.temperature_K) {
    r.ensemble.temperature = reduced_temperature(*cfg.temperature_K, molecule().B_cm);
    r.temperature_source = "kelvin";
  } else {
    r.ensemble.temperature = default_temperature;
    r.temperature_source = "default";
  }
  r.ensemble.spin = parse_spin_rule(cfg.spin_rule);
  r.ensemble.weight_cutoff = cfg.weight_cutoff;
  r.ensemble.validate();

  if (cfg.jmax < 0)
    throw validation_error("config: jmax must be >= 0 (0 = automatic)");
  if (cfg.time_samples < 3)
    throw validation_error("config: time_samples must be at least 3");
  if (!(cfg.time_end_rot > cfg.time_start_rot))
    throw validation_error("config: time_end_rot must exceed time_start_rot");
  if (cfg.a2_steps < 2)
    throw validation_error("config: a2_steps must be at least 2");
  if (cfg.theta_points < 2 || cfg.phi_points < 2)
    throw validation_error("config: angular grid needs at least 2 points per axis");
  if (cfg.kerr_scale < 0.0)
    throw validation_error("config: kerr_scale must be non-negative");
  return r;
}

} // namespace rotalign
