// rotalign: field-free alignment revivals of a linear molecule after an
// elliptically polarized ultrashort kick.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotalign/bundled_constants.hpp"
#include "rotalign/rotalign.hpp"

namespace {

using namespace rotalign;

constexpr const char *kVersion = "1.0.0";

enum Exit { ok = 0, failure = 1, invalid = 2, not_converged = 3 };

struct CommonOptions {
  std::string config_path;
  std::string constants_path;
  std::vector<std::string> overrides;
  std::optional<double> a2, xi, temperature, time_rot;
  std::optional<int> jmax, times, a2_steps;
  std::optional<std::string> output, format;
  bool pre_kick = false;
};

void add_common(CLI::App *cmd, CommonOptions &o) {
  cmd->add_option("-c,--config", o.config_path, "Configuration file (key = value)");
  cmd->add_option("--constants", o.constants_path, "Molecule constants file (default: bundled)");
  cmd->add_option("--set", o.overrides, "Override any config key: --set key=value");
  cmd->add_option("--a2", o.a2, "Squared half-axis a^2 of the ellipse along x");
  cmd->add_option("--xi", o.xi, "Dimensionless kick strength");
  cmd->add_option("--temperature", o.temperature, "Dimensionless temperature kT/B");
  cmd->add_option("--jmax", o.jmax, "Basis truncation (0 = automatic)");
  cmd->add_option("--times", o.times, "Number of time samples");
  cmd->add_option("--a2-steps", o.a2_steps, "Number of a^2 grid points for scan");
  cmd->add_option("-o,--output", o.output, "Output file ('-' for stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw validation_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig build_config(const std::string &command, const CommonOptions &o) {
  RunConfig cfg;
  if (!o.config_path.empty())
    cfg = parse_config(read_file(o.config_path));
  cfg.command = command;
  for (const auto &kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw validation_error("--set expects key=value, got '" + kv + "'");
    cfg.set(detail::trim(kv.substr(0, eq)), kv.substr(eq + 1));
  }
  auto num = [](double v) { return detail::format_double(v); };
  if (o.a2) cfg.set("a2", num(*o.a2));
  if (o.xi) cfg.set("xi", num(*o.xi));
  if (o.temperature) {
    cfg.temperature_K.reset();
    cfg.set("temperature_dimensionless", num(*o.temperature));
  }
  if (o.jmax) cfg.set("jmax", std::to_string(*o.jmax));
  if (o.times) cfg.set("time_samples", std::to_string(*o.times));
  if (o.a2_steps) cfg.set("a2_steps", std::to_string(*o.a2_steps));
  if (o.time_rot) cfg.set("distribution_time_rot", num(*o.time_rot));
  if (o.pre_kick) cfg.pre_kick = true;
  if (o.output) cfg.set("output", *o.output);
  if (o.format) cfg.set("format", *o.format);
  return cfg;
}

std::map<std::string, Molecule> load_molecules(const CommonOptions &o) {
  return parse_molecules(o.constants_path.empty() ? std::string(bundled_molecules_conf) : read_file(o.constants_path));
}

void common_metadata(Table &t, const RunConfig &cfg, const ResolvedRun &run) {
  t.meta("program", std::string("rotalign ") + kVersion);
  t.meta("command", cfg.command);
  t.meta("a2", format_number(run.pulse.a2));
  t.meta("b2", format_number(run.pulse.b2()));
  t.meta("xi", format_number(run.pulse.xi));
  t.meta("xi_source", run.xi_source);
  if (run.pulse.physical) {
    t.meta("intensity_TWcm2", format_number(run.pulse.physical->peak_intensity_W_cm2 * 1e-12));
    t.meta("fwhm_fs", format_number(run.pulse.physical->fwhm_s * 1e15));
    t.meta("molecule", cfg.molecule);
  }
  t.meta("temperature_dimensionless", format_number(run.ensemble.temperature));
  t.meta("temperature_source", run.temperature_source);
  t.meta("spin_rule", to_string(run.ensemble.spin));
  t.meta("weight_cutoff", format_number(run.ensemble.weight_cutoff));
  t.meta("units", "time in rotational periods tau_rot = pi hbar/B; energies in B");
}

std::vector<double> time_grid(const RunConfig &cfg) {
  return linspace(cfg.time_start_rot * rotational_period, cfg.time_end_rot * rotational_period, cfg.time_samples);
}

std::vector<double> in_periods(const std::vector<double> &t) {
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    out[i] = t[i] / rotational_period;
  return out;
}

void emit(const RunConfig &cfg, const Table &t) {
  std::ostringstream buf;
  if (cfg.format == OutputFormat::csv)
    write_csv(buf, t);
  else
    write_json(buf, t);
  if (cfg.output == "-") {
    std::cout << buf.str();
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out)
    throw validation_error("cannot write '" + cfg.output + "'");
  out << buf.str();
}

EnsembleOptions ensemble_options(const RunConfig &cfg) {
  EnsembleOptions opt;
  opt.j_max = cfg.jmax;
  return opt;
}

int run_simulate(const RunConfig &cfg, const ResolvedRun &run) {
  const auto ens = ensemble_spectrum(run.ensemble, run.pulse, ensemble_options(cfg));
  const auto times = time_grid(cfg);
  const auto trace = ens.evaluate(times);

  Table t;
  common_metadata(t, cfg, run);
  t.meta("jmax", std::to_string(ens.j_max));
  t.meta("jmax_source", cfg.jmax > 0 ? "config" : "adaptive");
  t.meta("truncation_change_bound", format_number(ens.truncation_change));
  t.meta("ensemble_states", std::to_string(ens.states.size()));
  // center of the y/z alternation, i.e. (1 - <cos^2 theta_x>)/2 averaged over the samples
  double center = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i)
    center += 0.5 * (trace.cos2y[i] + trace.cos2z[i]);
  t.meta("yz_symmetry_center", format_number(center / double(trace.size())));
  t.add_column("t_over_tau_rot", in_periods(trace.times));
  t.add_column("cos2x", trace.cos2x);
  t.add_column("cos2y", trace.cos2y);
  t.add_column("cos2z", trace.cos2z);
  if (cfg.kerr_scale > 0.0) {
    t.meta("kerr_scale", format_number(cfg.kerr_scale));
    t.add_column("kerr_x", kerr_signal(trace, Axis::x, cfg.kerr_scale));
    t.add_column("kerr_y", kerr_signal(trace, Axis::y, cfg.kerr_scale));
    t.add_column("kerr_z", kerr_signal(trace, Axis::z, cfg.kerr_scale));
  }
  emit(cfg, t);
  return Exit::ok;
}

std::string join(const std::vector<double> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? " " : "") + format_number(v[i]);
  return s;
}

int run_scan(const RunConfig &cfg, const ResolvedRun &run) {
  const auto a2_grid = linspace(0.0, 1.0, cfg.a2_steps);
  const auto times = time_grid(cfg);
  const auto scan = ellipticity_scan(run.ensemble, run.pulse.xi, a2_grid, times, ensemble_options(cfg));

  Table t;
  common_metadata(t, cfg, run);
  t.meta("a2", "scanned");
  t.meta("b2", "scanned");
  for (auto pair : {CrossingPair::zy, CrossingPair::zx}) {
    const std::string key = std::string("crossing_") + to_string(pair);
    try {
      const auto c = find_crossing(scan, pair);
      t.meta(key, format_number(c.a2_cross));
      t.meta(key + "_all", join(c.all));
    } catch (const no_crossing_error &e) {
      std::cerr << "warning: " << e.what() << '\n';
      t.meta(key, "none");
    }
  }
  std::vector<double> jm(scan.j_max.begin(), scan.j_max.end());
  t.add_column("a2", scan.a2_grid);
  t.add_column("max_cos2x", scan.max_cos2x);
  t.add_column("max_cos2y", scan.max_cos2y);
  t.add_column("max_cos2z", scan.max_cos2z);
  t.add_column("t_peak_x_over_tau_rot", in_periods(scan.t_peak_x));
  t.add_column("t_peak_y_over_tau_rot", in_periods(scan.t_peak_y));
  t.add_column("t_peak_z_over_tau_rot", in_periods(scan.t_peak_z));
  t.add_column("jmax", jm);
  emit(cfg, t);
  return Exit::ok;
}

int run_distribution(const RunConfig &cfg, const ResolvedRun &run) {
  const auto ens = ensemble_spectrum(run.ensemble, run.pulse, ensemble_options(cfg));
  const double t_dist = cfg.distribution_time_rot * rotational_period;
  const auto members = ensemble_members_at(ens, run.pulse, t_dist, cfg.pre_kick);
  const auto grid = angular_distribution(members, {cfg.theta_points, cfg.phi_points});

  Table t;
  common_metadata(t, cfg, run);
  t.meta("jmax", std::to_string(ens.j_max));
  t.meta("time_over_tau_rot", format_number(cfg.distribution_time_rot));
  t.meta("pre_kick", cfg.pre_kick ? "true" : "false");
  t.meta("theta_nodes", std::to_string(grid.theta.size()) + " (Gauss-Legendre in cos theta)");
  t.meta("phi_nodes", std::to_string(grid.phi.size()) + " (uniform)");
  t.meta("normalization", format_number(grid.integral()));
  std::vector<double> th, ph, dens;
  for (std::size_t i = 0; i < grid.theta.size(); ++i)
    for (std::size_t k = 0; k < grid.phi.size(); ++k) {
      th.push_back(grid.theta[i]);
      ph.push_back(grid.phi[k]);
      dens.push_back(grid.density(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    }
  t.add_column("theta", th);
  t.add_column("phi", ph);
  t.add_column("density", dens);
  emit(cfg, t);
  return Exit::ok;
}

int run_validate_sudden(const RunConfig &cfg, const ResolvedRun &run) {
  SuddenValidationSetup setup;
  setup.a2 = run.pulse.a2;
  setup.xi = run.pulse.xi;
  setup.j0 = cfg.sudden_j0;
  setup.m0 = cfg.sudden_m0;
  setup.j_max = cfg.sudden_jmax;
  setup.time_samples = cfg.time_samples;
  const auto rows = validate_sudden(setup, default_fwhm_ladder());

  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    monotone = monotone && rows[i].max_trace_deviation < rows[i - 1].max_trace_deviation;

  Table t;
  t.meta("program", std::string("rotalign ") + kVersion);
  t.meta("command", cfg.command);
  t.meta("a2", format_number(setup.a2));
  t.meta("xi", format_number(setup.xi));
  t.meta("initial_state", "|" + std::to_string(setup.j0) + "," + std::to_string(setup.m0) + ">");
  t.meta("jmax", std::to_string(setup.j_max));
  t.meta("envelope", "gaussian intensity");
  t.meta("monotone", monotone ? "true" : "false");
  std::vector<double> f, td, dev, nd;
  for (const auto &r : rows) {
    f.push_back(r.fwhm / rotational_period);
    td.push_back(r.trace_distance);
    dev.push_back(r.max_trace_deviation);
    nd.push_back(r.norm_drift);
  }
  t.add_column("fwhm_over_tau_rot", f);
  t.add_column("max_trace_deviation", dev);
  t.add_column("state_trace_distance", td);
  t.add_column("norm_drift", nd);
  emit(cfg, t);
  if (!monotone) {
    std::cerr << "error: sudden-limit deviation is not monotone in the pulse duration\n";
    return Exit::not_converged;
  }
  return Exit::ok;
}

int run_constants(const RunConfig &cfg, const CommonOptions &o) {
  const std::string text =
      o.constants_path.empty() ? std::string(bundled_molecules_conf) : read_file(o.constants_path);
  const auto molecules = parse_molecules(text);
  std::ostringstream buf;
  if (cfg.format == OutputFormat::json) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto &[name, m] : molecules)
      j[name] = {{"B_cm-1", m.B_cm}, {"delta_alpha_A3", m.delta_alpha_A3}, {"spin_rule", to_string(m.spin)}};
    buf << j.dump(2) << '\n';
  } else {
    buf << text;
  }
  if (cfg.output == "-")
    std::cout << buf.str();
  else {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out)
      throw validation_error("cannot write '" + cfg.output + "'");
    out << buf.str();
  }
  return Exit::ok;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Field-free two-direction alignment of linear molecules kicked by elliptic pulses"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOptions opts;
  auto *simulate = app.add_subcommand("simulate", "Thermal alignment traces <cos^2 theta_{x,y,z}>(t)");
  auto *scan = app.add_subcommand("scan", "Maxima over time versus ellipticity a^2, with crossings");
  auto *distribution = app.add_subcommand("distribution", "Angular density |psi(theta, phi)|^2 at one time");
  auto *sudden = app.add_subcommand("validate-sudden", "Sudden kick versus finite-pulse propagation");
  auto *constants = app.add_subcommand("constants", "Print the molecule constants");
  for (auto *cmd : {simulate, scan, distribution, sudden, constants})
    add_common(cmd, opts);
  distribution->add_option("--time", opts.time_rot, "Time in rotational periods");
  distribution->add_flag("--pre-kick", opts.pre_kick, "Use the thermal ensemble before the kick");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return Exit::invalid;
  }

  try {
    CLI::App *chosen = app.get_subcommands().front();
    const RunConfig cfg = build_config(chosen->get_name(), opts);
    if (cfg.command == "constants")
      return run_constants(cfg, opts);
    const ResolvedRun run = resolve(cfg, load_molecules(opts));
    if (cfg.command == "simulate") return run_simulate(cfg, run);
    if (cfg.command == "scan") return run_scan(cfg, run);
    if (cfg.command == "distribution") return run_distribution(cfg, run);
    if (cfg.command == "validate-sudden") return run_validate_sudden(cfg, run);
    return Exit::invalid;
  } catch (const validation_error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::invalid;
  } catch (const std::domain_error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::invalid;
  } catch (const convergence_error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::not_converged;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::failure;
  }
}
