// Command-line front end: analytic and lattice S-matrix tables, wave-packet
// scattering experiments, continuum-limit sweeps, two-mode conservation
// residuals, and the built-in validation suite.
//
// Exit codes: 0 ok, 2 usage/config error, 3 experiment invalid,
// 4 internal numerical failure.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stargraph/scenarios.hpp"
#include "stargraph/validation.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 12345;
  bool seed_set = false;
  bool quiet = false;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--out", opts.out_path, "output path (default: stdout)");
  cmd->add_option("--seed", opts.seed, "seed for randomized suites")
      ->each([&](const std::string&) { opts.seed_set = true; });
  cmd->add_flag("--quiet", opts.quiet, "suppress informational output");
}

void write_output(const CommonOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) {
    throw stargraph::SpecError("cannot open output file '" + opts.out_path + "'");
  }
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace stargraph;

  CLI::App app{"Scalar-field scattering on a star graph: analytic S-matrix and "
               "oscillator-network experiments"};
  app.require_subcommand(1);

  CommonOptions opts;
  ScenarioConfig overrides;  // flag values land here, applied over the config file

  bool has_rays = false, has_mass = false, has_delta = false, has_sites = false, has_dt = false;
  bool has_family = false, has_param = false;
  std::string family_kind;
  double family_param = 0.0;

  auto add_model_flags = [&](CLI::App* cmd) {
    cmd->add_option("--rays", overrides.graph.ray_count, "number of rays s")
        ->each([&](const std::string&) { has_rays = true; });
    cmd->add_option("--mass", overrides.graph.mass, "field mass m")
        ->each([&](const std::string&) { has_mass = true; });
    cmd->add_option("--delta", overrides.lattice.delta, "lattice constant")
        ->each([&](const std::string&) { has_delta = true; });
    cmd->add_option("--sites", overrides.lattice.sites_per_ray, "sites per ray N")
        ->each([&](const std::string&) { has_sites = true; });
    cmd->add_option("--dt", overrides.lattice.dt, "integrator time step")
        ->each([&](const std::string&) { has_dt = true; });
    cmd->add_option("--family", family_kind, "junction family: kirchhoff|decoupled|alpha|beta")
        ->each([&](const std::string&) { has_family = true; });
    cmd->add_option("--family-param", family_param, "alpha or beta constant")
        ->each([&](const std::string&) { has_param = true; });
  };

  // smatrix
  auto* smatrix = app.add_subcommand("smatrix", "tabulate R(k), T(k), theta(k)");
  add_common_flags(smatrix, opts);
  add_model_flags(smatrix);
  bool has_kmin = false, has_kmax = false, has_points = false, has_model = false;
  smatrix->add_option("--kmin", overrides.k_min, "grid start")
      ->each([&](const std::string&) { has_kmin = true; });
  smatrix->add_option("--kmax", overrides.k_max, "grid end")
      ->each([&](const std::string&) { has_kmax = true; });
  smatrix->add_option("--points", overrides.k_points, "grid size")
      ->each([&](const std::string&) { has_points = true; });
  smatrix->add_option("--model", overrides.smatrix_model, "continuum|lattice")
      ->each([&](const std::string&) { has_model = true; });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "wave-packet scattering experiment");
  add_common_flags(simulate, opts);
  add_model_flags(simulate);
  bool has_k0 = false, has_center = false, has_width = false, has_cadence = false;
  simulate->add_option("--carrier-k", overrides.packet.carrier_k, "packet carrier wavenumber")
      ->each([&](const std::string&) { has_k0 = true; });
  simulate->add_option("--center", overrides.packet.center, "initial packet center")
      ->each([&](const std::string&) { has_center = true; });
  simulate->add_option("--width", overrides.packet.width, "Gaussian width sigma")
      ->each([&](const std::string&) { has_width = true; });
  simulate->add_option("--cadence", overrides.observer_cadence, "observer cadence in steps")
      ->each([&](const std::string&) { has_cadence = true; });

  // converge
  auto* converge = app.add_subcommand("converge", "continuum-limit error sweep");
  add_common_flags(converge, opts);
  add_model_flags(converge);
  bool has_ck = false, has_deltas = false;
  std::vector<double> deltas;
  converge->add_option("--k", overrides.converge_k, "wavenumber for the sweep")
      ->each([&](const std::string&) { has_ck = true; });
  converge->add_option("--deltas", deltas, "delta ladder (decreasing)")
      ->each([&](const std::string&) { has_deltas = true; });

  // twomode
  auto* twomode = app.add_subcommand("twomode", "two-mode conservation residuals");
  add_common_flags(twomode, opts);
  add_model_flags(twomode);
  bool has_grid = false;
  std::vector<double> k_grid;
  twomode->add_option("--k-grid", k_grid, "wavenumber grid (increasing)")
      ->each([&](const std::string&) { has_grid = true; });

  // validate
  auto* validate = app.add_subcommand("validate", "run every module's invariant suite");
  add_common_flags(validate, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ScenarioConfig config =
        opts.config_path.empty() ? ScenarioConfig{} : load_config(opts.config_path);
    if (opts.seed_set) config.seed = opts.seed;
    if (has_rays) config.graph.ray_count = overrides.graph.ray_count;
    if (has_mass) config.graph.mass = overrides.graph.mass;
    if (has_delta) config.lattice.delta = overrides.lattice.delta;
    if (has_sites) config.lattice.sites_per_ray = overrides.lattice.sites_per_ray;
    if (has_dt) config.lattice.dt = overrides.lattice.dt;
    if (has_family || has_param) {
      if (!has_family) family_kind = family_name(config.family);
      if (!has_param) family_param = config.family.parameter;
      if (family_kind == "kirchhoff") config.family = JunctionFamily::kirchhoff();
      else if (family_kind == "decoupled") config.family = JunctionFamily::decoupled();
      else if (family_kind == "alpha") config.family = JunctionFamily::alpha(family_param);
      else if (family_kind == "beta") config.family = JunctionFamily::beta(family_param);
      else throw SpecError("unknown junction family '" + family_kind + "'");
    }
    if (has_kmin) config.k_min = overrides.k_min;
    if (has_kmax) config.k_max = overrides.k_max;
    if (has_points) config.k_points = overrides.k_points;
    if (has_model) config.smatrix_model = overrides.smatrix_model;
    if (has_k0) config.packet.carrier_k = overrides.packet.carrier_k;
    if (has_center) config.packet.center = overrides.packet.center;
    if (has_width) config.packet.width = overrides.packet.width;
    if (has_cadence) config.observer_cadence = overrides.observer_cadence;
    if (has_ck) config.converge_k = overrides.converge_k;
    if (has_deltas) config.converge_deltas = deltas;
    if (has_grid) config.twomode_grid = k_grid;

    if (smatrix->parsed()) {
      write_output(opts, run_smatrix_csv(config));
    } else if (simulate->parsed()) {
      SimulateResult result = run_simulate(config);
      write_output(opts, result.csv);
      // Summary goes to stdout when the CSV went to a file, else to stderr.
      if (!opts.quiet) {
        (opts.out_path.empty() ? std::cerr : std::cout) << result.summary_json << "\n";
      }
    } else if (converge->parsed()) {
      write_output(opts, run_converge_csv(config));
    } else if (twomode->parsed()) {
      write_output(opts, run_twomode_csv(config));
    } else if (validate->parsed()) {
      const ValidationReport report = run_validation(config.seed);
      if (!opts.quiet || !report.all_pass()) {
        write_output(opts, format_report(report));
      }
      return report.all_pass() ? 0 : 1;
    }
    return 0;
  } catch (const SpecError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ExperimentInvalid& e) {
    std::cerr << "experiment invalid: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
}
