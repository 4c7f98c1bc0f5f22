#include "stargraph/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stargraph/analytic_smatrix.hpp"
#include "stargraph/discrete_smatrix.hpp"
#include "stargraph/observables.hpp"

namespace stargraph {

using nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", value);
  return buf;
}

void ScenarioConfig::validate() const {
  lattice.validate(graph);
  if (!(k_min > 0.0) || !(k_max > k_min) || k_points < 1) {
    throw SpecError("ScenarioConfig: need 0 < k_min < k_max and points >= 1");
  }
  if (smatrix_model != "continuum" && smatrix_model != "lattice") {
    throw SpecError("ScenarioConfig: smatrix model must be 'continuum' or 'lattice'");
  }
  if (observer_cadence < 1) {
    throw SpecError("ScenarioConfig: observer cadence must be >= 1");
  }
  auto check_grid = [](const std::vector<double>& grid, const char* what) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0)) throw SpecError(std::string("ScenarioConfig: ") + what +
                                            " values must be positive");
      if (i > 0 && !(grid[i] > grid[i - 1]))
        throw SpecError(std::string("ScenarioConfig: ") + what + " must be strictly increasing");
    }
  };
  check_grid(twomode_grid, "twomode k-grid");
  if (twomode_grid.size() < 2) {
    throw SpecError("ScenarioConfig: twomode k-grid needs at least two entries");
  }
}

namespace {

JunctionFamily family_from_strings(const std::string& kind, double parameter) {
  if (kind == "kirchhoff") return JunctionFamily::kirchhoff();
  if (kind == "decoupled") return JunctionFamily::decoupled();
  if (kind == "alpha") return JunctionFamily::alpha(parameter);
  if (kind == "beta") return JunctionFamily::beta(parameter);
  throw SpecError("unknown junction family '" + kind + "'");
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SpecError("cannot open config file '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SpecError("config parse error in '" + path + "': " + e.what());
  }
  ScenarioConfig c;
  try {
    if (j.contains("graph")) {
      read_if(j["graph"], "rays", c.graph.ray_count);
      read_if(j["graph"], "mass", c.graph.mass);
    }
    if (j.contains("lattice")) {
      read_if(j["lattice"], "delta", c.lattice.delta);
      read_if(j["lattice"], "sites", c.lattice.sites_per_ray);
      read_if(j["lattice"], "dt", c.lattice.dt);
    }
    if (j.contains("family")) {
      std::string kind = "kirchhoff";
      double parameter = 0.0;
      read_if(j["family"], "kind", kind);
      read_if(j["family"], "parameter", parameter);
      c.family = family_from_strings(kind, parameter);
    }
    if (j.contains("smatrix")) {
      read_if(j["smatrix"], "k_min", c.k_min);
      read_if(j["smatrix"], "k_max", c.k_max);
      read_if(j["smatrix"], "points", c.k_points);
      read_if(j["smatrix"], "model", c.smatrix_model);
    }
    if (j.contains("simulate")) {
      const json& sim = j["simulate"];
      read_if(sim, "carrier_k", c.packet.carrier_k);
      read_if(sim, "center", c.packet.center);
      read_if(sim, "width", c.packet.width);
      double re = c.packet.amplitude.real(), im = c.packet.amplitude.imag();
      read_if(sim, "amplitude_re", re);
      read_if(sim, "amplitude_im", im);
      c.packet.amplitude = Complex{re, im};
      read_if(sim, "cadence", c.observer_cadence);
      read_if(sim, "travel_factor", c.stop.travel_factor);
      read_if(sim, "clearance_sigmas", c.stop.clearance_sigmas);
    }
    if (j.contains("converge")) {
      read_if(j["converge"], "k", c.converge_k);
      read_if(j["converge"], "deltas", c.converge_deltas);
    }
    if (j.contains("twomode")) {
      read_if(j["twomode"], "k_grid", c.twomode_grid);
    }
    read_if(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw SpecError("config field error in '" + path + "': " + e.what());
  }
  return c;
}

std::string config_to_json(const ScenarioConfig& c) {
  json j;
  j["graph"] = {{"rays", c.graph.ray_count}, {"mass", c.graph.mass}};
  j["lattice"] = {{"delta", c.lattice.delta},
                  {"sites", c.lattice.sites_per_ray},
                  {"dt", c.lattice.dt}};
  j["family"] = {{"kind", family_name(c.family)}, {"parameter", c.family.parameter}};
  j["smatrix"] = {{"k_min", c.k_min},
                  {"k_max", c.k_max},
                  {"points", c.k_points},
                  {"model", c.smatrix_model}};
  j["simulate"] = {{"carrier_k", c.packet.carrier_k},
                   {"center", c.packet.center},
                   {"width", c.packet.width},
                   {"amplitude_re", c.packet.amplitude.real()},
                   {"amplitude_im", c.packet.amplitude.imag()},
                   {"cadence", c.observer_cadence},
                   {"travel_factor", c.stop.travel_factor},
                   {"clearance_sigmas", c.stop.clearance_sigmas}};
  j["converge"] = {{"k", c.converge_k}, {"deltas", c.converge_deltas}};
  j["twomode"] = {{"k_grid", c.twomode_grid}};
  j["seed"] = c.seed;
  return j.dump(2);
}

std::string run_smatrix_csv(const ScenarioConfig& config) {
  config.validate();
  const bool lattice_model = (config.smatrix_model == "lattice");
  std::ostringstream os;
  os << "k,re_R,im_R,re_T,im_T,theta,unitarity_residual\n";
  for (int i = 0; i < config.k_points; ++i) {
    const double k =
        config.k_points == 1
            ? config.k_min
            : config.k_min + (config.k_max - config.k_min) * i / (config.k_points - 1.0);
    const ScatteringAmplitudes amp =
        lattice_model ? discrete_reflection(k, config.lattice.delta, config.graph.ray_count)
                      : family_amplitudes(config.family, k, config.graph);
    os << format_double(k) << ',' << format_double(amp.reflection.real()) << ','
       << format_double(amp.reflection.imag()) << ',' << format_double(amp.transmission.real())
       << ',' << format_double(amp.transmission.imag()) << ',' << format_double(amp.phase) << ','
       << format_double(unitarity_residual(amp.reflection, config.graph.ray_count)) << '\n';
  }
  return os.str();
}

SimulateResult run_simulate(const ScenarioConfig& config) {
  config.validate();
  CouplingMask mask = CouplingMask::all(config.graph.ray_count);
  switch (config.family.kind) {
    case JunctionFamily::Kind::Kirchhoff:
      break;
    case JunctionFamily::Kind::Decoupled:
      mask = CouplingMask::sever_transmitted(config.graph.ray_count);
      break;
    default:
      throw SpecError("simulate: the oscillator network realizes only the kirchhoff and "
                      "decoupled junctions");
  }

  std::ostringstream os;
  const int s = config.graph.ray_count;
  os << "t,E_total,Q_total";
  for (int q = 0; q < s; ++q) os << ",E_ray" << q;
  for (int q = 0; q < s; ++q) os << ",Q_ray" << q;
  os << ",E_junction,energy_balance,charge_balance\n";

  Observer recorder{config.observer_cadence,
                    [&](long, double t, const FieldState& state) {
                      os << format_double(t) << ','
                         << format_double(total_energy(state, config.graph, config.lattice, &mask))
                         << ','
                         << format_double(total_charge(state, config.graph, config.lattice));
                      for (int q = 0; q < s; ++q)
                        os << ','
                           << format_double(ray_energy(state, config.graph, config.lattice, q));
                      for (int q = 0; q < s; ++q)
                        os << ','
                           << format_double(ray_charge(state, config.graph, config.lattice, q));
                      os << ','
                         << format_double(
                                junction_energy(state, config.graph, config.lattice, &mask))
                         << ','
                         << format_double(
                                junction_energy_balance(state, config.graph, config.lattice))
                         << ','
                         << format_double(
                                junction_charge_balance(state, config.graph, config.lattice))
                         << '\n';
                    }};

  SimulateResult result;
  result.measurement = run_scattering_experiment(config.graph, config.lattice, config.packet,
                                                 config.stop, mask, default_kernel_mode(),
                                                 std::span<const Observer>(&recorder, 1));
  result.csv = os.str();

  const ScatteringMeasurement& m = result.measurement;
  json summary;
  summary["config"] = json::parse(config_to_json(config));
  summary["stop_time"] = m.stop_time;
  summary["steps"] = m.steps;
  summary["initial_energy"] = m.initial_energy;
  summary["final_energy"] = m.final_energy;
  summary["initial_charge"] = m.initial_charge;
  summary["final_charge"] = m.final_charge;
  summary["ray_energy_fraction"] = m.ray_energy_fraction;
  summary["ray_charge_fraction"] = m.ray_charge_fraction;
  summary["junction_energy_fraction"] = m.junction_energy_fraction;
  summary["reflected_energy_fraction"] = m.reflected_energy_fraction;
  summary["energy_drift"] = m.energy_drift;
  summary["charge_drift"] = m.charge_drift;
  summary["energy_spread"] = m.energy_spread;
  summary["measured_reflection_prob"] = m.measured_reflection_prob;
  summary["predicted_reflection_prob_continuum"] = m.predicted_reflection_prob_continuum;
  summary["predicted_reflection_prob_lattice"] = m.predicted_reflection_prob_lattice;
  summary["relative_error_vs_continuum"] =
      std::abs(m.measured_reflection_prob - m.predicted_reflection_prob_continuum) /
      m.predicted_reflection_prob_continuum;
  result.summary_json = summary.dump(2);
  return result;
}

std::string run_converge_csv(const ScenarioConfig& config) {
  config.graph.validate();
  if (config.converge_deltas.size() < 3) {
    throw SpecError("converge: need a ladder of at least 3 delta values");
  }
  for (std::size_t i = 0; i < config.converge_deltas.size(); ++i) {
    const double d = config.converge_deltas[i];
    if (!(d > 0.0) || config.converge_k * d > 0.3) {
      throw SpecError("converge: every k*delta must be positive and <= 0.3 "
                      "(asymptotic regime)");
    }
    if (i > 0 && !(d < config.converge_deltas[i - 1])) {
      throw SpecError("converge: delta ladder must be strictly decreasing");
    }
  }

  std::ostringstream os;
  os << "delta,abs_error,ratio\n";
  std::vector<double> errors;
  for (std::size_t i = 0; i < config.converge_deltas.size(); ++i) {
    const double d = config.converge_deltas[i];
    const double err = continuum_limit_error(config.converge_k, d, config.graph.ray_count);
    errors.push_back(err);
    const double ratio = (i == 0) ? 0.0 : errors[i - 1] / err;
    os << format_double(d) << ',' << format_double(err) << ',' << format_double(ratio) << '\n';
  }
  // Log-log least squares for the convergence order.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double x = std::log(config.converge_deltas[i]);
    const double y = std::log(errors[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double n = static_cast<double>(errors.size());
  const double order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  os << format_double(0.0) << ',' << format_double(0.0) << ',' << format_double(order) << '\n';
  return os.str();
}

std::string run_twomode_csv(const ScenarioConfig& config) {
  config.validate();
  std::ostringstream os;
  os << "k1,k2,abs_energy_residual,abs_charge_residual\n";
  for (std::size_t i = 0; i < config.twomode_grid.size(); ++i) {
    for (std::size_t j = i + 1; j < config.twomode_grid.size(); ++j) {
      TwoModeSpec pair;
      pair.k1 = config.twomode_grid[i];
      pair.k2 = config.twomode_grid[j];
      pair.reflection1 = family_amplitudes(config.family, pair.k1, config.graph).reflection;
      pair.reflection2 = family_amplitudes(config.family, pair.k2, config.graph).reflection;
      os << format_double(pair.k1) << ',' << format_double(pair.k2) << ','
         << format_double(std::abs(energy_cross_residual(pair, config.graph.mass,
                                                         config.graph.ray_count)))
         << ','
         << format_double(std::abs(charge_cross_residual(pair, config.graph.ray_count))) << '\n';
    }
  }
  return os.str();
}

}  // namespace stargraph
