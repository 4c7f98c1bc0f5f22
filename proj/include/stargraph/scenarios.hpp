#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stargraph/dynamics.hpp"
#include "stargraph/graph_model.hpp"

namespace stargraph {

/// Resolved configuration for one scenario run. Loaded from a JSON file,
/// overridable field by field from the command line; defaults reproduce the
/// reference three-ray scattering experiment.
struct ScenarioConfig {
  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.05, 4000, 0.0125};
  JunctionFamily family = JunctionFamily::kirchhoff();

  // smatrix
  double k_min = 0.01;
  double k_max = 10.0;
  int k_points = 1000;
  std::string smatrix_model = "continuum";  // or "lattice"

  // simulate
  WavePacketSpec packet{2.0, 40.0, 2.5, Complex{1.0, 0.0}};
  int observer_cadence = 100;
  StopRule stop{};

  // converge
  double converge_k = 1.0;
  std::vector<double> converge_deltas{0.2, 0.1, 0.05, 0.025};

  // twomode
  std::vector<double> twomode_grid{0.5, 1.0, 2.0, 3.0};

  std::uint64_t seed = 12345;

  void validate() const;
};

ScenarioConfig load_config(const std::string& path);

// Full resolved config as JSON text (echoed into every summary record).
std::string config_to_json(const ScenarioConfig& config);

// Fixed header `k,re_R,im_R,re_T,im_T,theta,unitarity_residual`, one row per k.
std::string run_smatrix_csv(const ScenarioConfig& config);

struct SimulateResult {
  std::string csv;           // time series
  std::string summary_json;  // measured vs predicted fractions + resolved config
  ScatteringMeasurement measurement;
};

SimulateResult run_simulate(const ScenarioConfig& config);

// Header `delta,abs_error,ratio`; the final row has delta = 0 and carries the
// fitted convergence order in the ratio column.
std::string run_converge_csv(const ScenarioConfig& config);

// Header `k1,k2,abs_energy_residual,abs_charge_residual`, one row per pair.
std::string run_twomode_csv(const ScenarioConfig& config);

// Round-trip-exact float formatting used in every CSV (17 significant digits).
std::string format_double(double value);

}  // namespace stargraph
