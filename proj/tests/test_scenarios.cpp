#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stargraph/scenarios.hpp"

using namespace stargraph;

namespace {

std::vector<std::vector<double>> parse_csv(const std::string& csv, std::string* header) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& text) {
    path = std::string(std::tmpnam(nullptr)) + ".json";
    std::ofstream(path) << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("smatrix table: universal junction gives constant columns") {
  ScenarioConfig config;
  config.k_points = 50;
  std::string header;
  const auto rows = parse_csv(run_smatrix_csv(config), &header);
  CHECK(header == "k,re_R,im_R,re_T,im_T,theta,unitarity_residual");
  REQUIRE(rows.size() == 50);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 7);
    CHECK(row[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(row[2] == 0.0);
    CHECK(row[3] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(row[6]) < 1e-14);
  }
  CHECK(rows.front()[0] == doctest::Approx(0.01));
  CHECK(rows.back()[0] == doctest::Approx(10.0));
}

TEST_CASE("smatrix table: decoupled junction reflects everything") {
  ScenarioConfig config;
  config.family = JunctionFamily::decoupled();
  config.k_points = 10;
  const auto rows = parse_csv(run_smatrix_csv(config), nullptr);
  for (const auto& row : rows) {
    CHECK(row[1] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(row[3]) < 1e-15);
    CHECK(std::abs(row[4]) < 1e-15);
  }
}

TEST_CASE("smatrix table: lattice model stays unitary") {
  ScenarioConfig config;
  config.smatrix_model = "lattice";
  config.k_min = 0.1;
  config.k_max = 0.9 * 3.141592653589793 / config.lattice.delta;
  config.k_points = 200;
  const auto rows = parse_csv(run_smatrix_csv(config), nullptr);
  for (const auto& row : rows) CHECK(std::abs(row[6]) < 1e-13);
}

TEST_CASE("CSV output is byte-deterministic") {
  ScenarioConfig config;
  config.k_points = 64;
  CHECK(run_smatrix_csv(config) == run_smatrix_csv(config));
  CHECK(run_converge_csv(config) == run_converge_csv(config));
  CHECK(run_twomode_csv(config) == run_twomode_csv(config));
}

TEST_CASE("float formatting round-trips exactly") {
  for (double v : {-1.0 / 3.0, 2.0 / 3.0, 1e-17, 12345.6789, 0.0, -2.5e300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.0) == "0.0000000000000000e+00");
}

TEST_CASE("convergence sweep reports first order and decreasing errors") {
  ScenarioConfig config;  // k = 1, deltas {0.2, 0.1, 0.05, 0.025}
  std::string header;
  const auto rows = parse_csv(run_converge_csv(config), &header);
  CHECK(header == "delta,abs_error,ratio");
  REQUIRE(rows.size() == 5);  // 4 ladder rows + order sentinel
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    CHECK(rows[i][1] < rows[i - 1][1]);                       // strictly decreasing
    CHECK(rows[i][2] == doctest::Approx(2.0).epsilon(0.1));   // halving ratio
  }
  const auto& sentinel = rows.back();
  CHECK(sentinel[0] == 0.0);
  CHECK(sentinel[2] == doctest::Approx(1.0).epsilon(0.1));  // fitted order

  // In the deep asymptotic regime the error matches k*delta/9.
  ScenarioConfig fine;
  fine.converge_deltas = {0.1, 0.05, 0.025};
  const auto fine_rows = parse_csv(run_converge_csv(fine), nullptr);
  for (std::size_t i = 0; i + 1 < fine_rows.size(); ++i) {
    CHECK(fine_rows[i][1] ==
          doctest::Approx(fine_rows[i][0] / 9.0).epsilon(0.15));
  }
}

TEST_CASE("convergence sweep rejects bad ladders") {
  ScenarioConfig config;
  config.converge_deltas = {0.2, 0.1};  // too short
  CHECK_THROWS_AS(run_converge_csv(config), SpecError);
  config.converge_deltas = {0.5, 0.25, 0.125};  // k*delta > 0.3
  CHECK_THROWS_AS(run_converge_csv(config), SpecError);
  config.converge_deltas = {0.1, 0.2, 0.05};  // not decreasing
  CHECK_THROWS_AS(run_converge_csv(config), SpecError);
}

TEST_CASE("two-mode residual table separates the families") {
  ScenarioConfig config;
  std::string header;

  const auto kirchhoff = parse_csv(run_twomode_csv(config), &header);
  CHECK(header == "k1,k2,abs_energy_residual,abs_charge_residual");
  REQUIRE(kirchhoff.size() == 6);  // pairs from a 4-point grid
  for (const auto& row : kirchhoff) {
    CHECK(row[2] < 1e-12);
    CHECK(row[3] < 1e-12);
  }

  config.family = JunctionFamily::alpha(1.0);
  bool charge_violated = false;
  for (const auto& row : parse_csv(run_twomode_csv(config), nullptr)) {
    CHECK(row[2] < 1e-12);  // energy conserved along the whole family
    charge_violated = charge_violated || row[3] > 1e-6;
  }
  CHECK(charge_violated);

  config.family = JunctionFamily::beta(1.0);
  bool energy_violated = false;
  for (const auto& row : parse_csv(run_twomode_csv(config), nullptr)) {
    CHECK(row[3] < 1e-12);  // charge conserved along the whole family
    energy_violated = energy_violated || row[2] > 1e-6;
  }
  CHECK(energy_violated);
}

TEST_CASE("config files load and flags of the caller win by field") {
  TempFile file(R"({
    "graph": {"rays": 4, "mass": 0.5},
    "lattice": {"delta": 0.1, "sites": 800, "dt": 0.02},
    "family": {"kind": "beta", "parameter": 1.5},
    "smatrix": {"k_min": 0.2, "k_max": 5.0, "points": 17, "model": "lattice"},
    "simulate": {"carrier_k": 1.0, "center": 30.0, "width": 3.0, "cadence": 50},
    "converge": {"k": 2.0, "deltas": [0.1, 0.05, 0.025]},
    "twomode": {"k_grid": [1.0, 2.0]},
    "seed": 99
  })");
  const ScenarioConfig c = load_config(file.path);
  CHECK(c.graph.ray_count == 4);
  CHECK(c.graph.mass == 0.5);
  CHECK(c.lattice.sites_per_ray == 800);
  CHECK(c.family.kind == JunctionFamily::Kind::Beta);
  CHECK(c.family.parameter == 1.5);
  CHECK(c.k_points == 17);
  CHECK(c.smatrix_model == "lattice");
  CHECK(c.packet.center == 30.0);
  CHECK(c.observer_cadence == 50);
  CHECK(c.converge_k == 2.0);
  CHECK(c.twomode_grid == std::vector<double>{1.0, 2.0});
  CHECK(c.seed == 99);
}

TEST_CASE("partial configs keep defaults for missing fields") {
  TempFile file(R"({"graph": {"rays": 5}})");
  const ScenarioConfig c = load_config(file.path);
  CHECK(c.graph.ray_count == 5);
  CHECK(c.graph.mass == 1.0);            // default
  CHECK(c.lattice.sites_per_ray == 4000);  // default
}

TEST_CASE("broken configs raise usage errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), SpecError);
  TempFile garbage("{not json");
  CHECK_THROWS_AS(load_config(garbage.path), SpecError);
  TempFile wrong_type(R"({"graph": {"rays": "three"}})");
  CHECK_THROWS_AS(load_config(wrong_type.path), SpecError);
  TempFile bad_family(R"({"family": {"kind": "perfectly-matched-layer"}})");
  CHECK_THROWS_AS(load_config(bad_family.path), SpecError);
}

TEST_CASE("config validation catches inconsistent scenario settings") {
  ScenarioConfig config;
  config.k_min = -1.0;
  CHECK_THROWS_AS(config.validate(), SpecError);
  config = ScenarioConfig{};
  config.smatrix_model = "spectral";
  CHECK_THROWS_AS(config.validate(), SpecError);
  config = ScenarioConfig{};
  config.twomode_grid = {2.0, 1.0};
  CHECK_THROWS_AS(config.validate(), SpecError);
}

TEST_CASE("config echo round-trips through the JSON serializer") {
  ScenarioConfig c;
  c.graph.ray_count = 4;
  c.family = JunctionFamily::alpha(0.7);
  c.seed = 31337;
  TempFile file(config_to_json(c));
  const ScenarioConfig back = load_config(file.path);
  CHECK(back.graph.ray_count == 4);
  CHECK(back.family.kind == JunctionFamily::Kind::Alpha);
  CHECK(back.family.parameter == 0.7);
  CHECK(back.seed == 31337);
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("simulate runs a small scattering scenario end to end") {
  ScenarioConfig config;
  config.lattice = LatticeSpec{0.1, 1200, 0.025};
  config.packet = WavePacketSpec{2.0, 25.0, 2.0, Complex{1.0, 0.0}};
  config.observer_cadence = 200;
  const SimulateResult result = run_simulate(config);

  std::string header;
  const auto rows = parse_csv(result.csv, &header);
  CHECK(header ==
        "t,E_total,Q_total,E_ray0,E_ray1,E_ray2,Q_ray0,Q_ray1,Q_ray2,E_junction,"
        "energy_balance,charge_balance");
  REQUIRE(rows.size() > 5);
  CHECK(rows.front()[0] == 0.0);
  const double e0 = rows.front()[1];
  for (const auto& row : rows) {
    CHECK(std::abs(row[1] - e0) < 1e-4 * e0);  // energy column stays put
    CHECK(std::abs(row[10]) < 1e-9);           // junction balances at round-off
    CHECK(std::abs(row[11]) < 1e-9);
  }
  // The summary echoes the resolved config and the measured fractions.
  CHECK(result.summary_json.find("\"config\"") != std::string::npos);
  CHECK(result.summary_json.find("\"reflected_energy_fraction\"") != std::string::npos);
  // Coarse lattice (k0*delta = 0.2) plus the narrow-band start shift the
  // fraction a few percent above the continuum 1/9.
  CHECK(result.measurement.reflected_energy_fraction ==
        doctest::Approx(1.0 / 9.0).epsilon(0.10));
}

TEST_CASE("simulate rejects junction families without an oscillator realization") {
  ScenarioConfig config;
  config.family = JunctionFamily::alpha(1.0);
  CHECK_THROWS_AS(run_simulate(config), SpecError);
}
