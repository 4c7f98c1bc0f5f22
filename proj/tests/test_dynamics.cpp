#include <doctest.h>

#include <cmath>
#include <vector>

#include "stargraph/discrete_smatrix.hpp"
#include "stargraph/dynamics.hpp"
#include "stargraph/observables.hpp"

using namespace stargraph;

namespace {

// Max pointwise deviation between two states over the junction and the first
// `sites` sites of each ray (the tail near the Dirichlet closure is excluded
// when comparing against semi-infinite mode solutions).
double mode_deviation(const FieldState& a, const FieldState& b, int sites) {
  double worst = std::abs(a.junction_value - b.junction_value);
  worst = std::max(worst, std::abs(a.junction_velocity - b.junction_velocity));
  for (int q = 0; q < a.ray_count(); ++q) {
    for (int i = 0; i < sites; ++i) {
      worst = std::max(worst, std::abs(a.ray_values[q][i] - b.ray_values[q][i]));
      worst = std::max(worst, std::abs(a.ray_velocities[q][i] - b.ray_velocities[q][i]));
    }
  }
  return worst;
}

double state_distance(const FieldState& a, const FieldState& b) {
  double d2 = 0.0, n2 = 0.0;
  auto acc = [&](Complex x, Complex y) {
    d2 += std::norm(x - y);
    n2 += std::norm(y);
  };
  acc(a.junction_value, b.junction_value);
  acc(a.junction_velocity, b.junction_velocity);
  for (int q = 0; q < a.ray_count(); ++q) {
    for (int i = 0; i < a.sites_per_ray(); ++i) {
      acc(a.ray_values[q][i], b.ray_values[q][i]);
      acc(a.ray_velocities[q][i], b.ray_velocities[q][i]);
    }
  }
  return std::sqrt(d2 / n2);
}

}  // namespace

TEST_CASE("packet preconditions") {
  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.1, 400, 0.025};
  const WavePacketSpec good{2.0, 20.0, 2.0, Complex{1.0, 0.0}};
  CHECK_NOTHROW(good.validate(graph, lattice));
  // sigma = 10*delta = 1 but center - 5*sigma <= 0
  const WavePacketSpec at_junction{2.0, 4.0, 1.0, Complex{1.0, 0.0}};
  CHECK_THROWS_AS(at_junction.validate(graph, lattice), SpecError);
  // envelope narrower than 10 lattice sites
  const WavePacketSpec unresolved{2.0, 20.0, 0.5, Complex{1.0, 0.0}};
  CHECK_THROWS_AS(unresolved.validate(graph, lattice), SpecError);
  // packet overlapping the far boundary
  const WavePacketSpec at_wall{2.0, 38.0, 2.0, Complex{1.0, 0.0}};
  CHECK_THROWS_AS(at_wall.validate(graph, lattice), SpecError);
}

TEST_CASE("initialized packet peaks at the envelope center and carries charge") {
  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.1, 400, 0.025};
  WavePacketSpec packet{2.0, 20.0, 2.0, Complex{0.8, -0.3}};
  FieldState state = init_gaussian_packet(graph, lattice, packet);
  // site with n*delta = center is index 199
  CHECK(std::abs(state.ray_values[0][199]) == doctest::Approx(std::abs(packet.amplitude)));
  CHECK(total_charge(state, graph, lattice) > 0.0);
  // everything else starts dark
  CHECK(std::abs(state.junction_value) == 0.0);
  for (int q = 1; q < 3; ++q)
    for (const Complex& z : state.ray_values[q]) CHECK(z == Complex{0.0, 0.0});
}

TEST_CASE("stepping the zero state leaves it zero") {
  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.1, 50, 0.01};
  FieldState state = make_field_state(graph, lattice);
  Stepper stepper(graph, lattice);
  for (int i = 0; i < 10; ++i) stepper.step(state);
  CHECK(state.max_abs() == 0.0);
  CHECK(state.time == doctest::Approx(0.1));
}

TEST_CASE("one step tracks the exact lattice mode to third order") {
  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.1, 60, 1e-3};
  const double k = 1.0;
  const Complex r = discrete_reflection(k, lattice.delta, 3).reflection;

  FieldState state = sample_discrete_mode(graph, lattice, k, r, 0.0);
  Stepper stepper(graph, lattice);
  stepper.step(state);
  const FieldState exact = sample_discrete_mode(graph, lattice, k, r, lattice.dt);
  // Exclude the last two sites: the Dirichlet closure differs from the
  // semi-infinite mode there.
  CHECK(mode_deviation(state, exact, 58) / exact.max_abs() < 1e-9);
}

TEST_CASE("halving dt reduces the mode deviation fourfold") {
  StarGraphSpec graph{3, 1.0};
  const double k = 1.0, T = 0.1;
  const Complex r = discrete_reflection(k, 0.1, 3).reflection;

  auto deviation = [&](double dt) {
    LatticeSpec lattice{0.1, 60, dt};
    FieldState state = sample_discrete_mode(graph, lattice, k, r, 0.0);
    Stepper stepper(graph, lattice);
    const long n = std::lround(T / dt);
    for (long i = 0; i < n; ++i) stepper.step(state);
    // The Dirichlet-closure mismatch at the wall radiates inward; staying 15
    // sites clear of it leaves only the integrator error.
    return mode_deviation(state, sample_discrete_mode(graph, lattice, k, r, T), 45);
  };

  const double coarse = deviation(1e-3);
  const double fine = deviation(5e-4);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("evolve with zero steps is the identity; observers fire on cadence") {
  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.1, 300, 0.025};
  WavePacketSpec packet{2.0, 15.0, 1.5, Complex{1.0, 0.0}};
  FieldState state = init_gaussian_packet(graph, lattice, packet);
  const FieldState before = state;
  Stepper stepper(graph, lattice);

  std::vector<long> seen;
  Observer obs{10, [&](long i, double, const FieldState&) { seen.push_back(i); }};

  stepper.evolve(state, 0, std::span<const Observer>(&obs, 1));
  CHECK(state_distance(state, before) == 0.0);
  CHECK(seen == std::vector<long>{0});

  seen.clear();
  stepper.evolve(state, 25, std::span<const Observer>(&obs, 1));
  CHECK(seen == std::vector<long>{0, 10, 20, 25});
}

TEST_CASE("leapfrog is time-reversible") {
  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.1, 300, 0.025};
  WavePacketSpec packet{2.0, 15.0, 1.5, Complex{1.0, 0.0}};
  FieldState state = init_gaussian_packet(graph, lattice, packet);
  const FieldState initial = state;
  Stepper stepper(graph, lattice);
  stepper.evolve(state, 1000);
  negate_velocities(state);
  stepper.evolve(state, 1000);
  negate_velocities(state);
  CHECK(state_distance(state, initial) < 1e-9);
}

TEST_CASE("serial and OpenMP kernels produce bit-identical trajectories") {
  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.1, 300, 0.025};
  WavePacketSpec packet{2.0, 15.0, 1.5, Complex{1.0, 0.0}};

  FieldState a = init_gaussian_packet(graph, lattice, packet);
  FieldState b = a;
  Stepper serial(graph, lattice, CouplingMask::all(3), KernelMode::Serial);
  Stepper omp(graph, lattice, CouplingMask::all(3), KernelMode::OpenMP);
  serial.evolve(a, 500);
  omp.evolve(b, 500);
  CHECK(state_distance(a, b) == 0.0);
}

TEST_CASE("two joined rays transmit a packet with negligible reflection") {
  StarGraphSpec graph{2, 1.0};
  LatticeSpec lattice{0.05, 3000, 0.0125};
  WavePacketSpec packet{2.0, 30.0, 5.0, Complex{1.0, 0.0}};
  const auto m = run_scattering_experiment(graph, lattice, packet, {});
  CHECK(m.reflected_energy_fraction <= 1e-3);
  CHECK(m.ray_energy_fraction[1] > 0.99);
  CHECK(m.charge_drift < 1e-10);
  CHECK(m.energy_drift < 1e-5);
}

TEST_CASE("severed couplings keep the transmitted rays exactly dark") {
  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.1, 1000, 0.025};
  WavePacketSpec packet{2.0, 20.0, 2.0, Complex{1.0, 0.0}};
  const auto m = run_scattering_experiment(graph, lattice, packet, {},
                                           CouplingMask::sever_transmitted(3));
  CHECK(m.ray_energy_fraction[1] == 0.0);
  CHECK(m.ray_energy_fraction[2] == 0.0);
  CHECK(m.reflected_energy_fraction + m.junction_energy_fraction ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.predicted_reflection_prob_continuum == 1.0);
}

TEST_CASE("runs that would touch the far boundary are rejected") {
  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.1, 400, 0.025};  // ray length 40
  WavePacketSpec packet{2.0, 25.0, 2.0, Complex{1.0, 0.0}};
  CHECK_THROWS_AS(run_scattering_experiment(graph, lattice, packet, {}), ExperimentInvalid);
}

TEST_CASE("group velocity stays below the lattice signal speed") {
  for (double k : {0.5, 1.0, 2.0, 5.0}) {
    const double vg = lattice_group_velocity(k, 1.0, 0.05);
    CHECK(vg > 0.0);
    CHECK(vg < 1.0);
  }
}

TEST_CASE("coupling masks") {
  CHECK(CouplingMask::all(3).coupled_count() == 3);
  const auto severed = CouplingMask::sever_transmitted(3);
  CHECK(severed.coupled_count() == 1);
  CHECK(severed.is_coupled(0));
  CHECK_FALSE(severed.is_coupled(1));
}
