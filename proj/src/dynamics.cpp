#include "stargraph/dynamics.hpp"

#include <cmath>

#include "stargraph/analytic_smatrix.hpp"
#include "stargraph/discrete_smatrix.hpp"
#include "stargraph/observables.hpp"

namespace stargraph {

void WavePacketSpec::validate(const StarGraphSpec& graph, const LatticeSpec& lattice) const {
  lattice.validate(graph);
  if (!(carrier_k > 0.0)) {
    throw SpecError("WavePacketSpec: carrier_k must be > 0");
  }
  if (!(width > 0.0)) {
    throw SpecError("WavePacketSpec: width must be > 0");
  }
  if (!(center - 5.0 * width > 0.0)) {
    throw SpecError("WavePacketSpec: packet overlaps the junction, need center - 5*width > 0");
  }
  if (!(center + 5.0 * width < lattice.sites_per_ray * lattice.delta)) {
    throw SpecError("WavePacketSpec: packet overlaps the far boundary, need "
                    "center + 5*width < N*delta");
  }
  if (!(width >= 10.0 * lattice.delta)) {
    throw SpecError("WavePacketSpec: unresolved envelope, need width >= 10*delta");
  }
}

int CouplingMask::coupled_count() const {
  int n = 0;
  for (auto c : coupled) n += (c != 0);
  return n;
}

KernelMode default_kernel_mode() {
#ifdef _OPENMP
  return KernelMode::OpenMP;
#else
  return KernelMode::Serial;
#endif
}

namespace {

// Acceleration of one ray: first site couples to `left` (the junction value,
// or nothing when severed), last site sees the Dirichlet closure phi_{N+1}=0.
void accel_ray_serial(const Complex* phi, Complex* acc, int n, Complex phi0, bool coupled,
                      double inv_d2, double m2) {
  if (n == 0) return;
  const Complex left = coupled ? phi0 - phi[0] : Complex{0.0, 0.0};
  acc[0] = inv_d2 * ((n > 1 ? phi[1] : Complex{0.0, 0.0}) - phi[0] + left) - m2 * phi[0];
  for (int i = 1; i + 1 < n; ++i) {
    acc[i] = inv_d2 * (phi[i + 1] + phi[i - 1] - 2.0 * phi[i]) - m2 * phi[i];
  }
  if (n > 1) {
    acc[n - 1] = inv_d2 * (phi[n - 2] - 2.0 * phi[n - 1]) - m2 * phi[n - 1];
  }
}

void accel_ray_omp(const Complex* phi, Complex* acc, int n, Complex phi0, bool coupled,
                   double inv_d2, double m2) {
  if (n == 0) return;
  const Complex left = coupled ? phi0 - phi[0] : Complex{0.0, 0.0};
  acc[0] = inv_d2 * ((n > 1 ? phi[1] : Complex{0.0, 0.0}) - phi[0] + left) - m2 * phi[0];
#pragma omp parallel for schedule(static)
  for (int i = 1; i < n - 1; ++i) {
    acc[i] = inv_d2 * (phi[i + 1] + phi[i - 1] - 2.0 * phi[i]) - m2 * phi[i];
  }
  if (n > 1) {
    acc[n - 1] = inv_d2 * (phi[n - 2] - 2.0 * phi[n - 1]) - m2 * phi[n - 1];
  }
}

void axpy_serial(Complex* y, const Complex* x, int n, double a) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy_omp(Complex* y, const Complex* x, int n, double a) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

void compute_accelerations(const FieldState& state, const StarGraphSpec& graph,
                           const LatticeSpec& lattice, const CouplingMask& mask,
                           KernelMode mode, Accelerations& out) {
  const int s = graph.ray_count;
  const int n = lattice.sites_per_ray;
  const double inv_d2 = 1.0 / (lattice.delta * lattice.delta);
  const double m2 = graph.mass * graph.mass;

  if (static_cast<int>(out.rays.size()) != s ||
      (s > 0 && static_cast<int>(out.rays.front().size()) != n)) {
    out.rays.assign(s, std::vector<Complex>(n));
  }

  Complex sum{0.0, 0.0};
  int coupled = 0;
  for (int q = 0; q < s; ++q) {
    if (mask.is_coupled(q)) {
      sum += state.ray_values[q][0];
      ++coupled;
    }
  }
  out.junction = inv_d2 * (sum - static_cast<double>(coupled) * state.junction_value) -
                 m2 * state.junction_value;

  for (int q = 0; q < s; ++q) {
    if (mode == KernelMode::OpenMP) {
      accel_ray_omp(state.ray_values[q].data(), out.rays[q].data(), n, state.junction_value,
                    mask.is_coupled(q), inv_d2, m2);
    } else {
      accel_ray_serial(state.ray_values[q].data(), out.rays[q].data(), n, state.junction_value,
                       mask.is_coupled(q), inv_d2, m2);
    }
  }
}

Stepper::Stepper(const StarGraphSpec& graph, const LatticeSpec& lattice, CouplingMask mask,
                 KernelMode mode)
    : graph_(graph), lattice_(lattice), mask_(std::move(mask)), mode_(mode) {
  lattice_.validate(graph_);
  if (static_cast<int>(mask_.coupled.size()) != graph_.ray_count) {
    throw SpecError("Stepper: coupling mask size does not match ray count");
  }
}

Stepper::Stepper(const StarGraphSpec& graph, const LatticeSpec& lattice)
    : Stepper(graph, lattice, CouplingMask::all(graph.ray_count)) {}

void Stepper::half_kick(FieldState& state, double half_dt) {
  state.junction_velocity += half_dt * accel_.junction;
  for (int q = 0; q < state.ray_count(); ++q) {
    if (mode_ == KernelMode::OpenMP) {
      axpy_omp(state.ray_velocities[q].data(), accel_.rays[q].data(), state.sites_per_ray(),
               half_dt);
    } else {
      axpy_serial(state.ray_velocities[q].data(), accel_.rays[q].data(), state.sites_per_ray(),
                  half_dt);
    }
  }
}

void Stepper::drift(FieldState& state, double dt) {
  state.junction_value += dt * state.junction_velocity;
  for (int q = 0; q < state.ray_count(); ++q) {
    if (mode_ == KernelMode::OpenMP) {
      axpy_omp(state.ray_values[q].data(), state.ray_velocities[q].data(),
               state.sites_per_ray(), dt);
    } else {
      axpy_serial(state.ray_values[q].data(), state.ray_velocities[q].data(),
                  state.sites_per_ray(), dt);
    }
  }
}

void Stepper::check_finite(const FieldState& state) const {
  if (!state.is_finite()) {
    throw NumericalError("integration blow-up after " + std::to_string(steps_taken_) +
                         " steps, max |phi| = " + std::to_string(state.max_abs()));
  }
}

void Stepper::step(FieldState& state, bool reversed) {
  if (state.ray_count() != graph_.ray_count || state.sites_per_ray() != lattice_.sites_per_ray) {
    throw SpecError("Stepper::step: state shape does not match the specs");
  }
  const double dt = reversed ? -lattice_.dt : lattice_.dt;
  compute_accelerations(state, graph_, lattice_, mask_, mode_, accel_);
  half_kick(state, 0.5 * dt);
  drift(state, dt);
  compute_accelerations(state, graph_, lattice_, mask_, mode_, accel_);
  half_kick(state, 0.5 * dt);
  state.time += dt;
  ++steps_taken_;
  if (steps_taken_ % 256 == 0 ||
      !(std::isfinite(state.junction_value.real()) && std::isfinite(state.junction_value.imag()))) {
    check_finite(state);
  }
}

void Stepper::evolve(FieldState& state, long n_steps, std::span<const Observer> observers) {
  if (n_steps < 0) {
    throw SpecError("Stepper::evolve: n_steps must be >= 0");
  }
  for (const Observer& obs : observers) {
    if (obs.cadence > 0 && obs.callback) obs.callback(0, state.time, state);
  }
  for (long i = 1; i <= n_steps; ++i) {
    step(state);
    for (const Observer& obs : observers) {
      if (obs.cadence > 0 && obs.callback && (i % obs.cadence == 0 || i == n_steps)) {
        obs.callback(i, state.time, state);
      }
    }
  }
  check_finite(state);
}

FieldState init_gaussian_packet(const StarGraphSpec& graph, const LatticeSpec& lattice,
                                const WavePacketSpec& packet) {
  packet.validate(graph, lattice);
  FieldState state = make_field_state(graph, lattice);
  const double omega = discrete_dispersion(packet.carrier_k, graph.mass, lattice.delta);
  const Complex minus_i_omega{0.0, -omega};
  const double inv_4s2 = 1.0 / (4.0 * packet.width * packet.width);
  for (int i = 0; i < lattice.sites_per_ray; ++i) {
    const double x = (i + 1) * lattice.delta;
    const double d = x - packet.center;
    const Complex value = packet.amplitude * std::exp(-d * d * inv_4s2) *
                          std::exp(Complex{0.0, -packet.carrier_k * x});
    state.ray_values[0][i] = value;
    state.ray_velocities[0][i] = minus_i_omega * value;
  }
  return state;
}

void negate_velocities(FieldState& state) {
  state.junction_velocity = -state.junction_velocity;
  for (auto& ray : state.ray_velocities)
    for (auto& v : ray) v = -v;
}

double lattice_group_velocity(double k, double mass, double delta) {
  return std::sin(k * delta) / (delta * discrete_dispersion(k, mass, delta));
}

ScatteringMeasurement run_scattering_experiment(const StarGraphSpec& graph,
                                                const LatticeSpec& lattice,
                                                const WavePacketSpec& packet,
                                                const StopRule& stop, const CouplingMask& mask,
                                                KernelMode mode,
                                                std::span<const Observer> observers) {
  packet.validate(graph, lattice);
  const double v_g = lattice_group_velocity(packet.carrier_k, graph.mass, lattice.delta);
  const double stop_time = stop.travel_factor * packet.center / v_g;
  const long n_steps = static_cast<long>(std::ceil(stop_time / lattice.dt));
  if (n_steps > stop.max_steps) {
    throw ExperimentInvalid("run_scattering_experiment: " + std::to_string(n_steps) +
                            " steps exceed the stop-rule budget");
  }
  // Causality buffer: nothing moves faster than the maximal group velocity
  // (bounded by 1), so the far boundary stays untouched iff the initial outer
  // edge plus the run duration keeps clear of it.
  const double front = packet.center + stop.clearance_sigmas * packet.width + stop_time;
  const double ray_length = lattice.sites_per_ray * lattice.delta;
  if (!(front <= ray_length - stop.clearance_sigmas * packet.width)) {
    throw ExperimentInvalid(
        "run_scattering_experiment: signal front would reach the far boundary "
        "(need N*delta >= " + std::to_string(front + stop.clearance_sigmas * packet.width) + ")");
  }

  FieldState state = init_gaussian_packet(graph, lattice, packet);
  ScatteringMeasurement out;
  out.k0 = packet.carrier_k;
  out.steps = n_steps;
  out.initial_energy = total_energy(state, graph, lattice, &mask);
  out.initial_charge = total_charge(state, graph, lattice);

  double e_min = out.initial_energy;
  double e_max = out.initial_energy;
  Observer tracker{100, [&](long, double, const FieldState& s) {
                     const double e = total_energy(s, graph, lattice, &mask);
                     e_min = std::min(e_min, e);
                     e_max = std::max(e_max, e);
                   }};
  std::vector<Observer> all_observers{tracker};
  all_observers.insert(all_observers.end(), observers.begin(), observers.end());
  Stepper stepper(graph, lattice, mask, mode);
  stepper.evolve(state, n_steps, all_observers);

  out.stop_time = state.time;
  out.final_energy = total_energy(state, graph, lattice, &mask);
  out.final_charge = total_charge(state, graph, lattice);
  out.energy_drift = std::abs(out.final_energy - out.initial_energy) / out.initial_energy;
  out.charge_drift = std::abs(out.final_charge - out.initial_charge) /
                     std::abs(out.initial_charge);
  out.energy_spread = (e_max - e_min) / out.initial_energy;

  out.ray_energy_fraction.resize(graph.ray_count);
  out.ray_charge_fraction.resize(graph.ray_count);
  for (int q = 0; q < graph.ray_count; ++q) {
    out.ray_energy_fraction[q] = ray_energy(state, graph, lattice, q) / out.final_energy;
    out.ray_charge_fraction[q] = ray_charge(state, graph, lattice, q) / out.final_charge;
  }
  out.junction_energy_fraction =
      junction_energy(state, graph, lattice, &mask) / out.final_energy;
  out.reflected_energy_fraction = out.ray_energy_fraction[0];
  out.measured_reflection_prob = out.reflected_energy_fraction;

  const bool severed = mask.coupled_count() != graph.ray_count;
  out.predicted_reflection_prob_continuum =
      severed ? 1.0 : std::norm(kirchhoff_reflection(graph.ray_count));
  out.predicted_reflection_prob_lattice =
      severed ? 1.0
              : std::norm(discrete_reflection(packet.carrier_k, lattice.delta, graph.ray_count)
                              .reflection);
  return out;
}

ScatteringMeasurement run_scattering_experiment(const StarGraphSpec& graph,
                                                const LatticeSpec& lattice,
                                                const WavePacketSpec& packet,
                                                const StopRule& stop) {
  return run_scattering_experiment(graph, lattice, packet, stop,
                                   CouplingMask::all(graph.ray_count));
}

}  // namespace stargraph
