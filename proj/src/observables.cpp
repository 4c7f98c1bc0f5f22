#include "stargraph/observables.hpp"

#include <cmath>

namespace stargraph {

namespace {

double site_charge_density(Complex phi, Complex v) {
  // i(conj(phi) v - phi conj(v)) = -2 Im(conj(phi) v)
  return -2.0 * std::imag(std::conj(phi) * v);
}

void require_ray(const FieldState& state, int ray, const char* where) {
  if (ray < 0 || ray >= state.ray_count()) {
    throw std::domain_error(std::string(where) + ": ray index out of range");
  }
}

}  // namespace

double ray_energy(const FieldState& state, const StarGraphSpec& graph,
                  const LatticeSpec& lattice, int ray) {
  require_ray(state, ray, "ray_energy");
  const int n = lattice.sites_per_ray;
  const double inv_d2 = 1.0 / (lattice.delta * lattice.delta);
  const double m2 = graph.mass * graph.mass;
  const auto& phi = state.ray_values[ray];
  const auto& vel = state.ray_velocities[ray];
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex right = (i + 1 < n) ? phi[i + 1] : Complex{0.0, 0.0};
    e += std::norm(vel[i]) + inv_d2 * std::norm(right - phi[i]) + m2 * std::norm(phi[i]);
  }
  return 0.5 * lattice.delta * e;
}

double junction_energy(const FieldState& state, const StarGraphSpec& graph,
                       const LatticeSpec& lattice, const CouplingMask* mask) {
  const double inv_d2 = 1.0 / (lattice.delta * lattice.delta);
  const double m2 = graph.mass * graph.mass;
  double e = std::norm(state.junction_velocity) + m2 * std::norm(state.junction_value);
  for (int q = 0; q < state.ray_count(); ++q) {
    if (mask && !mask->is_coupled(q)) continue;
    e += inv_d2 * std::norm(state.junction_value - state.ray_values[q][0]);
  }
  return 0.5 * lattice.delta * e;
}

double total_energy(const FieldState& state, const StarGraphSpec& graph,
                    const LatticeSpec& lattice, const CouplingMask* mask) {
  double e = junction_energy(state, graph, lattice, mask);
  for (int q = 0; q < state.ray_count(); ++q) {
    e += ray_energy(state, graph, lattice, q);
  }
  return e;
}

double ray_charge(const FieldState& state, const StarGraphSpec& /*graph*/,
                  const LatticeSpec& lattice, int ray) {
  require_ray(state, ray, "ray_charge");
  double q = 0.0;
  const auto& phi = state.ray_values[ray];
  const auto& vel = state.ray_velocities[ray];
  for (std::size_t i = 0; i < phi.size(); ++i) {
    q += site_charge_density(phi[i], vel[i]);
  }
  return lattice.delta * q;
}

double junction_charge(const FieldState& state, const StarGraphSpec& /*graph*/,
                       const LatticeSpec& lattice) {
  return lattice.delta * site_charge_density(state.junction_value, state.junction_velocity);
}

double total_charge(const FieldState& state, const StarGraphSpec& graph,
                    const LatticeSpec& lattice) {
  double q = junction_charge(state, graph, lattice);
  for (int ray = 0; ray < state.ray_count(); ++ray) {
    q += ray_charge(state, graph, lattice, ray);
  }
  return q;
}

double energy_flux(const FieldState& state, const StarGraphSpec& /*graph*/,
                   const LatticeSpec& lattice, int ray, int site) {
  require_ray(state, ray, "energy_flux");
  const int n = lattice.sites_per_ray;
  if (site < 1 || site > n - 1) {
    throw std::domain_error("energy_flux: site must be in [1, N-1]");
  }
  const auto& phi = state.ray_values[ray];
  const Complex left = (site == 1) ? state.junction_value : phi[site - 2];
  const Complex grad = (phi[site] - left) / (2.0 * lattice.delta);
  // T^{10} toward infinity: -2 Re(d_q conj(phi) * d_t phi)
  return -2.0 * std::real(std::conj(grad) * state.ray_velocities[ray][site - 1]);
}

double charge_flux(const FieldState& state, const StarGraphSpec& /*graph*/,
                   const LatticeSpec& lattice, int ray, int site) {
  require_ray(state, ray, "charge_flux");
  const int n = lattice.sites_per_ray;
  if (site < 1 || site > n - 1) {
    throw std::domain_error("charge_flux: site must be in [1, N-1]");
  }
  const auto& phi = state.ray_values[ray];
  const Complex left = (site == 1) ? state.junction_value : phi[site - 2];
  const Complex grad = (phi[site] - left) / (2.0 * lattice.delta);
  return 2.0 * std::imag(std::conj(phi[site - 1]) * grad);
}

double junction_energy_balance(const FieldState& state, const StarGraphSpec& graph,
                               const LatticeSpec& lattice) {
  lattice.validate(graph);
  Accelerations accel;
  compute_accelerations(state, graph, lattice, CouplingMask::all(graph.ray_count),
                        KernelMode::Serial, accel);
  const double d = lattice.delta;
  const double m2 = graph.mass * graph.mass;
  const Complex phi0 = state.junction_value;
  const Complex v0 = state.junction_velocity;

  // d/dt of the junction-site energy, via the equations of motion.
  double de_dt = d * std::real(std::conj(v0) * accel.junction) +
                 d * m2 * std::real(std::conj(phi0) * v0);
  double inward_flux = 0.0;
  for (int q = 0; q < state.ray_count(); ++q) {
    const Complex phi1 = state.ray_values[q][0];
    const Complex v1 = state.ray_velocities[q][0];
    de_dt += (1.0 / d) * std::real((std::conj(phi0) - std::conj(phi1)) * (v0 - v1));
    // Discrete energy flux carried into the junction region through the first link.
    inward_flux += (1.0 / d) * std::real((std::conj(phi1) - std::conj(phi0)) * v1);
  }
  return inward_flux - de_dt;
}

double junction_charge_balance(const FieldState& state, const StarGraphSpec& graph,
                               const LatticeSpec& lattice) {
  lattice.validate(graph);
  Accelerations accel;
  compute_accelerations(state, graph, lattice, CouplingMask::all(graph.ray_count),
                        KernelMode::Serial, accel);
  const double d = lattice.delta;
  const Complex phi0 = state.junction_value;

  const double dq_dt = -2.0 * d * std::imag(std::conj(phi0) * accel.junction);
  double inward_flux = 0.0;
  for (int q = 0; q < state.ray_count(); ++q) {
    inward_flux += -(2.0 / d) * std::imag(std::conj(phi0) * state.ray_values[q][0]);
  }
  return inward_flux - dq_dt;
}

}  // namespace stargraph
