#include "stargraph/graph_model.hpp"

#include <cmath>

#include "stargraph/discrete_smatrix.hpp"

namespace stargraph {

void StarGraphSpec::validate() const {
  if (ray_count < 1) {
    throw SpecError("StarGraphSpec: ray_count must be >= 1, got " + std::to_string(ray_count));
  }
  if (!(mass >= 0.0) || !std::isfinite(mass)) {
    throw SpecError("StarGraphSpec: mass must be finite and >= 0, got " + std::to_string(mass));
  }
}

double LatticeSpec::max_frequency(double mass) const {
  return std::sqrt(4.0 / (delta * delta) + mass * mass);
}

void LatticeSpec::validate(const StarGraphSpec& graph) const {
  graph.validate();
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw SpecError("LatticeSpec: delta must be > 0, got " + std::to_string(delta));
  }
  if (sites_per_ray < 2) {
    throw SpecError("LatticeSpec: sites_per_ray must be >= 2, got " +
                    std::to_string(sites_per_ray));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw SpecError("LatticeSpec: dt must be > 0, got " + std::to_string(dt));
  }
  const double cfl = dt * max_frequency(graph.mass);
  if (!(cfl < 2.0)) {
    throw SpecError("LatticeSpec: CFL violation, dt * omega_max = " + std::to_string(cfl) +
                    " must be < 2");
  }
}

bool FieldState::is_finite() const {
  auto ok = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  if (!ok(junction_value) || !ok(junction_velocity)) return false;
  for (const auto& ray : ray_values)
    for (Complex z : ray)
      if (!ok(z)) return false;
  for (const auto& ray : ray_velocities)
    for (Complex z : ray)
      if (!ok(z)) return false;
  return true;
}

double FieldState::max_abs() const {
  double m = std::abs(junction_value);
  for (const auto& ray : ray_values)
    for (Complex z : ray) m = std::max(m, std::abs(z));
  return m;
}

double normalize_angle(double theta) {
  const double pi = std::acos(-1.0);
  double t = std::remainder(theta, 2.0 * pi);
  if (t <= -pi) t += 2.0 * pi;
  return t;
}

std::string family_name(const JunctionFamily& family) {
  switch (family.kind) {
    case JunctionFamily::Kind::Kirchhoff: return "kirchhoff";
    case JunctionFamily::Kind::Decoupled: return "decoupled";
    case JunctionFamily::Kind::Alpha: return "alpha";
    case JunctionFamily::Kind::Beta: return "beta";
  }
  return "unknown";
}

FieldState make_field_state(const StarGraphSpec& graph, const LatticeSpec& lattice) {
  lattice.validate(graph);
  FieldState state;
  state.ray_values.assign(graph.ray_count,
                          std::vector<Complex>(lattice.sites_per_ray, Complex{0.0, 0.0}));
  state.ray_velocities = state.ray_values;
  state.time = 0.0;
  return state;
}

FieldState sample_discrete_mode(const StarGraphSpec& graph, const LatticeSpec& lattice,
                                double k, Complex reflection, double t) {
  lattice.validate(graph);
  if (!(k > 0.0)) {
    throw SpecError("sample_discrete_mode: k must be > 0, got " + std::to_string(k));
  }
  const double omega = discrete_dispersion(k, graph.mass, lattice.delta);
  const Complex iw{0.0, omega};
  const Complex time_factor = std::exp(Complex{0.0, -omega * t});
  const Complex transmitted = reflection + 1.0;

  FieldState state = make_field_state(graph, lattice);
  state.time = t;
  state.junction_value = transmitted * time_factor;
  state.junction_velocity = -iw * state.junction_value;

  for (int q = 0; q < graph.ray_count; ++q) {
    for (int i = 0; i < lattice.sites_per_ray; ++i) {
      const double x = k * lattice.delta * (i + 1);
      Complex value;
      if (q == 0) {
        value = std::exp(Complex{0.0, -x}) + reflection * std::exp(Complex{0.0, x});
      } else {
        value = transmitted * std::exp(Complex{0.0, x});
      }
      value *= time_factor;
      state.ray_values[q][i] = value;
      state.ray_velocities[q][i] = -iw * value;
    }
  }
  return state;
}

}  // namespace stargraph
