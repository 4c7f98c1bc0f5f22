#include "stargraph/discrete_smatrix.hpp"

#include <cmath>

#include "stargraph/analytic_smatrix.hpp"
#include "stargraph/dynamics.hpp"

namespace stargraph {

namespace {

const double kPi = std::acos(-1.0);

void require_zone(double k, double delta, bool allow_edge, const char* where) {
  if (!(delta > 0.0)) {
    throw std::domain_error(std::string(where) + ": delta must be > 0");
  }
  const double kd = k * delta;
  if (!(kd > 0.0) || kd > kPi + 1e-12 || (!allow_edge && kd >= kPi - 1e-12)) {
    throw std::domain_error(std::string(where) + ": k*delta = " + std::to_string(kd) +
                            " outside the first Brillouin zone");
  }
}

}  // namespace

double discrete_dispersion(double k, double mass, double delta) {
  require_zone(k, delta, /*allow_edge=*/true, "discrete_dispersion");
  const double s = (2.0 / delta) * std::sin(0.5 * k * delta);
  return std::hypot(s, mass);
}

ScatteringAmplitudes discrete_reflection(double k, double delta, int ray_count) {
  if (ray_count < 1) {
    throw SpecError("discrete_reflection: ray_count must be >= 1");
  }
  require_zone(k, delta, /*allow_edge=*/true, "discrete_reflection");
  const double c = 0.5 * k * delta;
  const double s = static_cast<double>(ray_count);

  ScatteringAmplitudes amp;
  amp.k = k;
  if (std::abs(c - 0.5 * kPi) < 1e-12) {
    // cos(k delta/2) = 0: the junction equation degenerates; take the limit.
    amp.band_edge = true;
    amp.reflection = (ray_count == 2) ? Complex{0.0, 0.0} : Complex{-1.0, 0.0};
  } else {
    // (R+1) [(2-s) sin c + i s cos c] = 2i cos c, after dividing out 2 sin c.
    const Complex denom{(2.0 - s) * std::sin(c), s * std::cos(c)};
    amp.reflection = Complex{0.0, 2.0 * std::cos(c)} / denom - 1.0;
  }
  amp.transmission = 1.0 + amp.reflection;
  amp.phase = normalize_angle(std::arg(s * amp.reflection + (s - 1.0)));
  return amp;
}

EomResiduals eom_residual(const FieldState& state, const StarGraphSpec& graph,
                          const LatticeSpec& lattice, double omega) {
  lattice.validate(graph);
  const double w2 = omega * omega;
  Accelerations accel;
  compute_accelerations(state, graph, lattice, CouplingMask::all(graph.ray_count),
                        KernelMode::Serial, accel);

  EomResiduals res;
  res.junction = std::abs(-w2 * state.junction_value - accel.junction);
  res.max = res.junction;
  const int n = state.sites_per_ray();
  res.sites.resize(state.ray_count());
  for (int q = 0; q < state.ray_count(); ++q) {
    res.sites[q].resize(n > 0 ? n - 1 : 0);
    for (int i = 0; i + 1 < n; ++i) {
      const double r = std::abs(-w2 * state.ray_values[q][i] - accel.rays[q][i]);
      res.sites[q][i] = r;
      res.max = std::max(res.max, r);
    }
  }
  return res;
}

double continuum_limit_error(double k, double delta, int ray_count) {
  const ScatteringAmplitudes lattice = discrete_reflection(k, delta, ray_count);
  return std::abs(lattice.reflection - kirchhoff_reflection(ray_count));
}

}  // namespace stargraph
