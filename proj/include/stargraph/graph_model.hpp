#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace stargraph {

using Complex = std::complex<double>;

/// Invalid specification or configuration (CLI exit code 2).
struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A scattering experiment whose preconditions cannot be met (exit code 3).
struct ExperimentInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical blow-up or loss of finiteness during integration (exit code 4).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Physical system: s semi-infinite rays joined at one vertex, field mass m
/// (natural units, hbar = c = 1).
struct StarGraphSpec {
  int ray_count = 3;
  double mass = 0.0;

  void validate() const;
};

/// Discretization of each ray into N oscillator sites with spacing delta,
/// advanced with time step dt.
struct LatticeSpec {
  double delta = 0.1;
  int sites_per_ray = 100;
  double dt = 0.025;

  // Highest normal frequency of the lattice, sqrt(4/delta^2 + m^2).
  double max_frequency(double mass) const;

  // Checks positivity and the stability bound dt * omega_max < 2.
  void validate(const StarGraphSpec& graph) const;
};

/// Complex field values and velocities on every site, including the junction
/// site, at a common time. Site n (1-based) of ray q sits at coordinate n*delta;
/// the junction is its own degree of freedom at coordinate 0.
struct FieldState {
  Complex junction_value{0.0, 0.0};
  Complex junction_velocity{0.0, 0.0};
  std::vector<std::vector<Complex>> ray_values;
  std::vector<std::vector<Complex>> ray_velocities;
  double time = 0.0;

  int ray_count() const { return static_cast<int>(ray_values.size()); }
  int sites_per_ray() const {
    return ray_values.empty() ? 0 : static_cast<int>(ray_values.front().size());
  }

  bool is_finite() const;
  double max_abs() const;
};

/// Reflection/transmission data at one wavenumber. The invariants
/// T = 1 + R and |R|^2 + (s-1)|1+R|^2 = 1 are maintained by every
/// constructor in this library.
struct ScatteringAmplitudes {
  double k = 0.0;
  Complex reflection{0.0, 0.0};
  Complex transmission{0.0, 0.0};
  double phase = 0.0;       // in (-pi, pi]
  bool band_edge = false;   // lattice result taken as the k*delta -> pi limit
};

/// Which junction-condition family is in force. Alpha(0) and Beta(0) coincide
/// with Kirchhoff; the infinite-parameter limit of either family is Decoupled.
struct JunctionFamily {
  enum class Kind { Kirchhoff, Decoupled, Alpha, Beta };

  Kind kind = Kind::Kirchhoff;
  double parameter = 0.0;

  static JunctionFamily kirchhoff() { return {Kind::Kirchhoff, 0.0}; }
  static JunctionFamily decoupled() { return {Kind::Decoupled, 0.0}; }
  static JunctionFamily alpha(double a) { return {Kind::Alpha, a}; }
  static JunctionFamily beta(double b) { return {Kind::Beta, b}; }
};

std::string family_name(const JunctionFamily& family);

// Maps an angle to the branch (-pi, pi].
double normalize_angle(double theta);

/// Zero-initialized state at t = 0 with shapes taken from the specs.
FieldState make_field_state(const StarGraphSpec& graph, const LatticeSpec& lattice);

/// Evaluates the exact stationary lattice mode at time t: incoming wave plus
/// reflected wave on ray 0, transmitted wave (1+R) e^{-i(w t - k delta n)} on
/// every other ray, (1+R) e^{-i w t} at the junction. Velocities are the exact
/// time derivatives (-i w times the values).
FieldState sample_discrete_mode(const StarGraphSpec& graph, const LatticeSpec& lattice,
                                double k, Complex reflection, double t);

}  // namespace stargraph
