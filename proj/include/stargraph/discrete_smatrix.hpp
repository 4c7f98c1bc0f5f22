#pragma once

#include <vector>

#include "stargraph/graph_model.hpp"

namespace stargraph {

// Lattice normal frequency, w_k^2 = (4/delta^2) sin^2(k delta/2) + m^2,
// for k delta in (0, pi].
double discrete_dispersion(double k, double mass, double delta);

/// Exact lattice reflection amplitude: solves
/// [4 sin^2(k delta/2) + s(e^{i k delta} - 1)](R+1) = 2i sin(k delta).
/// k delta = pi is returned as the well-defined limit with band_edge set.
ScatteringAmplitudes discrete_reflection(double k, double delta, int ray_count);

/// |target - rhs| per site with target acceleration -w^2 phi, rhs the lattice
/// equations of motion. Sites 1..N-1 of each ray are checked (the last site's
/// equation involves the artificial boundary closure, which a semi-infinite
/// mode does not satisfy).
struct EomResiduals {
  double junction = 0.0;
  std::vector<std::vector<double>> sites;  // per ray, length N-1
  double max = 0.0;
};

EomResiduals eom_residual(const FieldState& state, const StarGraphSpec& graph,
                          const LatticeSpec& lattice, double omega);

// |R_lattice(k, delta) - (2-s)/s|; first order in delta (about k delta/9 at s=3).
double continuum_limit_error(double k, double delta, int ray_count);

}  // namespace stargraph
