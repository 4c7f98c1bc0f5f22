#pragma once

#include <span>

#include "stargraph/graph_model.hpp"

namespace stargraph {

/// Two monochromatic modes superposed on the same graph; the interference
/// terms between them carry the conservation-law constraints.
struct TwoModeSpec {
  double k1 = 0.0;
  double k2 = 0.0;
  Complex reflection1{0.0, 0.0};
  Complex reflection2{0.0, 0.0};

  void validate() const;
};

/// Result of recovering a family constant from tabulated junction phases.
struct FamilyFit {
  double constant = 0.0;
  double max_phase_residual = 0.0;  // worst |exp(i theta_fit) - exp(i theta_in)|
  double max_cross_residual = 0.0;  // worst two-mode residual of the fitted family
};

// omega = sqrt(k^2 + m^2)
double dispersion_omega(double k, double mass);

// Universal reflection for the continuity + zero-derivative-sum junction:
// (2-s)/s, real. s=3 gives -1/3.
Complex kirchhoff_reflection(int ray_count);

// R = e^{i theta}/s - (s-1)/s, T = 1 + R. Satisfies unitarity identically.
ScatteringAmplitudes phase_to_amplitudes(double theta, double k, int ray_count);

// |R|^2 + (s-1)|1+R|^2 - 1; zero iff the amplitudes conserve flux.
double unitarity_residual(Complex reflection, int ray_count);

// e^{i theta(k)} = (k + i a w)/(k - i a w), w = sqrt(k^2+m^2). The phase family
// that conserves energy at the junction.
Complex alpha_family_phase(double k, double mass, double alpha);

// e^{i theta(k)} = (k + i b)/(k - i b). The phase family that conserves charge.
Complex beta_family_phase(double k, double beta);

// Dispatch: junction family -> amplitudes at wavenumber k.
ScatteringAmplitudes family_amplitudes(const JunctionFamily& family, double k,
                                       const StarGraphSpec& graph);

// Continuum monochromatic solution evaluated at coordinate q >= 0 on `ray`:
// incoming ray carries e^{-i(wt+kq)} + R e^{-i(wt-kq)}, every other ray
// (1+R) e^{-i(wt-kq)}.
Complex monochromatic_field(double k, Complex reflection, int ray, double q, double t,
                            int incoming_ray, double mass);

// Interference residual of the two-mode solution in the junction energy-flux
// balance: w1 k2 (1+conj R1)((s-2)+s R2) + w2 k1 ((s-2)+s conj R1)(1+R2).
// Zero iff energy is conserved for every superposition.
Complex energy_cross_residual(const TwoModeSpec& spec, double mass, int ray_count);

// Same with the omega factors dropped; zero iff charge is conserved.
Complex charge_cross_residual(const TwoModeSpec& spec, int ray_count);

/// Recovers the family constant from junction phases e^{i theta(k)} sampled on
/// a wavenumber grid, by requiring the corresponding cross residuals to vanish
/// for every pair. Throws SpecError when no single constant fits.
FamilyFit solve_family_from_residuals(std::span<const double> k_grid,
                                      std::span<const Complex> phases, double mass,
                                      JunctionFamily::Kind kind);

}  // namespace stargraph
