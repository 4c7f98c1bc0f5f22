#pragma once

#include "stargraph/dynamics.hpp"
#include "stargraph/graph_model.hpp"

namespace stargraph {

// Discrete Hamiltonian: sum over sites of (|v|^2 + |grad phi|^2 + m^2|phi|^2)/2
// times delta. Link (n, n+1) belongs to site n; the links touching the junction
// belong to the junction term; the far boundary closes with phi_{N+1} = 0.
// Severed links (per mask) carry no energy.
double total_energy(const FieldState& state, const StarGraphSpec& graph,
                    const LatticeSpec& lattice, const CouplingMask* mask = nullptr);

// Q = sum of -2 Im(conj(phi) v) * delta over all sites including the junction.
double total_charge(const FieldState& state, const StarGraphSpec& graph,
                    const LatticeSpec& lattice);

// Energy on ray q alone (its sites plus the links they own).
double ray_energy(const FieldState& state, const StarGraphSpec& graph,
                  const LatticeSpec& lattice, int ray);

double ray_charge(const FieldState& state, const StarGraphSpec& graph,
                  const LatticeSpec& lattice, int ray);

// Junction-site energy: kinetic + mass term plus the s coupled links.
double junction_energy(const FieldState& state, const StarGraphSpec& graph,
                       const LatticeSpec& lattice, const CouplingMask* mask = nullptr);

double junction_charge(const FieldState& state, const StarGraphSpec& graph,
                       const LatticeSpec& lattice);

// Signed energy flux through site `site` (1-based, 1..N-1) of ray `ray`,
// positive toward infinity; centered differences.
double energy_flux(const FieldState& state, const StarGraphSpec& graph,
                   const LatticeSpec& lattice, int ray, int site);

double charge_flux(const FieldState& state, const StarGraphSpec& graph,
                   const LatticeSpec& lattice, int ray, int site);

// Sum of inward discrete link fluxes at the first link of each ray minus the
// rate of change of the junction-site energy (computed from the equations of
// motion). Vanishes identically when the state, the accelerations, and the
// flux bookkeeping are mutually consistent.
double junction_energy_balance(const FieldState& state, const StarGraphSpec& graph,
                               const LatticeSpec& lattice);

double junction_charge_balance(const FieldState& state, const StarGraphSpec& graph,
                               const LatticeSpec& lattice);

}  // namespace stargraph
