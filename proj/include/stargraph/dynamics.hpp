#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stargraph/graph_model.hpp"

namespace stargraph {

/// Gaussian envelope times a plane-wave carrier moving toward the junction,
/// placed on ray 0.
struct WavePacketSpec {
  double carrier_k = 2.0;
  double center = 40.0;
  double width = 2.5;
  Complex amplitude{1.0, 0.0};

  void validate(const StarGraphSpec& graph, const LatticeSpec& lattice) const;
};

/// Which rays keep their spring to the junction oscillator. Severing a ray
/// removes the (phi0 - phi_{q,1})^2 link from the Lagrangian, so its first
/// site becomes a free end.
struct CouplingMask {
  std::vector<std::uint8_t> coupled;

  static CouplingMask all(int ray_count) { return {std::vector<std::uint8_t>(ray_count, 1)}; }
  // Only ray 0 stays attached; realizes the decoupled junction structurally.
  static CouplingMask sever_transmitted(int ray_count) {
    CouplingMask m{std::vector<std::uint8_t>(ray_count, 0)};
    if (ray_count > 0) m.coupled[0] = 1;
    return m;
  }
  bool is_coupled(int ray) const { return coupled[ray] != 0; }
  int coupled_count() const;
};

enum class KernelMode { Serial, OpenMP };

KernelMode default_kernel_mode();

/// Per-site accelerations of the lattice equations of motion. Far boundary is
/// closed with phi_{q,N+1} = 0.
struct Accelerations {
  Complex junction{0.0, 0.0};
  std::vector<std::vector<Complex>> rays;
};

void compute_accelerations(const FieldState& state, const StarGraphSpec& graph,
                           const LatticeSpec& lattice, const CouplingMask& mask,
                           KernelMode mode, Accelerations& out);

/// Observer hook: invoked every `cadence` steps (and at step 0) with read-only
/// access to the synchronized state.
struct Observer {
  int cadence = 1;
  std::function<void(long step_index, double time, const FieldState&)> callback;
};

/// Velocity-Verlet integrator for the oscillator network. Owns scratch
/// acceleration buffers; one instance per evolution.
class Stepper {
 public:
  Stepper(const StarGraphSpec& graph, const LatticeSpec& lattice,
          CouplingMask mask, KernelMode mode = default_kernel_mode());
  Stepper(const StarGraphSpec& graph, const LatticeSpec& lattice);

  // One kick-drift-kick step of size lattice.dt (or -dt when reversed=true).
  void step(FieldState& state, bool reversed = false);

  void evolve(FieldState& state, long n_steps, std::span<const Observer> observers = {});

  const CouplingMask& mask() const { return mask_; }

 private:
  void half_kick(FieldState& state, double half_dt);
  void drift(FieldState& state, double dt);
  void check_finite(const FieldState& state) const;

  StarGraphSpec graph_;
  LatticeSpec lattice_;
  CouplingMask mask_;
  KernelMode mode_;
  Accelerations accel_;
  long steps_taken_ = 0;
};

FieldState init_gaussian_packet(const StarGraphSpec& graph, const LatticeSpec& lattice,
                                const WavePacketSpec& packet);

// In-place v -> -v; evolving after this runs the dynamics backwards in time.
void negate_velocities(FieldState& state);

/// When to end a scattering run: after the packet center has traveled
/// travel_factor * center (default: to the junction and back), subject to the
/// far boundary staying clearance_sigmas * sigma away from any signal.
struct StopRule {
  double travel_factor = 2.0;
  double clearance_sigmas = 5.0;
  long max_steps = 50'000'000;
};

struct ScatteringMeasurement {
  double k0 = 0.0;
  double stop_time = 0.0;
  long steps = 0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double initial_charge = 0.0;
  double final_charge = 0.0;
  std::vector<double> ray_energy_fraction;
  std::vector<double> ray_charge_fraction;
  double junction_energy_fraction = 0.0;
  double reflected_energy_fraction = 0.0;  // = ray_energy_fraction[0]
  double energy_drift = 0.0;               // |E_end - E_0| / E_0
  double charge_drift = 0.0;
  double energy_spread = 0.0;              // (max - min)/E_0 over sampled times
  double measured_reflection_prob = 0.0;   // reflected energy fraction
  double predicted_reflection_prob_continuum = 0.0;
  double predicted_reflection_prob_lattice = 0.0;
};

ScatteringMeasurement run_scattering_experiment(const StarGraphSpec& graph,
                                                const LatticeSpec& lattice,
                                                const WavePacketSpec& packet,
                                                const StopRule& stop,
                                                const CouplingMask& mask,
                                                KernelMode mode = default_kernel_mode(),
                                                std::span<const Observer> observers = {});

ScatteringMeasurement run_scattering_experiment(const StarGraphSpec& graph,
                                                const LatticeSpec& lattice,
                                                const WavePacketSpec& packet,
                                                const StopRule& stop = {});

// Group velocity of the lattice mode at wavenumber k: sin(k delta)/(delta w_k).
double lattice_group_velocity(double k, double mass, double delta);

}  // namespace stargraph
