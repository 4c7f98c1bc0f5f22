// Compares the serial reference kernels against the OpenMP kernels on a large
// oscillator network and reports site-updates per second.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "stargraph/dynamics.hpp"
#include "stargraph/observables.hpp"

using namespace stargraph;

namespace {

double run(KernelMode mode, const StarGraphSpec& graph, const LatticeSpec& lattice,
           const WavePacketSpec& packet, long steps) {
  FieldState state = init_gaussian_packet(graph, lattice, packet);
  Stepper stepper(graph, lattice, CouplingMask::all(graph.ray_count), mode);
  const auto t0 = std::chrono::steady_clock::now();
  stepper.evolve(state, steps);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int sites = argc > 1 ? std::atoi(argv[1]) : 200000;
  const long steps = argc > 2 ? std::atol(argv[2]) : 400;

  StarGraphSpec graph{3, 1.0};
  LatticeSpec lattice{0.05, sites, 0.0125};
  WavePacketSpec packet{2.0, 0.2 * sites * lattice.delta, 0.02 * sites * lattice.delta,
                        Complex{1.0, 0.0}};

  const double updates = static_cast<double>(steps) * graph.ray_count * sites;
  std::printf("lattice: %d rays x %d sites, %ld steps\n", graph.ray_count, sites, steps);

  const double t_serial = run(KernelMode::Serial, graph, lattice, packet, steps);
  std::printf("serial: %8.3f s  (%.3e site-updates/s)\n", t_serial, updates / t_serial);
#ifdef _OPENMP
  const double t_omp = run(KernelMode::OpenMP, graph, lattice, packet, steps);
  std::printf("openmp: %8.3f s  (%.3e site-updates/s)  speedup %.2fx\n", t_omp,
              updates / t_omp, t_serial / t_omp);
#else
  std::printf("openmp: not available in this build\n");
#endif
  return 0;
}
