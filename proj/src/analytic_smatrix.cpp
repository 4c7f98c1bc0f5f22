#include "stargraph/analytic_smatrix.hpp"

#include <cmath>
#include <numeric>

namespace stargraph {

namespace {

void require_positive_k(double k, const char* where) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::domain_error(std::string(where) + ": k must be > 0, got " + std::to_string(k));
  }
}

void require_rays(int s, const char* where) {
  if (s < 1) {
    throw SpecError(std::string(where) + ": ray_count must be >= 1, got " + std::to_string(s));
  }
}

}  // namespace

void TwoModeSpec::validate() const {
  if (!(k1 > 0.0) || !(k2 > 0.0)) {
    throw SpecError("TwoModeSpec: wavenumbers must be > 0");
  }
  if (k1 == k2) {
    throw SpecError("TwoModeSpec: k1 and k2 must be distinct");
  }
}

double dispersion_omega(double k, double mass) {
  return std::hypot(k, mass);
}

Complex kirchhoff_reflection(int ray_count) {
  require_rays(ray_count, "kirchhoff_reflection");
  return Complex{(2.0 - ray_count) / ray_count, 0.0};
}

ScatteringAmplitudes phase_to_amplitudes(double theta, double k, int ray_count) {
  require_rays(ray_count, "phase_to_amplitudes");
  const double s = static_cast<double>(ray_count);
  ScatteringAmplitudes amp;
  amp.k = k;
  amp.phase = normalize_angle(theta);
  amp.reflection = Complex{std::cos(amp.phase), std::sin(amp.phase)} / s - (s - 1.0) / s;
  amp.transmission = 1.0 + amp.reflection;
  return amp;
}

double unitarity_residual(Complex reflection, int ray_count) {
  require_rays(ray_count, "unitarity_residual");
  return std::norm(reflection) + (ray_count - 1) * std::norm(reflection + 1.0) - 1.0;
}

Complex alpha_family_phase(double k, double mass, double alpha) {
  require_positive_k(k, "alpha_family_phase");
  const Complex num{k, alpha * dispersion_omega(k, mass)};
  return num / std::conj(num);
}

Complex beta_family_phase(double k, double beta) {
  require_positive_k(k, "beta_family_phase");
  const Complex num{k, beta};
  return num / std::conj(num);
}

ScatteringAmplitudes family_amplitudes(const JunctionFamily& family, double k,
                                       const StarGraphSpec& graph) {
  graph.validate();
  require_positive_k(k, "family_amplitudes");
  const double pi = std::acos(-1.0);
  double theta = 0.0;
  switch (family.kind) {
    case JunctionFamily::Kind::Kirchhoff:
      theta = 0.0;
      break;
    case JunctionFamily::Kind::Decoupled:
      theta = pi;
      break;
    case JunctionFamily::Kind::Alpha:
      theta = std::arg(alpha_family_phase(k, graph.mass, family.parameter));
      break;
    case JunctionFamily::Kind::Beta:
      theta = std::arg(beta_family_phase(k, family.parameter));
      break;
  }
  return phase_to_amplitudes(theta, k, graph.ray_count);
}

Complex monochromatic_field(double k, Complex reflection, int ray, double q, double t,
                            int incoming_ray, double mass) {
  require_positive_k(k, "monochromatic_field");
  if (q < 0.0) {
    throw std::domain_error("monochromatic_field: q must be >= 0");
  }
  const double omega = dispersion_omega(k, mass);
  const Complex time_factor = std::exp(Complex{0.0, -omega * t});
  if (ray == incoming_ray) {
    return (std::exp(Complex{0.0, -k * q}) + reflection * std::exp(Complex{0.0, k * q})) *
           time_factor;
  }
  return (1.0 + reflection) * std::exp(Complex{0.0, k * q}) * time_factor;
}

namespace {

// (s-2) + s R; reduces to 1 + 3R on the three-ray graph.
Complex junction_factor(Complex reflection, int s) {
  return static_cast<double>(s - 2) + static_cast<double>(s) * reflection;
}

}  // namespace

Complex energy_cross_residual(const TwoModeSpec& spec, double mass, int ray_count) {
  spec.validate();
  require_rays(ray_count, "energy_cross_residual");
  const double w1 = dispersion_omega(spec.k1, mass);
  const double w2 = dispersion_omega(spec.k2, mass);
  const Complex r1c = std::conj(spec.reflection1);
  return w1 * spec.k2 * (1.0 + r1c) * junction_factor(spec.reflection2, ray_count) +
         w2 * spec.k1 * junction_factor(r1c, ray_count) * (1.0 + spec.reflection2);
}

Complex charge_cross_residual(const TwoModeSpec& spec, int ray_count) {
  spec.validate();
  require_rays(ray_count, "charge_cross_residual");
  const Complex r1c = std::conj(spec.reflection1);
  return spec.k2 * (1.0 + r1c) * junction_factor(spec.reflection2, ray_count) +
         spec.k1 * junction_factor(r1c, ray_count) * (1.0 + spec.reflection2);
}

FamilyFit solve_family_from_residuals(std::span<const double> k_grid,
                                      std::span<const Complex> phases, double mass,
                                      JunctionFamily::Kind kind) {
  if (kind != JunctionFamily::Kind::Alpha && kind != JunctionFamily::Kind::Beta) {
    throw SpecError("solve_family_from_residuals: kind must be alpha or beta");
  }
  if (k_grid.size() < 2 || k_grid.size() != phases.size()) {
    throw SpecError("solve_family_from_residuals: need >= 2 grid points with matching phases");
  }
  const bool is_alpha = (kind == JunctionFamily::Kind::Alpha);
  const int s = 3;  // the constants are defined by the pairwise residuals at any s; use 3

  // Each phase pins the constant through tan(theta/2): alpha = (k/w) tan(theta/2),
  // beta = k tan(theta/2).
  std::vector<double> estimates;
  estimates.reserve(k_grid.size());
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    require_positive_k(k_grid[i], "solve_family_from_residuals");
    const double theta = std::arg(phases[i]);
    const double half_tan = std::tan(0.5 * theta);
    if (!std::isfinite(half_tan)) {
      throw SpecError("solve_family_from_residuals: phase at band edge (theta = pi), "
                      "constant is not finite");
    }
    estimates.push_back(is_alpha
                            ? half_tan * k_grid[i] / dispersion_omega(k_grid[i], mass)
                            : half_tan * k_grid[i]);
  }
  FamilyFit fit;
  fit.constant = std::accumulate(estimates.begin(), estimates.end(), 0.0) /
                 static_cast<double>(estimates.size());

  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    const Complex refit = is_alpha ? alpha_family_phase(k_grid[i], mass, fit.constant)
                                   : beta_family_phase(k_grid[i], fit.constant);
    fit.max_phase_residual = std::max(fit.max_phase_residual, std::abs(refit - phases[i]));
  }
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    for (std::size_t j = i + 1; j < k_grid.size(); ++j) {
      TwoModeSpec pair;
      pair.k1 = k_grid[i];
      pair.k2 = k_grid[j];
      pair.reflection1 = phase_to_amplitudes(std::arg(phases[i]), pair.k1, s).reflection;
      pair.reflection2 = phase_to_amplitudes(std::arg(phases[j]), pair.k2, s).reflection;
      const Complex res = is_alpha ? energy_cross_residual(pair, mass, s)
                                   : charge_cross_residual(pair, s);
      fit.max_cross_residual = std::max(fit.max_cross_residual, std::abs(res));
    }
  }
  if (fit.max_phase_residual > 1e-6) {
    throw SpecError("solve_family_from_residuals: no single constant fits the input phases "
                    "(max cross residual " + std::to_string(fit.max_cross_residual) + ")");
  }
  return fit;
}

}  // namespace stargraph
