#include "tkl/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tkl/errors.hpp"

namespace tkl {

namespace {

constexpr double kDisagreement = 0.1;
constexpr double kDerivativeFloor = 1e-8;
constexpr double kDivergenceLimit = 1e6;

// Follow the branch through `seed` to the neighbouring parameter point.
SelfConsistentState follow(const SelfConsistentState& seed, const ModelParams& params, double t,
                           const SolverConfig& config) {
  SelfConsistentState s = iterate_from({seed.m_a, seed.m_b}, params, t, config);
  if (!s.converged) {
    throw NonConvergence("branch continuation failed at H=" + std::to_string(params.h) +
                         " T=" + std::to_string(t) + " (residual " + std::to_string(s.residual) + ")");
  }
  return s;
}

DerivativeEstimate three_point(double minus, double centre, double plus, double step) {
  DerivativeEstimate d;
  d.value = (plus - minus) / (2.0 * step);
  d.forward = (plus - centre) / step;
  d.backward = (centre - minus) / step;
  const double scale = std::max(std::abs(d.forward), std::abs(d.backward));
  d.reliable = scale < kDerivativeFloor || std::abs(d.forward - d.backward) <= kDisagreement * scale;
  return d;
}

void require_step(double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
}

// u at t along the branch through `base` (already solved at t).
double internal_energy_on_branch(const SelfConsistentState& base, const ModelParams& params, double t,
                                 double rel_step, const SolverConfig& config) {
  const double dt = rel_step * t;
  const auto lo = follow(base, params, t - dt, config);
  const auto hi = follow(base, params, t + dt, config);
  const double g_lo = lo.free_energy_per_site / (t - dt);
  const double g_hi = hi.free_energy_per_site / (t + dt);
  return -t * t * (g_hi - g_lo) / (2.0 * dt);
}

void require_rel_step(double rel_step) {
  if (!(rel_step > 0.0 && rel_step < 1.0)) {
    throw std::invalid_argument("relative temperature step must lie in (0, 1)");
  }
}

}  // namespace

double default_field_step(double h) { return std::max(1e-6, 1e-4 * std::max(1.0, std::abs(h))); }

DerivativeEstimate susceptibility(const ModelParams& params, double t, double step,
                                  const SolverConfig& config) {
  require_positive_temperature(t);
  require_step(step);
  const auto centre = equilibrium_state(params, t, config);
  const auto lo = follow(centre, params.with_field(params.h - step), t, config);
  const auto hi = follow(centre, params.with_field(params.h + step), t, config);
  return three_point(lo.m_a, centre.m_a, hi.m_a, step);
}

DerivativeEstimate susceptibility(const ModelParams& params, double t) {
  return susceptibility(params, t, default_field_step(params.h));
}

ZeroFieldSusceptibility zero_field_susceptibility(const ModelParams& params, double t,
                                                  const SolverConfig& config) {
  require_positive_temperature(t);
  SolverConfig paramagnetic = config;
  paramagnetic.seeds = {{0.0, 0.0}};
  const double step = default_field_step(0.0);
  const auto centre = follow(SelfConsistentState{}, params.with_field(0.0), t, paramagnetic);
  const auto lo = follow(centre, params.with_field(-step), t, paramagnetic);
  const auto hi = follow(centre, params.with_field(step), t, paramagnetic);
  ZeroFieldSusceptibility out;
  out.value = (hi.m_a - lo.m_a) / (2.0 * step);
  out.diverging = std::abs(out.value) > kDivergenceLimit;
  return out;
}

double internal_energy(const ModelParams& params, double t, double rel_step, const SolverConfig& config) {
  require_positive_temperature(t);
  require_rel_step(rel_step);
  const auto base = equilibrium_state(params, t, config);
  return internal_energy_on_branch(base, params, t, rel_step, config);
}

double specific_heat(const ModelParams& params, double t, double rel_step, const SolverConfig& config) {
  require_positive_temperature(t);
  require_rel_step(rel_step);
  const double dt = rel_step * t;
  const auto base = equilibrium_state(params, t, config);
  const auto lo = follow(base, params, t - dt, config);
  const auto hi = follow(base, params, t + dt, config);
  const double u_lo = internal_energy_on_branch(lo, params, t - dt, rel_step, config);
  const double u_hi = internal_energy_on_branch(hi, params, t + dt, rel_step, config);
  return (u_hi - u_lo) / (2.0 * dt);
}

double specific_heat_from_free_energy(const ModelParams& params, double t, double rel_step,
                                      const SolverConfig& config) {
  require_positive_temperature(t);
  require_rel_step(rel_step);
  const double dt = rel_step * t;
  const auto base = equilibrium_state(params, t, config);
  const auto lo = follow(base, params, t - dt, config);
  const auto hi = follow(base, params, t + dt, config);
  const double second =
      (hi.free_energy_per_site - 2.0 * base.free_energy_per_site + lo.free_energy_per_site) / (dt * dt);
  return -t * second;
}

double internal_energy_richardson_gap(const ModelParams& params, double t, double rel_step,
                                      const SolverConfig& config) {
  const auto base = equilibrium_state(params, t, config);
  const double coarse = internal_energy_on_branch(base, params, t, rel_step, config);
  const double fine = internal_energy_on_branch(base, params, t, 0.5 * rel_step, config);
  return std::abs(coarse - fine);
}

double site_magnetization(const SelfConsistentState& state) { return (2.0 * state.m_a + state.m_b) / 3.0; }

ObservablePoint evaluate_observables(const ModelParams& params, double t, const SolverConfig& config) {
  ObservablePoint p;
  p.params = params;
  p.t = t;
  const auto state = equilibrium_state(params, t, config);
  p.m_a = state.m_a;
  p.m_b = state.m_b;
  p.chi_a = susceptibility(params, t, default_field_step(params.h), config).value;
  p.u = internal_energy(params, t, kDefaultRelativeTemperatureStep, config);
  p.c = specific_heat(params, t, kDefaultRelativeTemperatureStep, config);
  return p;
}

}  // namespace tkl
