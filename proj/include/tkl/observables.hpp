#pragma once

#include "tkl/mean_field.hpp"
#include "tkl/model.hpp"

namespace tkl {

// Central finite difference along the re-solved equilibrium branch. `reliable` is false
// when the forward and backward one-sided differences disagree by more than 10%, which
// happens at first-order jumps where the derivative is undefined.
struct DerivativeEstimate {
  double value = 0.0;
  double forward = 0.0;
  double backward = 0.0;
  bool reliable = true;
};

// Default field step max(1e-6, 1e-4 max(1, |H|)).
double default_field_step(double h);
inline constexpr double kDefaultRelativeTemperatureStep = 1e-3;

/// chi_a = d m_a / dH at fixed T. The perturbed solves are seeded from the equilibrium
/// at H so the derivative follows one branch.
DerivativeEstimate susceptibility(const ModelParams& params, double t, double step,
                                  const SolverConfig& config = {});
DerivativeEstimate susceptibility(const ModelParams& params, double t);

struct ZeroFieldSusceptibility {
  double value = 0.0;
  bool diverging = false;  // |difference quotient| above 1e6, i.e. at or below Tc
};

// chi_a at H = 0 on the paramagnetic branch (seeded at m = 0).
ZeroFieldSusceptibility zero_field_susceptibility(const ModelParams& params, double t,
                                                  const SolverConfig& config = {});

// u = -T^2 d(F/T)/dT per site, central difference with delta = rel_step * T.
double internal_energy(const ModelParams& params, double t, double rel_step = kDefaultRelativeTemperatureStep,
                       const SolverConfig& config = {});

// c = du/dT (reported form).
double specific_heat(const ModelParams& params, double t, double rel_step = kDefaultRelativeTemperatureStep,
                     const SolverConfig& config = {});

// c = -T d^2 F / dT^2, the second-derivative form kept for cross-checking.
double specific_heat_from_free_energy(const ModelParams& params, double t,
                                      double rel_step = kDefaultRelativeTemperatureStep,
                                      const SolverConfig& config = {});

// Richardson check for u: difference between the step and half-step estimates.
double internal_energy_richardson_gap(const ModelParams& params, double t,
                                      double rel_step = kDefaultRelativeTemperatureStep,
                                      const SolverConfig& config = {});

// (2 m_a + m_b) / 3, the magnetization per lattice site.
double site_magnetization(const SelfConsistentState& state);

struct ObservablePoint {
  ModelParams params;
  double t = 0.0;
  double m_a = 0.0;
  double m_b = 0.0;
  double chi_a = 0.0;
  double u = 0.0;
  double c = 0.0;
};

ObservablePoint evaluate_observables(const ModelParams& params, double t, const SolverConfig& config = {});

}  // namespace tkl
