#pragma once

#include <span>
#include <vector>

#include "tkl/model.hpp"

namespace tkl {

struct Magnetization {
  double m_a = 0.0;
  double m_b = 0.0;
};

/// Damped fixed-point solver settings. `damping` is the mixing weight of the new
/// iterate; it is halved (down to `min_damping`) whenever the m_a update flips sign
/// for `oscillation_window` consecutive steps.
struct SolverConfig {
  double tolerance = 1e-12;
  int max_iterations = 100000;
  double damping = 0.7;
  double min_damping = 0.05;
  int oscillation_window = 10;
  std::vector<Magnetization> seeds = default_seeds();

  static std::vector<Magnetization> default_seeds();
  void validate() const;
};

struct SelfConsistentState {
  double m_a = 0.0;
  double m_b = 0.0;
  EffectiveFields fields;
  double free_energy_per_site = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

EffectiveFields effective_fields(double m_a, double m_b, const ModelParams& params);

// Single a-site magnetization of the trimer in field gamma_a (closed form, overflow safe).
double map_m_a(const EffectiveFields& fields, double t);
// Single b-site magnetization, (1/2) tanh(gamma_b / 2T).
double map_m_b(const EffectiveFields& fields, double t);

// d map_m_a / d gamma_a = Var(S^z_total) / (3T) and d map_m_b / d gamma_b.
double map_m_a_slope(const EffectiveFields& fields, double t);
double map_m_b_slope(const EffectiveFields& fields, double t);

// Gibbs-Bogoliubov free energy per lattice site, F_GB / 3N, with the variational
// fields built from (m_a, m_b):  (2/9) [f_0a + (3/2) f_0b + 6 J_ab m_a m_b].
double free_energy_per_site(double m_a, double m_b, const ModelParams& params, double t);

// Iterate from one seed. Never throws on non-convergence; check `converged`.
SelfConsistentState iterate_from(Magnetization seed, const ModelParams& params, double t,
                                 const SolverConfig& config);

// All distinct converged branches (deduplicated at 10 * tolerance), followed by any
// seeds that exhausted max_iterations (converged == false).
std::vector<SelfConsistentState> solve_self_consistent(const ModelParams& params, double t,
                                                       const SolverConfig& config = {});

// Converged state of minimal free energy; ties within 1e-12 go to m_a >= 0.
// Throws NoConvergedBranch when nothing converged.
SelfConsistentState select_equilibrium(std::span<const SelfConsistentState> states);

SelfConsistentState equilibrium_state(const ModelParams& params, double t,
                                      const SolverConfig& config = {});

// Number of converged entries in a solve_self_consistent result.
int converged_branch_count(std::span<const SelfConsistentState> states);

}  // namespace tkl
