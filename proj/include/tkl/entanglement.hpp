#pragma once

#include <limits>

#include <Eigen/Dense>

#include "tkl/mean_field.hpp"
#include "tkl/model.hpp"

namespace tkl {

using PairMatrix = Eigen::Matrix4cd;

// Reduced two-site state of trimer sites (1,2):
//
//        |00>  |01>  |10>  |11>
//   |00>  v     0     0     0
//   |01>  0     w     y     0
//   |10>  0     y     w     0
//   |11>  0     0     0     u
//
// |1> is spin up, so u is the both-up population. Entries are normalised by the
// trimer partition function; the raw logs keep the unnormalised magnitudes.
struct XState {
  double u = 0.0;
  double w = 0.0;
  double v = 0.0;
  double y = 0.0;
  double z_norm = 1.0;  // Z_0a, +inf when not representable
  double log_z = 0.0;
  double log_u = 0.0;
  double log_w = 0.0;
  double log_v = 0.0;
  double log_abs_y = 0.0;
  // |y| - sqrt(u v) on normalised entries, evaluated without cancellation when the
  // state came from reduced_density_matrix.
  double coherence = 0.0;

  // Source of the state; NaN for states built from raw entries.
  double lambda_aa = std::numeric_limits<double>::quiet_NaN();
  double gamma_a = std::numeric_limits<double>::quiet_NaN();
  double t = std::numeric_limits<double>::quiet_NaN();

  static XState from_entries(double u, double w, double v, double y);
  PairMatrix matrix() const;
};

enum class ConcurrenceRoute { closed_form, wootters_oracle };

struct ConcurrenceResult {
  double value = 0.0;
  ConcurrenceRoute route = ConcurrenceRoute::closed_form;
  double t = std::numeric_limits<double>::quiet_NaN();
  double h = std::numeric_limits<double>::quiet_NaN();
  double gamma_a = std::numeric_limits<double>::quiet_NaN();
  double lambda_aa = std::numeric_limits<double>::quiet_NaN();
};

XState reduced_density_matrix(const EffectiveFields& fields, double t);

// 2 max(|y| - sqrt(uv), 0) on normalised entries.
ConcurrenceResult concurrence_xstate(const XState& x);

// Wootters: square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy), descending,
// C = max(l1 - l2 - l3 - l4, 0). Throws InvalidDensityMatrix for a non-state input.
ConcurrenceResult concurrence_wootters(const PairMatrix& rho12);

// Concurrence of the trimer pair in the equilibrium self-consistent field.
ConcurrenceResult concurrence_at(const ModelParams& params, double t, const SolverConfig& config = {});

}  // namespace tkl
