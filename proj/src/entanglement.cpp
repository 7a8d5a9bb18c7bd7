#include "tkl/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>

#include "tkl/errors.hpp"
#include "tkl/log_domain.hpp"
#include "tkl/trimer.hpp"

namespace tkl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kStateTolerance = 1e-10;
constexpr double kClip = 1e-12;

// log(a - b) for a > b > 0 given la = log a, lb = log b.
double log_sub(double la, double lb) { return la + std::log(-std::expm1(lb - la)); }

}  // namespace

XState XState::from_entries(double u, double w, double v, double y) {
  XState x;
  x.u = u;
  x.w = w;
  x.v = v;
  x.y = y;
  x.z_norm = 1.0;
  x.log_z = 0.0;
  x.log_u = std::log(u);
  x.log_w = std::log(w);
  x.log_v = std::log(v);
  x.log_abs_y = std::log(std::abs(y));
  x.coherence = std::abs(y) - std::sqrt(u * v);
  x.lambda_aa = kNaN;
  x.gamma_a = kNaN;
  x.t = kNaN;
  return x;
}

PairMatrix XState::matrix() const {
  PairMatrix m = PairMatrix::Zero();
  m(0, 0) = v;
  m(1, 1) = w;
  m(2, 2) = w;
  m(3, 3) = u;
  m(1, 2) = y;
  m(2, 1) = y;
  return m;
}

XState reduced_density_matrix(const EffectiveFields& fields, double t) {
  require_positive_temperature(t);
  const double lam = fields.lambda_aa;
  const double g = fields.gamma_a;
  const double x = g / (2.0 * t);
  const double big = 1.5 * lam / t;  // 3 lambda / 2T
  const double log_third = -std::log(3.0);

  XState s;
  s.lambda_aa = lam;
  s.gamma_a = g;
  s.t = t;
  s.log_z = trimer_partition(fields, t).log_value;
  s.z_norm = std::exp(s.log_z);

  s.log_u = (2.0 * g - 3.0 * lam) / (4.0 * t) + log_third +
            log_sum_exp({{1.0, 0.0}, {3.0, g / t}, {2.0, big}});
  s.log_v = -3.0 * (2.0 * g + lam) / (4.0 * t) + log_third +
            log_sum_exp({{3.0, 0.0}, {1.0, g / t}, {2.0, (2.0 * g + 3.0 * lam) / (2.0 * t)}});
  const double common = -(2.0 * g + 3.0 * lam) / (4.0 * t) + log_third + log_add(0.0, g / t);
  s.log_w = common + log_sum_exp({{1.0, 0.0}, {2.0, big}});
  s.log_abs_y = common + log_abs_expm1(big);

  s.u = std::exp(s.log_u - s.log_z);
  s.v = std::exp(s.log_v - s.log_z);
  s.w = std::exp(s.log_w - s.log_z);
  // y = -(1/3) e^{...} (1 + e^{g/T}) (e^{3 lambda/2T} - 1)
  s.y = lam > 0.0 ? -std::exp(s.log_abs_y - s.log_z) : (lam < 0.0 ? std::exp(s.log_abs_y - s.log_z) : 0.0);

  // |y| - sqrt(uv) = (y^2 - uv) / (|y| + sqrt(uv)), y^2 - uv = s^2 (P - N) with
  // s = e^{-3 lambda/4T}/3, P = 4 A^2 sinh^2 x, N = 8 A (1 + 2 cosh 2x) + 8 + 4 cosh 2x,
  // A = e^{3 lambda/2T}.
  const double log_p = 2.0 * big + 2.0 * log_two_abs_sinh(x);
  const double log_n = log_add(std::log(8.0) + big + log_sum_exp({{1.0, 0.0}, {1.0, 2.0 * x}, {1.0, -2.0 * x}}),
                               log_sum_exp({{8.0, 0.0}, {2.0, 2.0 * x}, {2.0, -2.0 * x}}));
  const double log_s2 = 2.0 * (-0.75 * lam / t + log_third);
  const double log_den = log_add(s.log_abs_y, 0.5 * (s.log_u + s.log_v));
  if (log_p > log_n) {
    s.coherence = std::exp(log_s2 + log_sub(log_p, log_n) - log_den - s.log_z);
  } else if (log_p < log_n) {
    s.coherence = -std::exp(log_s2 + log_sub(log_n, log_p) - log_den - s.log_z);
  } else {
    s.coherence = 0.0;
  }
  return s;
}

ConcurrenceResult concurrence_xstate(const XState& x) {
  ConcurrenceResult r;
  r.value = std::clamp(2.0 * std::max(x.coherence, 0.0), 0.0, 1.0);
  r.route = ConcurrenceRoute::closed_form;
  r.t = x.t;
  r.h = kNaN;
  r.gamma_a = x.gamma_a;
  r.lambda_aa = x.lambda_aa;
  return r;
}

ConcurrenceResult concurrence_wootters(const PairMatrix& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
    throw InvalidDensityMatrix("pair density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > kStateTolerance) {
    throw InvalidDensityMatrix("pair density matrix does not have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<PairMatrix> herm(rho, Eigen::EigenvaluesOnly);
  if (herm.eigenvalues().minCoeff() < -kStateTolerance) {
    throw InvalidDensityMatrix("pair density matrix is not positive semidefinite");
  }

  PairMatrix flip = PairMatrix::Zero();
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const PairMatrix tilde = rho * flip * rho.conjugate() * flip;

  Eigen::ComplexEigenSolver<PairMatrix> solver(tilde, false);
  std::array<double, 4> roots{};
  for (int i = 0; i < 4; ++i) {
    const double ev = solver.eigenvalues()(i).real();
    roots[i] = std::sqrt(ev < kClip ? std::max(ev, 0.0) : ev);
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());

  ConcurrenceResult r;
  r.value = std::clamp(roots[0] - roots[1] - roots[2] - roots[3], 0.0, 1.0);
  r.route = ConcurrenceRoute::wootters_oracle;
  r.t = kNaN;
  r.h = kNaN;
  r.gamma_a = kNaN;
  r.lambda_aa = kNaN;
  return r;
}

ConcurrenceResult concurrence_at(const ModelParams& params, double t, const SolverConfig& config) {
  const auto state = equilibrium_state(params, t, config);
  ConcurrenceResult r = concurrence_xstate(reduced_density_matrix(state.fields, t));
  r.h = params.h;
  return r;
}

}  // namespace tkl
