#include "tkl/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tkl/errors.hpp"
#include "tkl/trimer.hpp"

namespace tkl {

namespace {

// sinh(a) * e^{-s} and cosh(a) * e^{-s} without overflow or cancellation at small a.
double scaled_sinh(double a, double s) {
  if (std::abs(a) < 1.0) return std::sinh(a) * std::exp(-s);
  return 0.5 * (std::exp(a - s) - std::exp(-a - s));
}

double scaled_cosh(double a, double s) {
  if (std::abs(a) < 1.0) return std::cosh(a) * std::exp(-s);
  return 0.5 * (std::exp(a - s) + std::exp(-a - s));
}

// Newton is only attempted once the Picard residual is this small, i.e. inside the
// basin the damped iteration is already heading into.
constexpr double kNewtonRadius = 1e-3;
constexpr double kTieTolerance = 1e-12;

bool in_box(const Magnetization& m) {
  return std::isfinite(m.m_a) && std::isfinite(m.m_b) && std::abs(m.m_a) <= 0.5 &&
         std::abs(m.m_b) <= 0.5;
}

Magnetization apply_map(const Magnetization& m, const ModelParams& params, double t) {
  const EffectiveFields f = effective_fields(m.m_a, m.m_b, params);
  return {map_m_a(f, t), map_m_b(f, t)};
}

double sup_distance(const Magnetization& x, const Magnetization& y) {
  return std::max(std::abs(x.m_a - y.m_a), std::abs(x.m_b - y.m_b));
}

}  // namespace

std::vector<Magnetization> SolverConfig::default_seeds() {
  return {{0.49, 0.49}, {-0.49, -0.49}, {1.0 / 6.0, 0.49}, {-1.0 / 6.0, -0.49}, {0.01, 0.01}, {0.0, 0.0}};
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
  if (!(min_damping > 0.0 && min_damping <= damping)) {
    throw std::invalid_argument("min_damping must lie in (0, damping]");
  }
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (seeds.empty()) throw std::invalid_argument("solver needs at least one seed");
}

EffectiveFields effective_fields(double m_a, double m_b, const ModelParams& params) {
  return {params.j_aa, 2.0 * params.j_ab * m_b + params.h, 4.0 * params.j_ab * m_a + params.h};
}

double map_m_a(const EffectiveFields& fields, double t) {
  require_positive_temperature(t);
  const double x = fields.gamma_a / (2.0 * t);
  const double big = 1.5 * fields.lambda_aa / t;
  const double ax = std::abs(x);
  const double s = std::max({3.0 * ax, big + ax, ax});
  const double den = scaled_cosh(3.0 * x, s) + 2.0 * scaled_cosh(x, s - big) + scaled_cosh(x, s);
  const double num =
      3.0 * scaled_sinh(3.0 * x, s) + 2.0 * scaled_sinh(x, s - big) + scaled_sinh(x, s);
  return num / (6.0 * den);
}

double map_m_b(const EffectiveFields& fields, double t) {
  require_positive_temperature(t);
  return 0.5 * std::tanh(fields.gamma_b / (2.0 * t));
}

double map_m_a_slope(const EffectiveFields& fields, double t) {
  const TrimerSpectrum spec = trimer_energies(fields);
  const auto w = boltzmann_weights(spec, t);
  double mean = 0.0;
  double second = 0.0;
  for (int k = 0; k < kTrimerDim; ++k) {
    mean += w[k] * spec.total_sz[k];
    second += w[k] * spec.total_sz[k] * spec.total_sz[k];
  }
  return std::max(0.0, second - mean * mean) / (3.0 * t);
}

double map_m_b_slope(const EffectiveFields& fields, double t) {
  require_positive_temperature(t);
  const double c = std::cosh(fields.gamma_b / (2.0 * t));
  return 1.0 / (4.0 * t * c * c);
}

double free_energy_per_site(double m_a, double m_b, const ModelParams& params, double t) {
  const EffectiveFields f = effective_fields(m_a, m_b, params);
  const double cluster = trimer_free_energy(f, t) + 1.5 * monomer_free_energy(f.gamma_b, t) +
                         6.0 * params.j_ab * m_a * m_b;
  return cluster * (2.0 / 9.0);
}

SelfConsistentState iterate_from(Magnetization seed, const ModelParams& params, double t,
                                 const SolverConfig& config) {
  require_positive_temperature(t);
  config.validate();

  Magnetization m{std::clamp(seed.m_a, -0.5, 0.5), std::clamp(seed.m_b, -0.5, 0.5)};
  double eta = config.damping;
  int flips = 0;
  int last_sign = 0;

  SelfConsistentState out;
  Magnetization target = apply_map(m, params, t);
  double residual = sup_distance(target, m);
  int it = 0;
  while (residual > config.tolerance && it < config.max_iterations) {
    ++it;
    if (residual < kNewtonRadius) {
      // Newton on F(m) = map(m) - m; the Jacobian of the map is off-diagonal.
      const EffectiveFields f = effective_fields(m.m_a, m.m_b, params);
      const double da = 2.0 * params.j_ab * map_m_a_slope(f, t);  // d m_a' / d m_b
      const double db = 4.0 * params.j_ab * map_m_b_slope(f, t);  // d m_b' / d m_a
      const double fa = target.m_a - m.m_a;
      const double fb = target.m_b - m.m_b;
      const double det = 1.0 - da * db;
      if (std::abs(det) > 1e-300) {
        const Magnetization cand{m.m_a + (fa + da * fb) / det, m.m_b + (fb + db * fa) / det};
        if (in_box(cand)) {
          const Magnetization cand_target = apply_map(cand, params, t);
          const double cand_residual = sup_distance(cand_target, cand);
          if (cand_residual < residual) {
            m = cand;
            target = cand_target;
            residual = cand_residual;
            continue;
          }
        }
      }
    }

    const double step_a = target.m_a - m.m_a;
    const int sign = (step_a > 0.0) - (step_a < 0.0);
    flips = (sign != 0 && sign == -last_sign) ? flips + 1 : 0;
    last_sign = sign;
    if (flips >= config.oscillation_window) {
      eta = std::max(0.5 * eta, config.min_damping);
      flips = 0;
    }
    m.m_a = (1.0 - eta) * m.m_a + eta * target.m_a;
    m.m_b = (1.0 - eta) * m.m_b + eta * target.m_b;
    target = apply_map(m, params, t);
    residual = sup_distance(target, m);
  }

  out.converged = residual <= config.tolerance;
  // The paramagnetic point is an exact fixed point whenever the map sends it to itself.
  // Near Tc the iteration crawls, so a converged state can stop well short of it; when
  // the origin is linearly stable nothing else lives that close, and we snap.
  const double dist = std::max(std::abs(m.m_a), std::abs(m.m_b));
  if (out.converged && dist <= std::max(10.0 * config.tolerance, std::sqrt(config.tolerance))) {
    const Magnetization origin_image = apply_map({0.0, 0.0}, params, t);
    if (origin_image.m_a == 0.0 && origin_image.m_b == 0.0) {
      const EffectiveFields f0 = effective_fields(0.0, 0.0, params);
      const double gain = 8.0 * params.j_ab * params.j_ab * map_m_a_slope(f0, t) * map_m_b_slope(f0, t);
      if (dist <= 10.0 * config.tolerance || gain < 1.0) {
        m = {0.0, 0.0};
        residual = 0.0;
      }
    }
  }
  out.m_a = m.m_a;
  out.m_b = m.m_b;
  out.fields = effective_fields(m.m_a, m.m_b, params);
  out.free_energy_per_site = free_energy_per_site(m.m_a, m.m_b, params, t);
  out.iterations = it;
  out.residual = residual;
  return out;
}

std::vector<SelfConsistentState> solve_self_consistent(const ModelParams& params, double t,
                                                       const SolverConfig& config) {
  config.validate();
  std::vector<SelfConsistentState> converged;
  std::vector<SelfConsistentState> failed;
  const double radius = 10.0 * config.tolerance;
  for (const auto& seed : config.seeds) {
    SelfConsistentState s = iterate_from(seed, params, t, config);
    if (!s.converged) {
      failed.push_back(s);
      continue;
    }
    const bool duplicate = std::any_of(converged.begin(), converged.end(), [&](const auto& c) {
      return std::max(std::abs(c.m_a - s.m_a), std::abs(c.m_b - s.m_b)) <= radius;
    });
    if (!duplicate) converged.push_back(s);
  }
  converged.insert(converged.end(), failed.begin(), failed.end());
  return converged;
}

SelfConsistentState select_equilibrium(std::span<const SelfConsistentState> states) {
  const SelfConsistentState* best = nullptr;
  for (const auto& s : states) {
    if (!s.converged) continue;
    if (best == nullptr) {
      best = &s;
      continue;
    }
    const double diff = s.free_energy_per_site - best->free_energy_per_site;
    if (diff < -kTieTolerance || (std::abs(diff) <= kTieTolerance && s.m_a >= 0.0 && best->m_a < 0.0)) {
      best = &s;
    }
  }
  if (best == nullptr) throw NoConvergedBranch("no seed converged to a self-consistent state");
  return *best;
}

SelfConsistentState equilibrium_state(const ModelParams& params, double t, const SolverConfig& config) {
  const auto states = solve_self_consistent(params, t, config);
  return select_equilibrium(states);
}

int converged_branch_count(std::span<const SelfConsistentState> states) {
  return static_cast<int>(std::count_if(states.begin(), states.end(), [](const auto& s) { return s.converged; }));
}

}  // namespace tkl
