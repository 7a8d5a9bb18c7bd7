#include "tkl/phase.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tkl/entanglement.hpp"
#include "tkl/errors.hpp"
#include "tkl/trimer.hpp"

namespace tkl {

namespace {

constexpr double kEnergyTie = 1e-12;

struct Candidate {
  double m_a = 0.0;
  double m_b = 0.0;
  double energy = 0.0;
  bool consistent = false;
  bool degenerate = false;
  std::vector<int> ground;
};

PhaseTag tag_for(double m_a) {
  if (m_a > 0.25) return PhaseTag::III;
  if (m_a < -0.25) return PhaseTag::IV;
  return m_a > 0.0 ? PhaseTag::I : PhaseTag::II;
}

Candidate evaluate_candidate(double m_a, double m_b, double j_aa, double j_ab, double h) {
  Candidate c;
  c.m_a = m_a;
  c.m_b = m_b;
  const EffectiveFields f = effective_fields(m_a, m_b, ModelParams{j_aa, j_ab, h});
  const TrimerSpectrum spec = trimer_energies(f);
  const double e0 = spec.ground_energy();
  const double scale = std::max({1.0, std::abs(j_aa), std::abs(f.gamma_a)});
  bool sz_matches = false;
  std::vector<double> implied;
  for (int k = 0; k < kTrimerDim; ++k) {
    if (spec.energies[k] - e0 <= kEnergyTie * scale) {
      c.ground.push_back(k + 1);
      const double m = spec.total_sz[k] / 3.0;
      if (std::abs(m - m_a) < 1e-12) sz_matches = true;
      if (std::none_of(implied.begin(), implied.end(), [m](double x) { return std::abs(x - m) < 1e-12; })) {
        implied.push_back(m);
      }
    }
  }
  // keep only the ground states compatible with the candidate magnetization
  std::erase_if(c.ground, [&](int k) { return std::abs(spec.total_sz[k - 1] / 3.0 - m_a) > 1e-12; });

  const double gb_tie = kEnergyTie * std::max(1.0, std::abs(h));
  const bool monomer_ok = std::abs(f.gamma_b) <= gb_tie || (f.gamma_b > 0.0) == (m_b > 0.0);
  c.consistent = sz_matches && monomer_ok;
  c.degenerate = implied.size() > 1 || std::abs(f.gamma_b) <= gb_tie;
  c.energy = (2.0 / 9.0) * (e0 - 0.75 * std::abs(f.gamma_b) + 6.0 * j_ab * m_a * m_b);
  return c;
}

// true if a is preferred over b on an energy tie: lower |m_a|, then m_a >= 0
bool tie_preferred(const Candidate& a, const Candidate& b) {
  if (std::abs(std::abs(a.m_a) - std::abs(b.m_a)) > 1e-12) return std::abs(a.m_a) < std::abs(b.m_a);
  return a.m_a >= 0.0 && b.m_a < 0.0;
}

double composed_zero_field_map(double j_aa, double j_ab, double t, double m_a) {
  const EffectiveFields fb{j_aa, 0.0, 4.0 * j_ab * m_a};
  const double m_b = map_m_b(fb, t);
  const EffectiveFields fa{j_aa, 2.0 * j_ab * m_b, 0.0};
  return map_m_a(fa, t);
}

void require_bracket(std::pair<double, double> bracket) {
  if (!(bracket.first > 0.0 && bracket.second > bracket.first)) {
    throw std::invalid_argument("temperature bracket must satisfy 0 < lo < hi");
  }
}

}  // namespace

std::string to_string(PhaseTag tag) {
  switch (tag) {
    case PhaseTag::I: return "I";
    case PhaseTag::II: return "II";
    case PhaseTag::III: return "III";
    case PhaseTag::IV: return "IV";
  }
  return "?";
}

std::string to_string(CriticalMethod method) {
  return method == CriticalMethod::onset_bisection ? "onset-bisection" : "linearized-map";
}

PhaseLabel zero_temperature_phase(double j_aa, double j_ab, double h) {
  std::vector<Candidate> all;
  for (double ma : {1.0 / 6.0, -1.0 / 6.0, 0.5, -0.5}) {
    for (double mb : {0.5, -0.5}) all.push_back(evaluate_candidate(ma, mb, j_aa, j_ab, h));
  }

  std::vector<const Candidate*> pool;
  for (const auto& c : all) {
    if (c.consistent) pool.push_back(&c);
  }
  const bool fallback = pool.empty();
  if (fallback) {
    for (const auto& c : all) pool.push_back(&c);
  }

  const Candidate* best = pool.front();
  bool tie = false;
  for (const Candidate* c : pool) {
    if (c == best) continue;
    const double diff = c->energy - best->energy;
    if (diff < -kEnergyTie) {
      best = c;
      tie = false;
    } else if (std::abs(diff) <= kEnergyTie) {
      if (std::abs(c->m_a - best->m_a) > 1e-12) tie = true;
      if (tie_preferred(*c, *best)) best = c;
    }
  }

  PhaseLabel label;
  label.tag = tag_for(best->m_a);
  label.m_a = best->m_a;
  label.m_b = best->m_b;
  label.concurrence = std::abs(best->m_a) < 0.25 ? 1.0 / 3.0 : 0.0;
  label.ground_states = best->ground;
  label.energy_per_site = best->energy;
  label.degenerate_boundary = fallback || tie || best->degenerate;
  return label;
}

double saturation_field(double j_aa, double j_ab) {
  if (!(j_aa > 0.0)) throw std::invalid_argument("saturation field requires antiferromagnetic J_aa > 0");
  return 1.5 * j_aa - j_ab;
}

CriticalResult critical_temperature_onset(double j_aa, double alpha, std::pair<double, double> bracket,
                                          double tol, const SolverConfig& config) {
  if (!(j_aa > 0.0)) throw std::invalid_argument("onset Tc requires J_aa > 0");
  if (alpha < 0.0) throw std::invalid_argument("onset Tc requires alpha >= 0");
  require_bracket(bracket);
  const ModelParams params = ModelParams::from_ratio(j_aa, alpha, 0.0);
  auto ordered = [&](double t) {
    return std::abs(equilibrium_state(params, t, config).m_a) > kSpontaneousThreshold;
  };

  double lo = bracket.first;
  double hi = bracket.second;
  const bool at_lo = ordered(lo);
  const bool at_hi = ordered(hi);
  if (at_lo == at_hi || !at_lo) {
    throw BracketFailure("spontaneous magnetization indicator does not change sign on [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (ordered(mid) ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), CriticalMethod::onset_bisection, {lo, hi}, 0.0, true};
}

double linear_map_coefficient(double j_aa, double j_ab, double t) {
  constexpr double d = 1e-6;
  return (composed_zero_field_map(j_aa, j_ab, t, d) - composed_zero_field_map(j_aa, j_ab, t, -d)) / (2.0 * d);
}

double cubic_map_coefficient(double j_aa, double j_ab, double t) {
  constexpr double d = 1e-3;
  // G(2d) - 2 G(d) = 6 b d^3 + O(d^5)
  return (composed_zero_field_map(j_aa, j_ab, t, 2.0 * d) - 2.0 * composed_zero_field_map(j_aa, j_ab, t, d)) /
         (6.0 * d * d * d);
}

CriticalResult critical_temperature_linearized(double j_aa, double alpha, double tol) {
  if (!(j_aa > 0.0)) throw std::invalid_argument("linearized Tc requires J_aa > 0");
  if (alpha < 0.0) throw std::invalid_argument("linearized Tc requires alpha >= 0");
  const double j_ab = alpha * j_aa;
  auto excess = [&](double t) { return linear_map_coefficient(j_aa, j_ab, t) - 1.0; };

  // a(T) decreases with T; walk down from well above every coupling scale.
  double hi = 4.0 * std::max(std::abs(j_aa), std::abs(j_ab));
  while (excess(hi) >= 0.0) hi *= 2.0;
  double lo = 0.5 * hi;
  constexpr double kFloor = 1e-9;
  while (excess(lo) < 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < kFloor * std::abs(j_aa)) {
      throw BracketFailure("linear coefficient of the zero-field map never reaches 1");
    }
  }
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) >= 0.0 ? lo : hi) = mid;
  }
  CriticalResult r{0.5 * (lo + hi), CriticalMethod::linearized_map, {lo, hi}, 0.0, true};
  r.cubic_coefficient = cubic_map_coefficient(j_aa, j_ab, r.tc);
  r.cubic_sign_ok = r.cubic_coefficient < 0.0;
  return r;
}

double concurrence_threshold(const ModelParams& params, std::pair<double, double> bracket, double tol,
                             const SolverConfig& config) {
  require_bracket(bracket);
  auto entangled = [&](double t) { return concurrence_at(params, t, config).value > 0.0; };
  double lo = bracket.first;
  double hi = bracket.second;
  if (!entangled(lo) || entangled(hi)) {
    throw BracketFailure("concurrence does not vanish inside [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (entangled(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<Plateau> detect_plateaus(std::span<const CurvePoint> curve, double tol) {
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].x < curve[i - 1].x) throw std::invalid_argument("plateau detection needs a curve sorted in x");
  }
  std::vector<Plateau> out;
  constexpr std::size_t kMinRun = 3;
  auto level_of = [](double m) { return std::round(6.0 * m) / 6.0; };
  std::size_t i = 0;
  while (i < curve.size()) {
    const double level = level_of(curve[i].m);
    if (std::abs(curve[i].m - level) >= tol) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < curve.size() && level_of(curve[j + 1].m) == level && std::abs(curve[j + 1].m - level) < tol) ++j;
    if (j - i + 1 >= kMinRun) out.push_back({curve[i].x, curve[j].x, level, i, j});
    i = j + 1;
  }
  return out;
}

}  // namespace tkl
