#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tkl/mean_field.hpp"
#include "tkl/model.hpp"

namespace tkl {

// Zero-temperature phases of the a-sublattice:
//   I   m_a = +1/6, C = 1/3, ground doublet {psi_5, psi_6}
//   II  m_a = -1/6, C = 1/3, ground doublet {psi_2, psi_3}
//   III m_a = +1/2, C = 0,   ground state psi_8 = |111> (all up)
//   IV  m_a = -1/2, C = 0,   ground state psi_1 = |000>
enum class PhaseTag { I, II, III, IV };

std::string to_string(PhaseTag tag);

struct PhaseLabel {
  PhaseTag tag = PhaseTag::I;
  double m_a = 0.0;
  double m_b = 0.0;
  double concurrence = 0.0;
  std::vector<int> ground_states;  // 1-based psi indices
  double energy_per_site = 0.0;
  bool degenerate_boundary = false;
};

PhaseLabel zero_temperature_phase(double j_aa, double j_ab, double h);

// Field at which the trimer ground state crosses from the psi_5/psi_6 doublet to psi_8
// with the monomers saturated: 3 J_aa / 2 - J_ab.
double saturation_field(double j_aa, double j_ab);

enum class CriticalMethod { onset_bisection, linearized_map };

std::string to_string(CriticalMethod method);

struct CriticalResult {
  double tc = 0.0;
  CriticalMethod method = CriticalMethod::onset_bisection;
  std::pair<double, double> bracket{0.0, 0.0};
  // linearized_map only: cubic coefficient of the composed map at Tc and whether it is
  // negative as a continuous transition requires.
  double cubic_coefficient = 0.0;
  bool cubic_sign_ok = true;
};

inline constexpr double kSpontaneousThreshold = 1e-8;

// Bisection on "spontaneous |m_a| at H = 0 exceeds 1e-8". Throws BracketFailure when the
// indicator is the same at both ends.
CriticalResult critical_temperature_onset(double j_aa, double alpha, std::pair<double, double> bracket,
                                          double tol = 1e-10, const SolverConfig& config = {});

// Root of a(T) = 1, where a is the slope at m = 0 of the composed zero-field map
// m_a -> map_m_a(2 J_ab map_m_b(4 J_ab m_a)). Throws BracketFailure if a < 1 everywhere.
CriticalResult critical_temperature_linearized(double j_aa, double alpha, double tol = 1e-12);

// Slope and cubic coefficient of the composed zero-field map, by finite differences.
double linear_map_coefficient(double j_aa, double j_ab, double t);
double cubic_map_coefficient(double j_aa, double j_ab, double t);

// Temperature above which the concurrence vanishes at fixed field, by bisection on C > 0.
double concurrence_threshold(const ModelParams& params, std::pair<double, double> bracket,
                             double tol = 1e-10, const SolverConfig& config = {});

struct CurvePoint {
  double x = 0.0;
  double m = 0.0;
};

struct Plateau {
  double x_start = 0.0;
  double x_end = 0.0;
  double level = 0.0;
  std::size_t first = 0;
  std::size_t last = 0;
};

// Maximal runs of >= 3 consecutive points with |m - round(6m)/6| < tol at a common level.
std::vector<Plateau> detect_plateaus(std::span<const CurvePoint> curve, double tol);

}  // namespace tkl
