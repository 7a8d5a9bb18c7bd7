#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tkl/emit.hpp"
#include "tkl/mean_field.hpp"
#include "tkl/model.hpp"

namespace tkl {

enum class AxisName { T, H, J_aa, alpha };
enum class Spacing { linear, log };

std::string to_string(AxisName name);

struct Axis {
  AxisName name = AxisName::T;
  double start = 0.0;
  double stop = 1.0;
  int count = 2;
  Spacing spacing = Spacing::linear;

  // count >= 2, start != stop, positive endpoints for log spacing, T > 0.
  void validate() const;
  // Endpoints are reproduced exactly.
  std::vector<double> values() const;
};

enum class Observable { m_a, m_b, chi_a, u, c, C, f, gamma_a, gamma_b };

std::string to_string(Observable obs);
Observable parse_observable(std::string_view text);
// Comma-separated list, e.g. "m_a,C,chi_a".
std::vector<Observable> parse_observables(std::string_view text);
// The cheap set: m_a, m_b, C, f, gamma_a, gamma_b.
std::vector<Observable> default_observables();

// One parameter point. J_ab is alpha |J_aa| unless fixed explicitly.
struct PointCoordinates {
  double t = 0.01;
  double h = 0.0;
  double j_aa = 1.0;
  double alpha = 0.025;
  std::optional<double> j_ab;

  ModelParams params() const;
  double resolved_alpha() const;  // NaN if J_ab is fixed and J_aa = 0
  void set(AxisName name, double value);
};

struct ResultRow {
  PointCoordinates at;
  std::vector<std::optional<double>> values;  // aligned with the requested observables
  bool converged = false;
  int branch_count = 0;
};

// Evaluates one point. With `seed`, the reported state is the branch reached from
// that seed (falling back to the equilibrium if it fails); the default seeds are
// still solved so branch_count counts every converged branch. Never throws on
// solver failure: failed cells are empty and converged is false.
ResultRow run_point(const PointCoordinates& at, std::span<const Observable> observables,
                    const SolverConfig& config = {}, std::optional<Magnetization> seed = std::nullopt,
                    std::optional<Magnetization>* reached = nullptr);

struct SweepSpec {
  PointCoordinates fixed;
  Axis axis1;
  std::optional<Axis> axis2;
  std::vector<Observable> observables = default_observables();
  bool continuation = false;
  SolverConfig solver;
  int workers = 1;

  void validate() const;
};

// Rows ordered by (axis1 index, axis2 index) whatever the worker count. With
// continuation, each axis2 line walks axis1 in order, seeding every point from the
// state reached at its predecessor.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

// Columns T,H,J_aa,alpha,J_ab,<observables>,converged,branch_count.
Table to_table(std::span<const ResultRow> rows, std::span<const Observable> observables);

// Worker count from an explicit value, else TKL_WORKERS, else hardware concurrency.
int resolve_worker_count(std::optional<int> requested);

}  // namespace tkl
