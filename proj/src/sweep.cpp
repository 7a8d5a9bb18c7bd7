#include "tkl/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "tkl/entanglement.hpp"
#include "tkl/errors.hpp"
#include "tkl/observables.hpp"

namespace tkl {

namespace {

constexpr std::array<std::pair<Observable, const char*>, 9> kObservableNames{{
    {Observable::m_a, "m_a"},
    {Observable::m_b, "m_b"},
    {Observable::chi_a, "chi_a"},
    {Observable::u, "u"},
    {Observable::c, "c"},
    {Observable::C, "C"},
    {Observable::f, "f"},
    {Observable::gamma_a, "gamma_a"},
    {Observable::gamma_b, "gamma_b"},
}};

double observable_value(Observable obs, const SelfConsistentState& s, const ModelParams& params, double t,
                        const SolverConfig& branch) {
  switch (obs) {
    case Observable::m_a: return s.m_a;
    case Observable::m_b: return s.m_b;
    case Observable::f: return s.free_energy_per_site;
    case Observable::gamma_a: return s.fields.gamma_a;
    case Observable::gamma_b: return s.fields.gamma_b;
    case Observable::C: return concurrence_xstate(reduced_density_matrix(s.fields, t)).value;
    case Observable::chi_a: return susceptibility(params, t, default_field_step(params.h), branch).value;
    case Observable::u: return internal_energy(params, t, kDefaultRelativeTemperatureStep, branch);
    case Observable::c: return specific_heat(params, t, kDefaultRelativeTemperatureStep, branch);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// Squared eigenvalue of the linearized map at a fixed point; the Jacobian has only the
// off-diagonal entries dm_a'/dm_b and dm_b'/dm_a.
double map_gain(const SelfConsistentState& s, const ModelParams& params, double t) {
  return 8.0 * params.j_ab * params.j_ab * map_m_a_slope(s.fields, t) * map_m_b_slope(s.fields, t);
}

// Runs task(i) for i in [0, n) on `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task) {
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  }
}

}  // namespace

std::string to_string(AxisName name) {
  switch (name) {
    case AxisName::T: return "T";
    case AxisName::H: return "H";
    case AxisName::J_aa: return "J_aa";
    case AxisName::alpha: return "alpha";
  }
  return "?";
}

void Axis::validate() const {
  const std::string label = to_string(name);
  if (count < 2) throw std::invalid_argument(label + " axis needs at least 2 points");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw std::invalid_argument(label + " axis endpoints must be finite");
  if (start == stop) throw std::invalid_argument(label + " axis start and stop coincide");
  if (spacing == Spacing::log && !(start > 0.0 && stop > 0.0)) {
    throw std::invalid_argument(label + " axis: log spacing needs positive endpoints");
  }
  if (name == AxisName::T && !(start > 0.0 && stop > 0.0)) {
    throw std::invalid_argument("temperature axis must stay strictly positive");
  }
  if (name == AxisName::alpha && (start < 0.0 || stop < 0.0)) {
    throw std::invalid_argument("alpha axis must be non-negative");
  }
}

std::vector<double> Axis::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(count));
  const double last = count - 1;
  for (int i = 0; i < count; ++i) {
    const double s = i / last;
    if (spacing == Spacing::log) {
      out[i] = std::exp(std::log(start) + s * (std::log(stop) - std::log(start)));
    } else {
      out[i] = start + s * (stop - start);
    }
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

std::string to_string(Observable obs) {
  for (const auto& [o, name] : kObservableNames) {
    if (o == obs) return name;
  }
  return "?";
}

Observable parse_observable(std::string_view text) {
  for (const auto& [o, name] : kObservableNames) {
    if (text == name) return o;
  }
  throw std::invalid_argument("unknown observable '" + std::string(text) + "'");
}

std::vector<Observable> parse_observables(std::string_view text) {
  std::vector<Observable> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw std::invalid_argument("empty entry in observable list");
    const Observable obs = parse_observable(item);
    if (std::find(out.begin(), out.end(), obs) == out.end()) out.push_back(obs);
    pos = comma + 1;
  }
  return out;
}

std::vector<Observable> default_observables() {
  return {Observable::m_a, Observable::m_b, Observable::C, Observable::f, Observable::gamma_a, Observable::gamma_b};
}

ModelParams PointCoordinates::params() const {
  if (j_ab) return ModelParams{j_aa, *j_ab, h};
  return ModelParams::from_ratio(j_aa, alpha, h);
}

double PointCoordinates::resolved_alpha() const {
  if (!j_ab) return alpha;
  if (j_aa == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return *j_ab / std::abs(j_aa);
}

void PointCoordinates::set(AxisName name, double value) {
  switch (name) {
    case AxisName::T: t = value; break;
    case AxisName::H: h = value; break;
    case AxisName::J_aa: j_aa = value; break;
    case AxisName::alpha: alpha = value; break;
  }
}

ResultRow run_point(const PointCoordinates& at, std::span<const Observable> observables, const SolverConfig& config,
                    std::optional<Magnetization> seed, std::optional<Magnetization>* reached) {
  require_positive_temperature(at.t);
  config.validate();
  ResultRow row;
  row.at = at;
  row.values.assign(observables.size(), std::nullopt);
  if (reached) reached->reset();
  const ModelParams params = at.params();

  SelfConsistentState state;
  try {
    const auto states = solve_self_consistent(params, at.t, config);
    row.branch_count = converged_branch_count(states);
    bool have_state = false;
    if (seed) {
      // only a linearly stable branch can be followed; the symmetric point below Tc
      // is an exact but unstable fixed point
      const SelfConsistentState followed = iterate_from(*seed, params, at.t, config);
      if (followed.converged && map_gain(followed, params, at.t) < 1.0) {
        state = followed;
        have_state = true;
      }
    }
    if (!have_state) state = select_equilibrium(states);
  } catch (const std::runtime_error&) {
    row.converged = false;
    return row;
  }
  if (reached) *reached = Magnetization{state.m_a, state.m_b};

  SolverConfig branch = config;
  branch.seeds = {Magnetization{state.m_a, state.m_b}};
  row.converged = true;
  for (std::size_t i = 0; i < observables.size(); ++i) {
    try {
      const double v = observable_value(observables[i], state, params, at.t, branch);
      if (std::isfinite(v)) {
        row.values[i] = v;
      } else {
        row.converged = false;
      }
    } catch (const std::runtime_error&) {
      row.converged = false;
    }
  }
  return row;
}

void SweepSpec::validate() const {
  axis1.validate();
  if (axis2) {
    axis2->validate();
    if (axis2->name == axis1.name) throw std::invalid_argument("grid axes must differ");
  }
  auto swept = [&](AxisName n) { return axis1.name == n || (axis2 && axis2->name == n); };
  if (fixed.j_ab && swept(AxisName::alpha)) {
    throw std::invalid_argument("cannot sweep alpha while J_ab is fixed");
  }
  if (!swept(AxisName::T)) require_positive_temperature(fixed.t);
  if (observables.empty()) throw std::invalid_argument("no observables requested");
  if (workers < 1) throw std::invalid_argument("worker count must be at least 1");
  solver.validate();
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> v1 = spec.axis1.values();
  const std::vector<double> v2 = spec.axis2 ? spec.axis2->values() : std::vector<double>{0.0};
  const std::size_t n1 = v1.size();
  const std::size_t n2 = v2.size();
  std::vector<ResultRow> rows(n1 * n2);

  auto coordinates = [&](std::size_t i, std::size_t j) {
    PointCoordinates at = spec.fixed;
    at.set(spec.axis1.name, v1[i]);
    if (spec.axis2) at.set(spec.axis2->name, v2[j]);
    return at;
  };

  if (spec.continuation) {
    parallel_for(n2, spec.workers, [&](std::size_t j) {
      std::optional<Magnetization> seed;
      for (std::size_t i = 0; i < n1; ++i) {
        std::optional<Magnetization> reached;
        rows[i * n2 + j] = run_point(coordinates(i, j), spec.observables, spec.solver, seed, &reached);
        if (reached) seed = reached;
      }
    });
  } else {
    parallel_for(n1 * n2, spec.workers, [&](std::size_t k) {
      rows[k] = run_point(coordinates(k / n2, k % n2), spec.observables, spec.solver);
    });
  }
  return rows;
}

Table to_table(std::span<const ResultRow> rows, std::span<const Observable> observables) {
  Table table;
  table.columns = {"T", "H", "J_aa", "alpha", "J_ab"};
  for (Observable o : observables) table.columns.push_back(to_string(o));
  table.columns.push_back("converged");
  table.columns.push_back("branch_count");

  auto number = [](double v) -> Cell {
    if (!std::isfinite(v)) return std::monostate{};
    return v;
  };
  table.rows.reserve(rows.size());
  for (const auto& r : rows) {
    const ModelParams p = r.at.params();
    std::vector<Cell> cells{number(r.at.t), number(r.at.h), number(r.at.j_aa), number(r.at.resolved_alpha()),
                            number(p.j_ab)};
    for (std::size_t i = 0; i < observables.size(); ++i) {
      if (i < r.values.size() && r.values[i]) {
        cells.push_back(number(*r.values[i]));
      } else {
        cells.emplace_back(std::monostate{});
      }
    }
    cells.emplace_back(r.converged);
    cells.emplace_back(static_cast<long long>(r.branch_count));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

int resolve_worker_count(std::optional<int> requested) {
  if (requested) {
    if (*requested < 1) throw std::invalid_argument("worker count must be at least 1");
    return *requested;
  }
  if (const char* env = std::getenv("TKL_WORKERS"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end && *end == '\0' && n >= 1 && n <= 4096) return static_cast<int>(n);
    throw std::invalid_argument(std::string("TKL_WORKERS must be a positive integer, got '") + env + "'");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace tkl
