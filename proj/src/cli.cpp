#include "tkl/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tkl/emit.hpp"
#include "tkl/errors.hpp"
#include "tkl/phase.hpp"
#include "tkl/sweep.hpp"
#include "tkl/version.hpp"

namespace tkl::cli {

namespace {

// A flag that takes either a single value or start:stop:count[:log|:lin].
struct ValueOrRange {
  std::optional<double> value;
  std::optional<Axis> range;
};

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("bad number '" + std::string(text) + "' for " + std::string(what));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

ValueOrRange parse_value_or_range(const std::string& text, AxisName name) {
  ValueOrRange out;
  const std::string label = "--" + to_string(name);
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    out.value = parse_double(parts[0], label);
    return out;
  }
  if (parts.size() != 3 && parts.size() != 4) {
    throw std::invalid_argument("expected value or start:stop:count[:log] for " + label + ", got '" + text + "'");
  }
  Axis axis;
  axis.name = name;
  axis.start = parse_double(parts[0], label);
  axis.stop = parse_double(parts[1], label);
  int count = 0;
  const auto res = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
  if (res.ec != std::errc{} || res.ptr != parts[2].data() + parts[2].size()) {
    throw std::invalid_argument("bad point count '" + std::string(parts[2]) + "' for " + label);
  }
  axis.count = count;
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      axis.spacing = Spacing::log;
    } else if (parts[3] != "lin") {
      throw std::invalid_argument("spacing must be 'log' or 'lin', got '" + std::string(parts[3]) + "'");
    }
  }
  axis.validate();
  out.range = axis;
  return out;
}

std::vector<Magnetization> parse_seeds(const std::string& text) {
  std::vector<Magnetization> seeds;
  for (auto item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw std::invalid_argument("seed must be m_a:m_b, got '" + std::string(item) + "'");
    seeds.push_back({parse_double(parts[0], "--seeds"), parse_double(parts[1], "--seeds")});
  }
  return seeds;
}

std::pair<double, double> parse_bracket(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw std::invalid_argument("bracket must be lo:hi, got '" + text + "'");
  return {parse_double(parts[0], "--bracket"), parse_double(parts[1], "--bracket")};
}

struct Options {
  std::string jaa = "1";
  std::string alpha = "0.025";
  std::optional<double> jab;
  std::string field = "0";
  std::optional<std::string> temp;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<double> damping;
  std::optional<std::string> seeds;
  bool continuation = false;
  std::optional<std::string> observables;
  std::string format = "csv";
  std::optional<std::string> output;
  std::optional<std::string> plot;
  std::optional<int> workers;
  std::optional<std::string> bracket;
};

// Parsed view of the physical flags.
struct Resolved {
  PointCoordinates fixed;
  std::vector<Axis> ranges;  // in T, H, J_aa, alpha order
  SolverConfig solver;
  OutputFormat format = OutputFormat::csv;
};

Resolved resolve(const Options& o, bool alpha_given) {
  Resolved r;
  auto take = [&](const std::string& text, AxisName name, double& slot) {
    const ValueOrRange v = parse_value_or_range(text, name);
    if (v.range) {
      r.ranges.push_back(*v.range);
      slot = v.range->start;
    } else {
      slot = *v.value;
    }
  };
  if (o.temp) {
    take(*o.temp, AxisName::T, r.fixed.t);
  } else {
    r.fixed.t = std::numeric_limits<double>::quiet_NaN();
  }
  take(o.field, AxisName::H, r.fixed.h);
  take(o.jaa, AxisName::J_aa, r.fixed.j_aa);
  if (o.jab) {
    if (alpha_given) throw std::invalid_argument("--alpha and --jab are mutually exclusive");
    r.fixed.j_ab = *o.jab;
  } else {
    take(o.alpha, AxisName::alpha, r.fixed.alpha);
    if (r.fixed.alpha < 0.0) throw std::invalid_argument("--alpha must be non-negative");
  }
  if (o.tol) r.solver.tolerance = *o.tol;
  if (o.max_iter) r.solver.max_iterations = *o.max_iter;
  if (o.damping) r.solver.damping = *o.damping;
  if (o.seeds) r.solver.seeds = parse_seeds(*o.seeds);
  r.solver.validate();
  r.format = parse_output_format(o.format);
  return r;
}

void require_temperature(const Resolved& r) {
  if (std::isnan(r.fixed.t)) throw std::invalid_argument("--temp is required");
}

void require_scalar(const Resolved& r, const char* command) {
  if (!r.ranges.empty()) {
    throw std::invalid_argument(std::string(command) + " takes single values, not ranges");
  }
}

void write_output(const Table& table, const Resolved& r, const Options& o, std::ostream& out) {
  if (o.output) {
    emit(table, r.format, *o.output);
  } else {
    write_table(table, r.format, out);
  }
}

int cmd_point(const Options& o, const Resolved& r, std::ostream& out) {
  require_scalar(r, "point");
  require_temperature(r);
  const auto observables = o.observables ? parse_observables(*o.observables) : default_observables();
  const ResultRow row = run_point(r.fixed, observables, r.solver);
  const std::vector<ResultRow> rows{row};
  write_output(to_table(rows, observables), r, o, out);
  return row.converged ? kExitOk : kExitPartialFailure;
}

int cmd_sweep(const Options& o, const Resolved& r, std::ostream& out, std::ostream& err, std::size_t axes) {
  const char* name = axes == 1 ? "sweep" : "grid";
  if (r.ranges.size() != axes) {
    throw std::invalid_argument(std::string(name) + " needs exactly " + std::to_string(axes) +
                                " range flag(s) of the form start:stop:count");
  }
  SweepSpec spec;
  spec.fixed = r.fixed;
  spec.axis1 = r.ranges[0];
  if (axes == 2) spec.axis2 = r.ranges[1];
  if (spec.axis1.name != AxisName::T && !(spec.axis2 && spec.axis2->name == AxisName::T)) require_temperature(r);
  if (o.observables) spec.observables = parse_observables(*o.observables);
  spec.continuation = o.continuation;
  spec.solver = r.solver;
  spec.workers = resolve_worker_count(o.workers);

  std::optional<FigureId> figure;
  if (o.plot) {
    figure = parse_figure_id(*o.plot);
    if (!o.output || r.format != OutputFormat::csv) {
      throw std::invalid_argument("--plot needs --output and csv format");
    }
  }

  const auto rows = run_sweep(spec);
  const Table table = to_table(rows, spec.observables);
  if (figure) plot_script(table, *figure, "check");  // MissingColumn before any file is written
  write_output(table, r, o, out);
  if (figure) {
    std::filesystem::path script = *o.output;
    script.replace_extension(".gp");
    emit_plot_script(table, *figure, *o.output, script);
  }

  std::size_t failed = 0;
  for (const auto& row : rows) failed += row.converged ? 0 : 1;
  if (failed > 0) {
    err << name << ": " << failed << " of " << rows.size() << " points did not converge\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

double scalar_alpha(const Resolved& r) {
  if (!r.fixed.j_ab) return r.fixed.alpha;
  if (!(r.fixed.j_aa > 0.0)) throw std::invalid_argument("--jab needs J_aa > 0 here");
  return *r.fixed.j_ab / r.fixed.j_aa;
}

int cmd_tc(const Options& o, const Resolved& r, std::ostream& out, std::ostream& err) {
  require_scalar(r, "tc");
  const double j_aa = r.fixed.j_aa;
  const double alpha = scalar_alpha(r);
  const auto bracket = o.bracket ? parse_bracket(*o.bracket) : std::pair{1e-4 * j_aa, j_aa};

  Table table;
  table.columns = {"method", "J_aa", "alpha", "tc", "bracket_lo", "bracket_hi", "cubic_coefficient", "cubic_sign_ok"};
  int status = kExitOk;
  auto add = [&](const CriticalResult& c) {
    table.rows.push_back({to_string(c.method), j_aa, alpha, c.tc, c.bracket.first, c.bracket.second,
                          c.method == CriticalMethod::linearized_map ? Cell{c.cubic_coefficient} : Cell{},
                          c.method == CriticalMethod::linearized_map ? Cell{c.cubic_sign_ok} : Cell{}});
  };
  auto failed = [&](CriticalMethod m, const std::exception& e) {
    err << "tc (" << to_string(m) << "): " << e.what() << '\n';
    table.rows.push_back({to_string(m), j_aa, alpha, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}});
    status = kExitPartialFailure;
  };
  try {
    add(critical_temperature_onset(j_aa, alpha, bracket, 1e-10, r.solver));
  } catch (const std::runtime_error& e) {
    failed(CriticalMethod::onset_bisection, e);
  }
  try {
    const CriticalResult lin = critical_temperature_linearized(j_aa, alpha);
    if (!lin.cubic_sign_ok) err << "tc: cubic coefficient " << lin.cubic_coefficient << " is not negative at Tc\n";
    add(lin);
  } catch (const std::runtime_error& e) {
    failed(CriticalMethod::linearized_map, e);
  }
  write_output(table, r, o, out);
  return status;
}

int cmd_threshold(const Options& o, const Resolved& r, std::ostream& out, std::ostream& err) {
  std::vector<double> fields{r.fixed.h};
  for (const Axis& a : r.ranges) {
    if (a.name != AxisName::H) throw std::invalid_argument("threshold only accepts a range for --field");
    fields = a.values();
  }
  const double scale = std::max(std::abs(r.fixed.j_aa), 1.0);
  const auto bracket = o.bracket ? parse_bracket(*o.bracket) : std::pair{1e-4 * scale, 2.0 * scale};

  Table table;
  table.columns = {"H", "J_aa", "alpha", "J_ab", "T_threshold"};
  int status = kExitOk;
  for (double h : fields) {
    PointCoordinates at = r.fixed;
    at.h = h;
    const ModelParams p = at.params();
    Cell value;
    try {
      value = concurrence_threshold(p, bracket, 1e-10, r.solver);
    } catch (const std::runtime_error& e) {
      err << "threshold at H=" << format_number(h) << ": " << e.what() << '\n';
      status = kExitPartialFailure;
    }
    const double a = at.resolved_alpha();
    table.rows.push_back({h, p.j_aa, std::isfinite(a) ? Cell{a} : Cell{}, p.j_ab, value});
  }
  write_output(table, r, o, out);
  return status;
}

int cmd_phase0(const Options& o, const Resolved& r, std::ostream& out) {
  std::vector<double> jaas{r.fixed.j_aa};
  std::vector<double> fields{r.fixed.h};
  for (const Axis& a : r.ranges) {
    if (a.name == AxisName::J_aa) {
      jaas = a.values();
    } else if (a.name == AxisName::H) {
      fields = a.values();
    } else {
      throw std::invalid_argument("phase0 accepts ranges for --jaa and --field only");
    }
  }
  Table table;
  table.columns = {"J_aa", "H", "J_ab", "phase", "m_a", "m_b", "C", "ground_states", "energy", "degenerate"};
  for (double j : jaas) {
    for (double h : fields) {
      PointCoordinates at = r.fixed;
      at.j_aa = j;
      at.h = h;
      const ModelParams p = at.params();
      const PhaseLabel label = zero_temperature_phase(p.j_aa, p.j_ab, p.h);
      std::string ground;
      for (int k : label.ground_states) ground += (ground.empty() ? "" : " ") + std::to_string(k);
      table.rows.push_back({j, h, p.j_ab, to_string(label.tag), label.m_a, label.m_b, label.concurrence, ground,
                            label.energy_per_site, label.degenerate_boundary});
    }
  }
  write_output(table, r, o, out);
  return kExitOk;
}

int cmd_saturation(const Options& o, const Resolved& r, std::ostream& out) {
  require_scalar(r, "saturation");
  const ModelParams p = r.fixed.params();
  Table table;
  table.columns = {"J_aa", "J_ab", "H_s"};
  table.rows.push_back({p.j_aa, p.j_ab, saturation_field(p.j_aa, p.j_ab)});
  write_output(table, r, o, out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean-field thermodynamics and trimer entanglement of the triangulated Kagome Ising-Heisenberg model",
               "tkl-meanfield"};
  app.set_version_flag("--version", std::string("tkl-meanfield ") + kVersion);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.require_subcommand(1, 1);
  app.fallthrough();

  Options o;
  app.add_option("--jaa", o.jaa, "intra-trimer Heisenberg coupling J_aa (value or start:stop:count[:log])")
      ->capture_default_str();
  auto* alpha_opt = app.add_option("--alpha", o.alpha, "|J_ab / J_aa| (value or range)")->capture_default_str();
  auto* jab_opt = app.add_option("--jab", o.jab, "trimer-monomer Ising coupling J_ab");
  alpha_opt->excludes(jab_opt);
  app.add_option("--field", o.field, "external field H (value or range)")->capture_default_str();
  app.add_option("--temp", o.temp, "temperature T > 0 (value or range)");
  app.add_option("--tol", o.tol, "fixed-point tolerance");
  app.add_option("--max-iter", o.max_iter, "iteration cap per seed");
  app.add_option("--damping", o.damping, "initial mixing weight in (0, 1]");
  app.add_option("--seeds", o.seeds, "seed list m_a:m_b,m_a:m_b,...");
  app.add_flag("--continuation", o.continuation, "seed each sweep point from its predecessor");
  app.add_option("--observables", o.observables, "comma list from m_a,m_b,chi_a,u,c,C,f,gamma_a,gamma_b");
  app.add_option("--format", o.format, "csv or json")->capture_default_str();
  app.add_option("--output", o.output, "output file (default: standard output)");
  app.add_option("--plot", o.plot, "also write a gnuplot script for this figure id next to --output");
  app.add_option("--workers", o.workers, "worker threads (default: TKL_WORKERS, then hardware)");
  app.add_option("--bracket", o.bracket, "temperature bracket lo:hi for tc and threshold");

  auto* point = app.add_subcommand("point", "evaluate one parameter point");
  auto* sweep = app.add_subcommand("sweep", "1-D sweep over one ranged flag");
  auto* grid = app.add_subcommand("grid", "2-D grid over two ranged flags");
  auto* tc = app.add_subcommand("tc", "critical temperature at H = 0 by two methods");
  auto* threshold = app.add_subcommand("threshold", "temperature where the concurrence vanishes");
  auto* phase0 = app.add_subcommand("phase0", "zero-temperature phase label");
  auto* saturation = app.add_subcommand("saturation", "saturation field 3 J_aa / 2 - J_ab");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadArguments;
  }

  try {
    const Resolved r = resolve(o, alpha_opt->count() > 0);
    if (*point) return cmd_point(o, r, out);
    if (*sweep) return cmd_sweep(o, r, out, err, 1);
    if (*grid) return cmd_sweep(o, r, out, err, 2);
    if (*tc) return cmd_tc(o, r, out, err);
    if (*threshold) return cmd_threshold(o, r, out, err);
    if (*phase0) return cmd_phase0(o, r, out);
    if (*saturation) return cmd_saturation(o, r, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadArguments;
  } catch (const MissingColumn& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadArguments;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitPartialFailure;
  }
  return kExitBadArguments;
}

}  // namespace tkl::cli
