#include "tkl/emit.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tkl/errors.hpp"
#include "tkl/version.hpp"

namespace tkl {

namespace {

constexpr std::array<std::pair<FigureId, const char*>, 12> kFigureNames{{
    {FigureId::fig2a, "fig2a"},
    {FigureId::fig2b, "fig2b"},
    {FigureId::fig3a, "fig3a"},
    {FigureId::fig3b, "fig3b"},
    {FigureId::fig4, "fig4"},
    {FigureId::fig5, "fig5"},
    {FigureId::fig8, "fig8"},
    {FigureId::fig9, "fig9"},
    {FigureId::fig10, "fig10"},
    {FigureId::fig11, "fig11"},
    {FigureId::fig12b, "fig12b"},
    {FigureId::fig13, "fig13"},
}};

enum class PlotKind { line, heat_map };

struct FigureLayout {
  PlotKind kind;
  const char* x;
  const char* y;
  const char* z;  // heat maps only
  const char* title;
};

FigureLayout layout_for(FigureId id) {
  switch (id) {
    case FigureId::fig2a: return {PlotKind::line, "H", "m_a", nullptr, "m_a versus H"};
    case FigureId::fig2b: return {PlotKind::line, "H", "m_a", nullptr, "m_a versus H, low temperature"};
    case FigureId::fig3a: return {PlotKind::line, "T", "m_a", nullptr, "m_a versus T, H = 0"};
    case FigureId::fig3b: return {PlotKind::line, "T", "m_a", nullptr, "m_a versus T"};
    case FigureId::fig4: return {PlotKind::line, "T", "chi_a", nullptr, "zero-field susceptibility"};
    case FigureId::fig5: return {PlotKind::line, "T", "chi_a", nullptr, "susceptibility versus T"};
    case FigureId::fig8: return {PlotKind::line, "T", "c", nullptr, "zero-field specific heat"};
    case FigureId::fig9: return {PlotKind::line, "T", "c", nullptr, "specific heat versus T"};
    case FigureId::fig10: return {PlotKind::line, "T", "C", nullptr, "concurrence versus T"};
    case FigureId::fig11: return {PlotKind::heat_map, "T", "H", "C", "concurrence over (T, H)"};
    case FigureId::fig12b: return {PlotKind::heat_map, "J_aa", "H", "C", "concurrence over (J_aa, H)"};
    case FigureId::fig13: return {PlotKind::heat_map, "J_aa", "H", "m_a", "m_a over (J_aa, H)"};
  }
  throw std::invalid_argument("unknown figure");
}

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<V, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<V, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<V, bool>) {
          return v ? "true" : "false";
        } else {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string quoted = "\"";
          for (char ch : v) {
            if (ch == '"') quoted += '"';
            quoted += ch;
          }
          return quoted + "\"";
        }
      },
      cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<V, double>) {
          // round through the CSV text so both formats carry the same digits
          const std::string text = format_number(v);
          if (text.empty()) return nullptr;
          double rounded = 0.0;
          std::from_chars(text.data(), text.data() + text.size(), rounded);
          return rounded;
        } else {
          return v;
        }
      },
      cell);
}

}  // namespace

bool Table::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::size_t Table::column_index(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw MissingColumn("missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + std::string(text) + "'");
}

std::string format_number(double value) {
  if (!std::isfinite(value)) return "";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

void write_csv(const Table& table, std::ostream& out) {
  out << "# tkl-meanfield v" << kVersion << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      obj[table.columns[i]] = i < row.size() ? json_cell(row[i]) : nullptr;
    }
    doc.push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

void write_table(const Table& table, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::csv) {
    write_csv(table, out);
  } else {
    write_json(table, out);
  }
}

void emit(const Table& table, OutputFormat format, const std::filesystem::path& path) {
  if (table.rows.empty()) throw std::invalid_argument("nothing to emit: no rows");
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  write_table(table, format, file);
  file.flush();
  if (!file) throw IoError("write to '" + path.string() + "' failed");
}

FigureId parse_figure_id(std::string_view text) {
  for (const auto& [id, name] : kFigureNames) {
    if (text == name) return id;
  }
  throw std::invalid_argument("unknown figure id '" + std::string(text) + "'");
}

std::string to_string(FigureId id) {
  for (const auto& [fid, name] : kFigureNames) {
    if (fid == id) return name;
  }
  return "?";
}

std::string plot_script(const Table& table, FigureId id, const std::string& data_path) {
  const FigureLayout layout = layout_for(id);
  // gnuplot columns are 1-based
  const std::size_t x = table.column_index(layout.x) + 1;
  const std::size_t y = table.column_index(layout.y) + 1;

  std::ostringstream s;
  s << "# " << to_string(id) << ": " << layout.title << "\n";
  s << "# written by tkl-meanfield v" << kVersion << "\n";
  s << "set datafile separator comma\n";
  s << "set datafile commentschars \"#\"\n";
  s << "set datafile missing \"\"\n";
  s << "set title \"" << layout.title << "\" noenhanced\n";
  s << "set xlabel \"" << layout.x << "\" noenhanced\n";
  s << "set ylabel \"" << layout.y << "\" noenhanced\n";
  // the column header line is skipped as the first data record
  if (layout.kind == PlotKind::heat_map) {
    const std::size_t z = table.column_index(layout.z) + 1;
    s << "set cblabel \"" << layout.z << "\" noenhanced\n";
    s << "set palette rgbformulae 33,13,10\n";
    s << "plot '" << data_path << "' every ::1 using " << x << ':' << y << ':' << z
      << " with image notitle\n";
  } else {
    s << "plot '" << data_path << "' every ::1 using " << x << ':' << y << " with linespoints pt 7 ps 0.4 notitle\n";
  }
  s << "pause mouse close\n";
  return s.str();
}

void emit_plot_script(const Table& table, FigureId id, const std::filesystem::path& data_path,
                      const std::filesystem::path& script_path) {
  std::filesystem::path base = script_path.parent_path();
  if (base.empty()) base = ".";
  std::filesystem::path rel = data_path.lexically_proximate(base);
  if (data_path.is_absolute() != base.is_absolute()) {
    rel = std::filesystem::absolute(data_path).lexically_proximate(std::filesystem::absolute(base));
  }
  const std::string script = plot_script(table, id, rel.generic_string());
  std::ofstream file(script_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + script_path.string() + "' for writing");
  file << script;
  file.flush();
  if (!file) throw IoError("write to '" + script_path.string() + "' failed");
}

}  // namespace tkl
