#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tkl {

// Empty cell (monostate) is written as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  bool has_column(std::string_view name) const;
  // Throws MissingColumn.
  std::size_t column_index(std::string_view name) const;
};

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view text);

// 12 significant digits, shortest of fixed/scientific; "" for non-finite values.
std::string format_number(double value);

// CSV: version comment, column header, one line per row, LF endings.
void write_csv(const Table& table, std::ostream& out);
// JSON: array of objects keyed by column name, in column order.
void write_json(const Table& table, std::ostream& out);
void write_table(const Table& table, OutputFormat format, std::ostream& out);

// Writes to `path`, throwing IoError on open or write failure. Throws
// std::invalid_argument for an empty table.
void emit(const Table& table, OutputFormat format, const std::filesystem::path& path);

enum class FigureId { fig2a, fig2b, fig3a, fig3b, fig4, fig5, fig8, fig9, fig10, fig11, fig12b, fig13 };

FigureId parse_figure_id(std::string_view text);
std::string to_string(FigureId id);

// gnuplot script reading `data_path` (as written, usually relative to the script).
// Throws MissingColumn when the table lacks a column the figure needs.
std::string plot_script(const Table& table, FigureId id, const std::string& data_path);

// Writes the script next to the data file, referencing it by relative path.
void emit_plot_script(const Table& table, FigureId id, const std::filesystem::path& data_path,
                      const std::filesystem::path& script_path);

}  // namespace tkl
