#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace infousage {

using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  /// Column position; throws InputError for an unknown name.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

/// Shortest round-trip-stable rendering used in every output ("%.12g").
std::string format_number(double v);
std::string format_cell(const Cell& c);

/// Comma-separated, header row, LF endings. `meta` lines are emitted first as
/// "# key=value" comments so the file carries its own replay information.
std::string to_csv(const Table& t, const nlohmann::ordered_json& meta);
nlohmann::ordered_json to_json(const Table& t, const nlohmann::ordered_json& meta);

struct Series {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Minimal deterministic SVG line chart: axes, ticks, one polyline per series,
/// legend. `meta` goes into a <metadata> element.
std::string render_svg(const LineChart& chart, const nlohmann::ordered_json& meta);

/// Throws FilesystemError if `dir` cannot be created or written.
void ensure_writable_dir(const std::filesystem::path& dir);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace infousage
