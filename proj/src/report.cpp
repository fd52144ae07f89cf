#include "infousage/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "infousage/errors.hpp"

namespace infousage {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// 1, 2 or 5 times a power of ten, giving about `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double k : {1.0, 2.0, 5.0, 10.0})
    if (raw <= k * mag) return k * mag;
  return 10.0 * mag;
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw InputError("row width differs from the column count");
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw InputError("no column named '" + name + "'");
}

double Table::number(std::size_t row, const std::string& name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? 1.0 : 0.0;
  throw InputError("column '" + name + "' is not numeric");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

std::string to_csv(const Table& t, const nlohmann::ordered_json& meta) {
  std::ostringstream os;
  for (const auto& [key, value] : meta.items())
    os << "# " << key << "=" << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(format_cell(row[i]));
    os << "\n";
  }
  return os.str();
}

nlohmann::ordered_json to_json(const Table& t, const nlohmann::ordered_json& meta) {
  nlohmann::ordered_json j = meta;
  j["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no inf/nan; keep them as strings.
        if (std::isfinite(*d))
          r[t.columns[i]] = std::stod(format_number(*d));
        else
          r[t.columns[i]] = format_number(*d);
      } else if (const auto* n = std::get_if<std::int64_t>(&c)) {
        r[t.columns[i]] = *n;
      } else if (const auto* b = std::get_if<bool>(&c)) {
        r[t.columns[i]] = *b;
      } else {
        r[t.columns[i]] = std::get<std::string>(c);
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string render_svg(const LineChart& chart, const nlohmann::ordered_json& meta) {
  const double W = 640, H = 420, left = 70, right = 170, top = 40, bottom = 55;
  const double pw = W - left - right, ph = H - top - bottom;

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : chart.series)
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      x0 = std::min(x0, s.xs[i]);
      x1 = std::max(x1, s.xs[i]);
      y0 = std::min(y0, s.ys[i]);
      y1 = std::max(y1, s.ys[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double ys = nice_step(y1 - y0, 5);
  y0 = std::floor(y0 / ys) * ys;
  y1 = std::ceil(y1 / ys) * ys;
  const double xs = nice_step(x1 - x0, 6);

  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<metadata>" << xml_escape(meta.dump()) << "</metadata>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << xml_escape(chart.title) << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
     << top + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";

  const int xdigits = xs < 1.0 ? static_cast<int>(std::ceil(-std::log10(xs) + 1e-9)) : 0;
  for (double x = std::ceil(x0 / xs) * xs; x <= x1 + 1e-9 * xs; x += xs) {
    os << "<line x1=\"" << fixed(px(x)) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(px(x))
       << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fixed(px(x)) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\">" << fixed(x, xdigits) << "</text>\n";
  }
  const int ydigits = ys < 1.0 ? static_cast<int>(std::ceil(-std::log10(ys) + 1e-9)) : 0;
  for (double y = y0; y <= y1 + 1e-9 * ys; y += ys) {
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(py(y)) << "\" x2=\"" << left
       << "\" y2=\"" << fixed(py(y)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << fixed(py(y) + 4)
       << "\" text-anchor=\"end\">" << fixed(y, ydigits) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
     << xml_escape(chart.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << top + ph / 2 << ")\">" << xml_escape(chart.y_label) << "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (k % 2 == 1 && chart.series.size() > 3) os << " stroke-dasharray=\"5,4\"";
    os << " points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      os << (first ? "" : " ") << fixed(px(s.xs[i])) << "," << fixed(py(s.ys[i]));
      first = false;
    }
    os << "\"/>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.name)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void ensure_writable_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(dir, ec)) {
    fs::create_directories(dir, ec);
    if (ec) throw FilesystemError("cannot create output directory '" + dir.string() + "': " + ec.message());
  }
  if (!fs::is_directory(dir, ec)) throw FilesystemError("'" + dir.string() + "' is not a directory");
  const fs::path probe = dir / ".infousage_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw FilesystemError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FilesystemError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw FilesystemError("write to '" + path.string() + "' failed");
}

}  // namespace infousage
