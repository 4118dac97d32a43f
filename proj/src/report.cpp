#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "mwadv/experiments.hpp"

namespace mwadv {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, cell);
}

std::optional<double> cell_number(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  return std::nullopt;
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw DomainError("no column named " + std::string(name));
}

std::vector<std::pair<double, double>> Table::series(std::string_view x, std::string_view y) const {
  const std::size_t xi = column(x), yi = column(y);
  std::vector<std::pair<double, double>> out;
  for (const auto& row : rows) {
    auto xv = cell_number(row[xi]);
    auto yv = cell_number(row[yi]);
    if (xv && yv) out.emplace_back(*xv, *yv);
  }
  return out;
}

std::string to_csv(const Table& table, const ExperimentConfig& config) {
  std::string out = "# mwadv ";
  out += kVersion;
  out += " scenario=";
  out += scenario_name(config.scenario);
  out += " config_hash=" + config.hash();
  out += " seed=" + std::to_string(config.seed);
  out += "\r\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(table.columns[i]);
  }
  out += "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(cell_text(row[i]));
    }
    out += "\r\n";
  }
  return out;
}

std::string to_svg(const Table& table, std::string_view x, const std::vector<std::string>& ys, std::string_view title) {
  constexpr double width = 720, height = 440, left = 70, right = 150, top = 40, bottom = 60;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

  std::vector<std::vector<std::pair<double, double>>> lines;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& y : ys) {
    lines.push_back(table.series(x, y));
    for (auto [a, b] : lines.back()) {
      xmin = std::min(xmin, a);
      xmax = std::max(xmax, a);
      ymin = std::min(ymin, b);
      ymax = std::max(ymax, b);
    }
  }
  if (!(xmin < xmax)) {
    xmin = std::isfinite(xmin) ? xmin - 1 : 0;
    xmax = xmin + 2;
  }
  if (!(ymin < ymax)) {
    ymin = std::isfinite(ymin) ? ymin - 1 : 0;
    ymax = ymin + 2;
  }
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double v) { return top + ph - (v - ymin) / (ymax - ymin) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 4, yv = ymin + (ymax - ymin) * t / 4;
    s << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << format_number(xv) << "</text>\n";
    s << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << format_number(yv) << "</text>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16
    << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << x << "</text>\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const char* color = colors[i % (sizeof colors / sizeof *colors)];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [a, b] : lines[i]) s << px(a) << ',' << py(b) << ' ';
    s << "\"/>\n";
    s << "<text x=\"" << left + pw + 10 << "\" y=\"" << top + 16 * (i + 1) << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
      << color << "\">" << ys[i] << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace mwadv
