#include "gpcsg/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace gpcsg {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

double parse(const std::string& s) {
  double v = std::numeric_limits<double>::quiet_NaN();
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string tick(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

std::string render_svg(const Table& table, const ChartSpec& spec) {
  const std::size_t xc = table.column(spec.x);
  const std::size_t fc = spec.filter_column.empty() ? 0 : table.column(spec.filter_column);
  const std::size_t gc = spec.group_by.empty() ? 0 : table.column(spec.group_by);

  std::vector<Series> series;
  std::map<std::string, std::size_t> index;
  for (const auto& row : table.rows()) {
    if (!spec.filter_column.empty() && row[fc] != spec.filter_value) continue;
    const double x = parse(row[xc]);
    for (const auto& y_name : spec.ys) {
      std::string label = y_name;
      if (!spec.group_by.empty()) label += " " + spec.group_by + "=" + row[gc];
      auto [it, inserted] = index.emplace(label, series.size());
      if (inserted) series.push_back({label, {}});
      const double y = parse(row[table.column(y_name)]);
      if (!std::isfinite(x) || !std::isfinite(y) || (spec.log_y && y <= 0.0)) continue;
      series[it->second].points.emplace_back(x, spec.log_y ? std::log10(y) : y);
    }
  }

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    os << "<text x=\"" << num(sx(fx)) << "\" y=\"" << kTop + ph + 15
       << "\" text-anchor=\"middle\">" << tick(fx) << "</text>\n";
    os << "<text x=\"" << kLeft - 5 << "\" y=\"" << num(sy(fy) + 4) << "\" text-anchor=\"end\">"
       << (spec.log_y ? "1e" + tick(fy) : tick(fy)) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\">" << escape(spec.x) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[s].points) os << num(sx(x)) << ',' << num(sy(y)) << ' ';
    os << "\"/>\n";
    const double ly = kTop + 12 + 16 * static_cast<double>(s);
    os << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << kWidth - kRight + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\"/>\n";
    os << "<text x=\"" << kWidth - kRight + 35 << "\" y=\"" << ly << "\">"
       << escape(series[s].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace gpcsg
