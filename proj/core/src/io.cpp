#include "mmot/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mmot/errors.hpp"

namespace mmot::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char c : s) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += csv_field(fields[i]);
  }
  row += "\r\n";
  return row;
}

std::string csv_numeric_row(const std::vector<double>& values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (const double v : values) fields.push_back(format_double(v));
  return csv_row(fields);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& data) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

namespace {

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<SvgSeries>& series) {
  const double W = 800, H = 520;
  const double ml = 70, mr = 30, mt = 40, mb = 55;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isnan(s.y[i])) continue;
      if (!any) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        any = true;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  static const char* colors[] = {"#1f6fb2", "#c23b22", "#3a7d44", "#7b4fa6", "#b8860b"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">" << xml_escape(title) << "</text>\n";

  // axes
  svg << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 5.0;
    const double fy = ymin + (ymax - ymin) * t / 5.0;
    svg << "<line x1=\"" << f2(px(fx)) << "\" y1=\"" << H - mb << "\" x2=\"" << f2(px(fx))
        << "\" y2=\"" << H - mb + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << f2(px(fx)) << "\" y=\"" << H - mb + 20
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
        << format_double(fx) << "</text>\n";
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << f2(py(fy)) << "\" x2=\"" << ml << "\" y2=\""
        << f2(py(fy)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << f2(py(fy) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
        << format_double(fy) << "</text>\n";
  }
  svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
      << xml_escape(x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 18 " << (mt + H - mb) / 2 << ")\">"
      << xml_escape(y_label) << "</text>\n";

  int color_idx = 0;
  double legend_y = mt + 8;
  for (const auto& s : series) {
    const char* color = colors[color_idx % 5];
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isnan(s.y[i])) continue;
      pts << f2(px(s.x[i])) << "," << f2(py(s.y[i])) << " ";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (s.dashed) svg << " stroke-dasharray=\"6,4\"";
    svg << " points=\"" << pts.str() << "\"/>\n";
    svg << "<text x=\"" << W - mr - 6 << "\" y=\"" << f2(legend_y)
        << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\" fill=\"" << color
        << "\">" << xml_escape(s.label) << "</text>\n";
    legend_y += 16;
    ++color_idx;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write file: " + path);
  out << content;
  if (!out) throw DomainError("write failed: " + path);
}

}  // namespace mmot::io
