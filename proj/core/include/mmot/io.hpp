#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mmot::io {

// Shortest decimal representation that round-trips the double exactly
// (std::to_chars); the one float format used for CSV and SVG output.
std::string format_double(double v);

// RFC 4180: fields containing comma, quote, or newline are quoted with
// doubled inner quotes; records end in CRLF. NaN renders as an empty field.
std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);
std::string csv_numeric_row(const std::vector<double>& values);

// FNV-1a 64-bit content hash (hex string); stable across runs and platforms,
// used for change detection in manifests, not for security.
std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

// Minimal SVG 1.1 line plot: axes, ticks, labeled polylines. Deterministic
// output for identical input.
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<SvgSeries>& series);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace mmot::io
