#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "mmot/lp.hpp"

namespace mmot::lp {

namespace {

// fixed-column MPS line: fields start at columns 2, 5, 15, 25, 40, 50
std::string fixed_line(const std::string& f1, const std::string& f2, const std::string& f3,
                       const std::string& f4, const std::string& f5 = "",
                       const std::string& f6 = "") {
  std::string line(61, ' ');
  auto put = [&line](std::size_t pos, const std::string& s) {
    for (std::size_t i = 0; i < s.size() && pos + i < line.size(); ++i) line[pos + i] = s[i];
  };
  put(1, f1);
  put(4, f2);
  put(14, f3);
  put(24, f4);
  put(39, f5);
  put(49, f6);
  while (!line.empty() && line.back() == ' ') line.pop_back();
  return line;
}

std::string value12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6G", v);
  return buf;
}

std::string row_name(int r) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "R%07d", r);
  return buf;
}

std::string col_name(int c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "X%07d", c);
  return buf;
}

}  // namespace

void LinearProgram::write_mps(std::ostream& os, std::string_view name) const {
  os << "NAME          " << name << "\n";
  os << "ROWS\n";
  os << fixed_line("N", "COST", "", "") << "\n";
  for (int r = 0; r < rows_; ++r) os << fixed_line("E", row_name(r), "", "") << "\n";

  // entries grouped by column, objective first
  os << "COLUMNS\n";
  for (int c = 0; c < cols_; ++c) {
    const std::string cn = col_name(c);
    const double obj = objective_[c];
    if (obj != 0.0 && !std::isinf(obj)) {
      os << fixed_line("", cn, "COST", value12(obj)) << "\n";
    }
    for (const auto& e : entries_) {
      if (e.col != c) continue;
      os << fixed_line("", cn, row_name(e.row), value12(e.value)) << "\n";
    }
  }

  os << "RHS\n";
  for (int r = 0; r < rows_; ++r) {
    if (rhs_[r] != 0.0) os << fixed_line("", "RHS", row_name(r), value12(rhs_[r])) << "\n";
  }

  // variables presolved away by an infinite cost are pinned to zero
  bool bounds_header = false;
  for (int c = 0; c < cols_; ++c) {
    if (std::isinf(objective_[c])) {
      if (!bounds_header) {
        os << "BOUNDS\n";
        bounds_header = true;
      }
      os << fixed_line("FX", "BND", col_name(c), value12(0.0)) << "\n";
    }
  }
  os << "ENDATA\n";
}

}  // namespace mmot::lp
