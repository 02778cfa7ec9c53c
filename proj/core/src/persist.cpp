#include <cmath>
#include <filesystem>
#include <json.hpp>

#include "mmot/errors.hpp"
#include "mmot/experiments.hpp"
#include "mmot/io.hpp"

namespace mmot {

namespace {

using nlohmann::json;

json num(double v) {
  if (std::isnan(v)) return json();
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

std::string result_json(const ExperimentResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr = json::array();
    for (const double v : row) jr.push_back(num(v));
    rows.push_back(std::move(jr));
  }
  // wall time intentionally omitted: artifacts must be byte-identical
  // across re-runs of the same config and seed
  json j{{"kind", to_string(r.kind)},
         {"columns", r.columns},
         {"rows", std::move(rows)},
         {"metadata", r.metadata},
         {"flags", r.flags}};
  return j.dump(2) + "\n";
}

std::string table_csv(const ExperimentResult& r) {
  std::string out = io::csv_row(r.columns);
  for (const auto& row : r.rows) out += io::csv_numeric_row(row);
  return out;
}

std::string plot_svg(const ExperimentResult& r) {
  std::vector<io::SvgSeries> series;
  auto column = [&](std::size_t idx) {
    io::SvgSeries s;
    s.label = r.columns[idx];
    for (const auto& row : r.rows) {
      s.x.push_back(row[0]);
      s.y.push_back(row[idx]);
    }
    return s;
  };
  switch (r.kind) {
    case ExperimentKind::convergence:
    case ExperimentKind::counterexample: {
      series.push_back(column(1));
      auto ref = column(2);
      ref.dashed = true;
      series.push_back(std::move(ref));
      break;
    }
    case ExperimentKind::hierarchy: {
      series.push_back(column(1));
      auto ref = column(2);
      ref.dashed = true;
      series.push_back(std::move(ref));
      break;
    }
    case ExperimentKind::deficit_scaling: {
      series.push_back(column(3));  // ratio
      io::SvgSeries one{"1", {}, {}, true};
      for (const auto& row : r.rows) {
        one.x.push_back(row[0]);
        one.y.push_back(1.0);
      }
      series.push_back(std::move(one));
      break;
    }
    case ExperimentKind::df_bound_sweep: {
      series.push_back(column(3));  // tv
      auto bound = column(4);
      bound.dashed = true;
      series.push_back(std::move(bound));
      break;
    }
  }
  return io::svg_line_plot(std::string(to_string(r.kind)), r.columns[0],
                           series.front().label, series);
}

PersistedFile write_hashed(const std::filesystem::path& dir, const std::string& name,
                           const std::string& content) {
  io::write_file((dir / name).string(), content);
  return PersistedFile{name, content.size(), io::fnv1a64_hex(content)};
}

}  // namespace

PersistReport persist(const ExperimentResult& result, const std::string& dir, bool write_csv,
                      bool write_svg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DomainError("cannot create output directory " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);

  PersistReport report;
  report.result = write_hashed(base, "result.json", result_json(result));
  if (!result.rows.empty() && write_csv) {
    report.data.push_back(write_hashed(base, "table.csv", table_csv(result)));
  }
  if (!result.rows.empty() && write_svg) {
    report.data.push_back(write_hashed(base, "plot.svg", plot_svg(result)));
  }

  json files = json::array();
  for (const auto& f : report.data) {
    files.push_back({{"name", f.name}, {"bytes", f.bytes}, {"fnv1a64", f.fnv1a64}});
  }
  json manifest{{"result",
                 {{"name", report.result.name},
                  {"bytes", report.result.bytes},
                  {"fnv1a64", report.result.fnv1a64}}},
                {"data_files", std::move(files)}};
  const std::string manifest_text = manifest.dump(2) + "\n";
  io::write_file((base / "manifest.json").string(), manifest_text);
  report.manifest_path = (base / "manifest.json").string();
  return report;
}

}  // namespace mmot
