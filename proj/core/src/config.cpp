#include "mmot/config.hpp"

#include <algorithm>
#include <cctype>
#include <json.hpp>
#include <sstream>

#include "mmot/errors.hpp"
#include "mmot/io.hpp"
#include "mmot/serialize.hpp"

namespace mmot {

namespace {

// One parsed value of the TOML subset. Numbers keep their token so integer
// seeds survive unrounded.
struct Value {
  enum class Kind { string, number, boolean, array } kind = Kind::string;
  std::string text;
  bool flag = false;
  std::vector<Value> items;

  double to_double(const std::string& where) const {
    if (kind != Kind::number) throw ConfigError(where + ": expected a number");
    return std::stod(text);
  }
  std::uint64_t to_u64(const std::string& where) const {
    if (kind != Kind::number || text.find_first_of(".eE") != std::string::npos) {
      throw ConfigError(where + ": expected an integer");
    }
    return std::stoull(text);
  }
  int to_int(const std::string& where) const {
    return static_cast<int>(static_cast<std::int64_t>(to_u64(where)));
  }
  const std::string& to_string(const std::string& where) const {
    if (kind != Kind::string) throw ConfigError(where + ": expected a string");
    return text;
  }
  bool to_bool(const std::string& where) const {
    if (kind != Kind::boolean) throw ConfigError(where + ": expected true or false");
    return flag;
  }
};

using Section = std::map<std::string, Value>;
using Tree = std::map<std::string, Section>;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Value parse_value(const std::string& raw, int line_no);

Value parse_array(const std::string& raw, int line_no) {
  Value v;
  v.kind = Value::Kind::array;
  // split top-level commas
  int depth = 0;
  std::string cur;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      const auto item = trim(cur);
      if (!item.empty()) v.items.push_back(parse_value(item, line_no));
      cur.clear();
    } else {
      cur += c;
    }
  }
  const auto item = trim(cur);
  if (!item.empty()) v.items.push_back(parse_value(item, line_no));
  return v;
}

Value parse_value(const std::string& raw, int line_no) {
  Value v;
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    v.kind = Value::Kind::string;
    v.text = raw.substr(1, raw.size() - 2);
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.kind = Value::Kind::boolean;
    v.flag = raw == "true";
    return v;
  }
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": unterminated array");
    return parse_array(raw, line_no);
  }
  try {
    (void)std::stod(raw);
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line_no) + ": cannot parse value '" + raw + "'");
  }
  v.kind = Value::Kind::number;
  v.text = raw;
  return v;
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

Tree parse_toml(const std::string& text) {
  Tree tree;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
      tree[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    if (section.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": key outside a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (tree[section].count(key)) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    tree[section][key] = parse_value(raw, line_no);
  }
  return tree;
}

Value from_json_value(const nlohmann::json& j) {
  Value v;
  if (j.is_string()) {
    v.kind = Value::Kind::string;
    v.text = j.get<std::string>();
  } else if (j.is_boolean()) {
    v.kind = Value::Kind::boolean;
    v.flag = j.get<bool>();
  } else if (j.is_number_integer() || j.is_number_unsigned()) {
    v.kind = Value::Kind::number;
    v.text = std::to_string(j.get<std::int64_t>());
  } else if (j.is_number_float()) {
    v.kind = Value::Kind::number;
    v.text = io::format_double(j.get<double>());
  } else if (j.is_array()) {
    v.kind = Value::Kind::array;
    for (const auto& item : j) v.items.push_back(from_json_value(item));
  } else {
    throw ConfigError("config: unsupported JSON value type");
  }
  return v;
}

std::vector<double> number_list(const Value& v, const std::string& where) {
  if (v.kind != Value::Kind::array) throw ConfigError(where + ": expected an array");
  std::vector<double> out;
  for (const auto& item : v.items) out.push_back(item.to_double(where));
  return out;
}

// points accepts [0, 1, 2] (1-d shorthand) or [[..], [..]] coordinate lists
std::vector<std::vector<double>> point_list(const Value& v, const std::string& where) {
  if (v.kind != Value::Kind::array || v.items.empty()) {
    throw ConfigError(where + ": expected a nonempty array");
  }
  std::vector<std::vector<double>> out;
  if (v.items.front().kind == Value::Kind::array) {
    for (const auto& item : v.items) out.push_back(number_list(item, where));
  } else {
    for (const auto& item : v.items) out.push_back({item.to_double(where)});
  }
  return out;
}

RunConfig interpret(const Tree& tree) {
  RunConfig cfg;
  static const std::map<std::string, std::vector<std::string>> allowed = {
      {"experiment", {"kind", "seed", "output", "jobs", "budget"}},
      {"measure", {"file", "points", "weights", "period"}},
      {"cost", {}},  // name + free numeric parameters, validated by the cost builder
      {"range", {"min", "max"}},
      {"hierarchy", {"bodies"}},
      {"counterexample", {"sigma"}},
      {"tolerances", {"tol_feasibility", "tol_gap", "tol_farkas"}},
      {"format", {"csv", "svg"}},
  };
  for (const auto& [section, keys] : tree) {
    const auto it = allowed.find(section);
    if (it == allowed.end()) throw ConfigError("config: unknown section [" + section + "]");
    if (section == "cost") continue;
    for (const auto& [key, value] : keys) {
      (void)value;
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      }
    }
  }

  const auto exp_it = tree.find("experiment");
  if (exp_it == tree.end()) throw ConfigError("config: missing [experiment] section");
  const Section& exp = exp_it->second;
  const auto kind_it = exp.find("kind");
  if (kind_it == exp.end()) throw ConfigError("config: [experiment] needs 'kind'");
  cfg.experiment.kind = experiment_kind_from(kind_it->second.to_string("experiment.kind"));
  if (exp.count("seed")) cfg.seed = exp.at("seed").to_u64("experiment.seed");
  if (exp.count("output")) cfg.output_dir = exp.at("output").to_string("experiment.output");
  if (exp.count("jobs")) cfg.jobs = exp.at("jobs").to_int("experiment.jobs");
  if (exp.count("budget")) cfg.budget = exp.at("budget").to_u64("experiment.budget");

  if (tree.count("measure")) {
    const Section& ms = tree.at("measure");
    if (ms.count("file")) cfg.experiment.measure.file = ms.at("file").to_string("measure.file");
    if (ms.count("points")) cfg.experiment.measure.points = point_list(ms.at("points"), "measure.points");
    if (ms.count("weights")) cfg.experiment.measure.weights = number_list(ms.at("weights"), "measure.weights");
    if (ms.count("period")) cfg.experiment.measure.period = ms.at("period").to_double("measure.period");
  }

  if (tree.count("cost")) {
    const Section& cs = tree.at("cost");
    for (const auto& [key, value] : cs) {
      if (key == "name") {
        cfg.experiment.cost_name = value.to_string("cost.name");
      } else {
        cfg.experiment.cost_params[key] = value.to_double("cost." + key);
      }
    }
  }

  if (tree.count("range")) {
    const Section& rs = tree.at("range");
    if (rs.count("min")) cfg.experiment.range_min = rs.at("min").to_int("range.min");
    if (rs.count("max")) cfg.experiment.range_max = rs.at("max").to_int("range.max");
  }
  if (tree.count("hierarchy")) {
    cfg.experiment.hierarchy_bodies = tree.at("hierarchy").at("bodies").to_int("hierarchy.bodies");
  }
  if (tree.count("counterexample")) {
    cfg.experiment.counterexample_sigma =
        tree.at("counterexample").at("sigma").to_double("counterexample.sigma");
  }
  if (tree.count("tolerances")) {
    for (const auto& [key, value] : tree.at("tolerances")) {
      cfg.tolerance_overrides[key] = value.to_double("tolerances." + key);
    }
  }
  if (tree.count("format")) {
    const Section& fs = tree.at("format");
    if (fs.count("csv")) cfg.write_csv = fs.at("csv").to_bool("format.csv");
    if (fs.count("svg")) cfg.write_svg = fs.at("svg").to_bool("format.svg");
  }

  if (cfg.experiment.range_min > cfg.experiment.range_max) {
    throw ConfigError("config: range.min exceeds range.max");
  }
  return cfg;
}

}  // namespace

DiscreteMeasure MeasureSpec::build() const {
  if (file) return serialize::discrete_from_json(io::read_file(*file));
  if (points.empty() || weights.empty()) {
    throw ConfigError("measure: needs either 'file' or inline 'points' and 'weights'");
  }
  const int dim = static_cast<int>(points.front().size());
  return DiscreteMeasure(make_grid(dim, points, period), weights);
}

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::hierarchy: return "hierarchy";
    case ExperimentKind::deficit_scaling: return "deficit_scaling";
    case ExperimentKind::counterexample: return "counterexample";
    case ExperimentKind::df_bound_sweep: return "df_bound_sweep";
  }
  return "?";
}

ExperimentKind experiment_kind_from(const std::string& name) {
  if (name == "convergence") return ExperimentKind::convergence;
  if (name == "hierarchy") return ExperimentKind::hierarchy;
  if (name == "deficit_scaling") return ExperimentKind::deficit_scaling;
  if (name == "counterexample") return ExperimentKind::counterexample;
  if (name == "df_bound_sweep") return ExperimentKind::df_bound_sweep;
  throw ConfigError("unknown experiment kind '" + name + "'");
}

CostFunction ExperimentSpec::build_cost() const {
  std::string spec = cost_name;
  char sep = ':';
  for (const auto& [key, value] : cost_params) {
    spec += sep + key + "=" + io::format_double(value);
    sep = ',';
  }
  return CostFunction::parse(spec);
}

RunConfig config_from_toml(const std::string& text) { return interpret(parse_toml(text)); }

RunConfig config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config: invalid JSON");
  if (!j.is_object()) throw ConfigError("config: expected a JSON object of sections");
  Tree tree;
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) throw ConfigError("config: section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      tree[section][key] = from_json_value(value);
    }
  }
  return interpret(tree);
}

RunConfig load_config(const std::string& path) {
  const auto text = io::read_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return config_from_json(text);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") return config_from_toml(text);
  throw ConfigError("config file must end in .toml or .json: " + path);
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[experiment]\n";
  out << "kind = \"" << to_string(cfg.experiment.kind) << "\"\n";
  out << "seed = " << cfg.seed << "\n";
  out << "output = \"" << cfg.output_dir << "\"\n";
  out << "jobs = " << cfg.jobs << "\n";
  out << "budget = " << cfg.budget << "\n";

  const auto& ms = cfg.experiment.measure;
  if (ms.file || !ms.points.empty()) {
    out << "\n[measure]\n";
    if (ms.file) out << "file = \"" << *ms.file << "\"\n";
    if (!ms.points.empty()) {
      out << "points = [";
      for (std::size_t i = 0; i < ms.points.size(); ++i) {
        if (i) out << ", ";
        out << "[";
        for (std::size_t a = 0; a < ms.points[i].size(); ++a) {
          if (a) out << ", ";
          out << io::format_double(ms.points[i][a]);
        }
        out << "]";
      }
      out << "]\n";
      out << "weights = [";
      for (std::size_t i = 0; i < ms.weights.size(); ++i) {
        if (i) out << ", ";
        out << io::format_double(ms.weights[i]);
      }
      out << "]\n";
    }
    if (ms.period) out << "period = " << io::format_double(*ms.period) << "\n";
  }

  out << "\n[cost]\n";
  out << "name = \"" << cfg.experiment.cost_name << "\"\n";
  for (const auto& [key, value] : cfg.experiment.cost_params) {
    out << key << " = " << io::format_double(value) << "\n";
  }

  out << "\n[range]\n";
  out << "min = " << cfg.experiment.range_min << "\n";
  out << "max = " << cfg.experiment.range_max << "\n";

  if (cfg.experiment.hierarchy_bodies > 0) {
    out << "\n[hierarchy]\n";
    out << "bodies = " << cfg.experiment.hierarchy_bodies << "\n";
  }
  if (cfg.experiment.counterexample_sigma > 0.0) {
    out << "\n[counterexample]\n";
    out << "sigma = " << io::format_double(cfg.experiment.counterexample_sigma) << "\n";
  }
  if (!cfg.tolerance_overrides.empty()) {
    out << "\n[tolerances]\n";
    for (const auto& [key, value] : cfg.tolerance_overrides) {
      out << key << " = " << io::format_double(value) << "\n";
    }
  }
  out << "\n[format]\n";
  out << "csv = " << (cfg.write_csv ? "true" : "false") << "\n";
  out << "svg = " << (cfg.write_svg ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace mmot
