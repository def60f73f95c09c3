#include "jamsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "jamsim/errors.hpp"

namespace jamsim {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Strips a '#' comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool parse_number(const std::string& tok, std::int64_t& iv, double& dv,
                  bool& is_int) {
  const std::string t = trim(tok);
  if (t.empty()) return false;
  is_int = t.find_first_of(".eE") == std::string::npos;
  if (is_int) {
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto res = std::from_chars(first, last, iv);
    if (res.ec == std::errc() && res.ptr == last) {
      dv = static_cast<double>(iv);
      return true;
    }
    is_int = false;
  }
  try {
    std::size_t used = 0;
    dv = std::stod(t, &used);
    return used == t.size();
  } catch (...) {
    return false;
  }
}

TomlValue parse_value(const std::string& raw, int line_no) {
  const std::string v = trim(raw);
  if (v.empty()) {
    throw ConfigError("config line " + std::to_string(line_no) +
                      ": missing value");
  }
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unterminated string");
    }
    return v.substr(1, v.size() - 2);
  }
  if (v.front() == '[') {
    if (v.back() != ']') {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unterminated array");
    }
    std::vector<double> arr;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::int64_t iv;
      double dv;
      bool is_int;
      if (!parse_number(item, iv, dv, is_int)) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": bad array element '" + trim(item) + "'");
      }
      arr.push_back(dv);
    }
    return arr;
  }
  if (v == "true" || v == "false") {
    throw ConfigError("config line " + std::to_string(line_no) +
                      ": boolean values are not used by this schema");
  }
  std::int64_t iv;
  double dv;
  bool is_int;
  if (!parse_number(v, iv, dv, is_int)) {
    throw ConfigError("config line " + std::to_string(line_no) +
                      ": cannot parse value '" + v + "'");
  }
  if (is_int) return iv;
  return dv;
}

double as_double(const TomlValue& v, const std::string& what) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    return static_cast<double>(*i);
  }
  throw ConfigError(what + ": expected a number");
}

std::int64_t as_int(const TomlValue& v, const std::string& what) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw ConfigError(what + ": expected an integer");
}

std::string as_string(const TomlValue& v, const std::string& what) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError(what + ": expected a string");
}

std::vector<double> as_array(const TomlValue& v, const std::string& what) {
  if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
  throw ConfigError(what + ": expected an array of numbers");
}

void reject_unknown_keys(const TomlTable& config, const std::string& section,
                         const std::set<std::string>& known) {
  const auto it = config.sections.find(section);
  if (it == config.sections.end()) return;
  for (const auto& [key, value] : it->second) {
    if (!known.contains(key)) {
      throw ConfigError("config: unknown key '" + key + "' in [" + section +
                        "]");
    }
  }
}

}  // namespace

bool TomlTable::has(const std::string& section, const std::string& key) const {
  const auto it = sections.find(section);
  return it != sections.end() && it->second.contains(key);
}

const TomlValue& TomlTable::at(const std::string& section,
                               const std::string& key) const {
  const auto it = sections.find(section);
  if (it == sections.end() || !it->second.contains(key)) {
    throw ConfigError("config: missing [" + section + "] " + key);
  }
  return it->second.at(key);
}

TomlTable parse_toml_string(const std::string& text) {
  TomlTable table;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": malformed section header");
      }
      section = trim(body.substr(1, body.size() - 2));
      table.sections[section];  // empty sections are allowed
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": key outside any [section]");
    }
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    }
    if (table.sections[section].contains(key)) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
    table.sections[section][key] = parse_value(body.substr(eq + 1), line_no);
  }
  return table;
}

TomlTable parse_toml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_toml_string(ss.str());
}

PmfTable read_pmf_table_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open table csv: " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x_bucket,k,prob") {
    throw MalformedTable("table csv: expected header 'x_bucket,k,prob'");
  }
  std::map<std::int64_t, std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;
    std::stringstream ss(body);
    std::string bucket_tok, k_tok, prob_tok;
    if (!std::getline(ss, bucket_tok, ',') || !std::getline(ss, k_tok, ',') ||
        !std::getline(ss, prob_tok)) {
      throw MalformedTable("table csv line " + std::to_string(line_no) +
                           ": expected 3 columns");
    }
    std::int64_t bucket, k, unused;
    double dv, prob;
    bool is_int;
    if (!parse_number(bucket_tok, bucket, dv, is_int) || !is_int) {
      throw MalformedTable("table csv line " + std::to_string(line_no) +
                           ": bad x_bucket");
    }
    if (!parse_number(k_tok, k, dv, is_int) || !is_int || k < 0) {
      throw MalformedTable("table csv line " + std::to_string(line_no) +
                           ": bad k");
    }
    if (!parse_number(prob_tok, unused, prob, is_int)) {
      throw MalformedTable("table csv line " + std::to_string(line_no) +
                           ": bad prob");
    }
    auto& probs = rows[bucket];
    if (static_cast<std::size_t>(k) >= probs.size()) {
      probs.resize(static_cast<std::size_t>(k) + 1, 0.0);
    }
    probs[static_cast<std::size_t>(k)] = prob;
  }
  PmfTable table;
  for (auto& [first_x, probs] : rows) {
    table.buckets.push_back(PmfTable::Bucket{first_x, std::move(probs)});
  }
  return table;
}

std::shared_ptr<const Kernel> load_kernel(const TomlTable& config,
                                          const std::string& base_dir) {
  reject_unknown_keys(config, "kernel",
                      {"type", "N", "c", "table", "gamma_poly", "psi_poly",
                       "lipschitz"});
  const std::string type = as_string(config.at("kernel", "type"), "type");
  const std::int64_t items = as_int(config.at("kernel", "N"), "N");
  if (type == "er") {
    return make_er_kernel(items, as_double(config.at("kernel", "c"), "c"));
  }
  if (type == "table") {
    std::string path = as_string(config.at("kernel", "table"), "table");
    if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
    LimitSpec limits;
    limits.drift_poly =
        as_array(config.at("kernel", "gamma_poly"), "gamma_poly");
    limits.noise_poly = as_array(config.at("kernel", "psi_poly"), "psi_poly");
    if (config.has("kernel", "lipschitz")) {
      limits.lipschitz =
          as_double(config.at("kernel", "lipschitz"), "lipschitz");
    }
    return make_tabular_kernel(items, read_pmf_table_csv(path),
                               std::move(limits));
  }
  throw ConfigError("config: kernel type must be \"er\" or \"table\", got \"" +
                    type + "\"");
}

void validate_config_sections(const TomlTable& config) {
  for (const auto& [name, keys] : config.sections) {
    if (name != "kernel" && name != "run") {
      throw ConfigError("config: unknown section [" + name + "]");
    }
  }
}

RunConfig load_run_config(const TomlTable& config) {
  reject_unknown_keys(
      config, "run",
      {"runs", "seed", "dt", "tmax", "lambda", "threads", "output_dir"});
  RunConfig rc;
  if (config.has("run", "runs")) {
    rc.runs = as_int(config.at("run", "runs"), "runs");
  }
  if (config.has("run", "seed")) {
    rc.seed = static_cast<std::uint64_t>(as_int(config.at("run", "seed"),
                                                "seed"));
  }
  if (config.has("run", "dt")) rc.dt = as_double(config.at("run", "dt"), "dt");
  if (config.has("run", "tmax")) {
    rc.t_max = as_double(config.at("run", "tmax"), "tmax");
  }
  if (config.has("run", "lambda")) {
    rc.rate = as_double(config.at("run", "lambda"), "lambda");
  }
  if (config.has("run", "threads")) {
    rc.threads = static_cast<int>(as_int(config.at("run", "threads"),
                                         "threads"));
  }
  if (config.has("run", "output_dir")) {
    rc.output_dir = as_string(config.at("run", "output_dir"), "output_dir");
  }
  return rc;
}

}  // namespace jamsim
