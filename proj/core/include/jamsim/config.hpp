#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jamsim/kernel.hpp"

namespace jamsim {

/// Value types accepted in config files: strings, integers, floats, and flat
/// arrays of numbers.
using TomlValue =
    std::variant<std::string, std::int64_t, double, std::vector<double>>;

/// Strictly parsed flat TOML subset: [section] headers, key = value lines,
/// '#' comments. Anything else is an error; consumers reject unknown keys.
struct TomlTable {
  std::map<std::string, std::map<std::string, TomlValue>> sections;

  bool has(const std::string& section, const std::string& key) const;
  const TomlValue& at(const std::string& section, const std::string& key) const;
};

TomlTable parse_toml_string(const std::string& text);
TomlTable parse_toml_file(const std::string& path);

/// Kernel description from the [kernel] section:
///   type = "er"      with N, c
///   type = "table"   with N, table = "rows.csv", gamma_poly, psi_poly,
///                    optional lipschitz
/// Relative table paths resolve against base_dir.
std::shared_ptr<const Kernel> load_kernel(const TomlTable& config,
                                          const std::string& base_dir = ".");

/// CSV rows `x_bucket,k,prob` (header required) -> bucketed pmf table.
PmfTable read_pmf_table_csv(const std::string& path);

/// Rejects sections other than [kernel] and [run] (strict parsing).
void validate_config_sections(const TomlTable& config);

/// Optional [run] section: experiment defaults that CLI flags override.
struct RunConfig {
  std::optional<std::int64_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_max;
  std::optional<double> rate;  // lambda
  std::optional<int> threads;
  std::optional<std::string> output_dir;
};
RunConfig load_run_config(const TomlTable& config);

}  // namespace jamsim
