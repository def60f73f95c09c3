#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace jamsim {

/// One validation criterion outcome. `detail` carries the measured numbers
/// so a failure is diagnosable from the log alone.
struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Deterministic default seed for the validation suites.
inline constexpr std::uint64_t kValidationSeed = 1;

CriterionResult check_fluid_oracle(const std::vector<double>& cs);
CriterionResult check_variance_oracle(const std::vector<double>& cs);
CriterionResult check_lln_paths(std::uint64_t seed, int threads);
CriterionResult check_hitting_lln(std::uint64_t seed, int threads,
                                  std::int64_t runs = 2000,
                                  std::int64_t items = 10000,
                                  double tolerance = 0.005);
CriterionResult check_clt(const std::vector<double>& cs, std::uint64_t seed,
                          int threads);
CriterionResult check_chain_graph_equivalence(std::uint64_t seed, int threads,
                                              std::int64_t runs = 5000);
CriterionResult check_martingale_identity(std::uint64_t seed, int threads);
CriterionResult check_ctime(std::uint64_t seed, int threads);
CriterionResult check_binomial_poisson_gap();

/// Preset suites: "full" (every criterion at its stated scale), "er-c1" /
/// "er-c2" (the c = 1 / c = 2 slices), "smoke" (seconds-scale build check).
std::vector<CriterionResult> run_acceptance(const std::string& preset,
                                            std::uint64_t seed,
                                            int threads);

}  // namespace jamsim
