#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jamsim/bounds.hpp"
#include "jamsim/chain.hpp"
#include "jamsim/ctime.hpp"
#include "jamsim/diffusion.hpp"
#include "jamsim/fluid.hpp"
#include "jamsim/graph_explore.hpp"
#include "jamsim/stats.hpp"

namespace jamsim {

/// Doubles in artifacts are serialized with 17 significant digits ('.'
/// decimal point), which round-trips exactly and keeps files byte-identical
/// across reruns of the same config.
std::string format_double(double v);

/// Minimal ordered flat JSON writer (objects of scalars and number arrays);
/// floats go through format_double. NaN serializes as null.
class JsonObject {
 public:
  JsonObject& put(const std::string& key, double v);
  JsonObject& put(const std::string& key, std::int64_t v);
  JsonObject& put(const std::string& key, std::uint64_t v);
  JsonObject& put(const std::string& key, bool v);
  JsonObject& put(const std::string& key, const std::string& v);
  JsonObject& put(const std::string& key, const char* v);
  JsonObject& put(const std::string& key, const std::vector<double>& v);
  JsonObject& put_optional(const std::string& key, std::optional<double> v);
  std::string dump() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

void write_text_file(const std::string& path, const std::string& content);

// Artifact writers; columns and schemas are part of the CLI contract.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
/// Same step,Z,M schema as the chain dump; the martingale component is
/// reconstructed from the kernel's per-state means.
void write_exploration_csv(const std::string& path, const ExplorationRun& run,
                           const Kernel& kernel);
void write_ctime_csv(const std::string& path, const CtimeTrajectory& traj);
void write_fluid_csv(const std::string& path, const FluidSolution& sol);
void write_diffusion_csv(const std::string& path,
                         const DiffusionSolution& sol);
void write_samples_csv(const std::string& path,
                       const std::vector<double>& samples);

std::string batch_summary_json(const McSummary& summary,
                               const std::string& source);
std::string mc_verdict_json(const McSummary& summary);
std::string budget_json(const ErrorBudget& budget);

}  // namespace jamsim
