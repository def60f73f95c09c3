#include "jamsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "jamsim/errors.hpp"

namespace jamsim {

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

JsonObject& JsonObject::put(const std::string& key, double v) {
  fields_.emplace_back(key, format_double(v));
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, std::int64_t v) {
  fields_.emplace_back(key, std::to_string(v));
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, std::uint64_t v) {
  fields_.emplace_back(key, std::to_string(v));
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, bool v) {
  fields_.emplace_back(key, v ? "true" : "false");
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, const std::string& v) {
  std::string quoted = "\"";
  for (const char ch : v) {
    if (ch == '"' || ch == '\\') quoted += '\\';
    quoted += ch;
  }
  quoted += '"';
  fields_.emplace_back(key, quoted);
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, const char* v) {
  return put(key, std::string(v));
}

JsonObject& JsonObject::put(const std::string& key,
                            const std::vector<double>& v) {
  std::string arr = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) arr += ", ";
    arr += format_double(v[i]);
  }
  arr += "]";
  fields_.emplace_back(key, arr);
  return *this;
}

JsonObject& JsonObject::put_optional(const std::string& key,
                                     std::optional<double> v) {
  fields_.emplace_back(key, v ? format_double(*v) : "null");
  return *this;
}

std::string JsonObject::dump() const {
  std::string out = "{\n";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    out += "  \"" + fields_[i].first + "\": " + fields_[i].second;
    if (i + 1 < fields_.size()) out += ",";
    out += "\n";
  }
  out += "}\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << content;
  if (!out) throw ConfigError("write failed: " + path);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ostringstream os;
  os << "step,Z,M\n";
  for (std::size_t l = 0; l < traj.explored.size(); ++l) {
    os << l << ',' << traj.explored[l] << ','
       << format_double(traj.martingale[l]) << '\n';
  }
  write_text_file(path, os.str());
}

void write_exploration_csv(const std::string& path, const ExplorationRun& run,
                           const Kernel& kernel) {
  std::ostringstream os;
  os << "step,Z,M\n";
  os << "0,0," << format_double(0.0) << '\n';
  double compensator = 0.0;
  std::int64_t prev = 0;
  for (std::size_t l = 0; l < run.explored_trace.size(); ++l) {
    compensator += 1.0 + kernel.neighbor_mean(prev);
    prev = run.explored_trace[l];
    os << (l + 1) << ',' << prev << ','
       << format_double(static_cast<double>(prev) - compensator) << '\n';
  }
  write_text_file(path, os.str());
}

void write_ctime_csv(const std::string& path, const CtimeTrajectory& traj) {
  std::ostringstream os;
  os << "time,Z\n";
  os << format_double(0.0) << ",0\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << format_double(traj.times[i]) << ',' << traj.explored[i] << '\n';
  }
  write_text_file(path, os.str());
}

void write_fluid_csv(const std::string& path, const FluidSolution& sol) {
  std::ostringstream os;
  os << "t,z\n";
  const auto ts = sol.times();
  const auto zs = sol.values();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    os << format_double(ts[i]) << ',' << format_double(zs[i]) << '\n';
  }
  write_text_file(path, os.str());
}

void write_diffusion_csv(const std::string& path,
                         const DiffusionSolution& sol) {
  std::ostringstream os;
  os << "t,beta,m\n";
  for (std::size_t i = 0; i < sol.times.size(); ++i) {
    os << format_double(sol.times[i]) << ',' << format_double(sol.beta[i])
       << ',' << format_double(sol.var[i]) << '\n';
  }
  write_text_file(path, os.str());
}

void write_samples_csv(const std::string& path,
                       const std::vector<double>& samples) {
  std::ostringstream os;
  os << "sample\n";
  for (const double s : samples) os << format_double(s) << '\n';
  write_text_file(path, os.str());
}

std::string batch_summary_json(const McSummary& summary,
                               const std::string& source) {
  JsonObject obj;
  obj.put("runs", summary.runs)
      .put("N", summary.items)
      .put_optional("c", summary.mean_degree)
      .put("mean_hitting_fraction", summary.mean_hit)
      .put("var_hitting_fraction", summary.var_hit)
      .put("seed", summary.seed);
  if (!source.empty()) obj.put("source", source);
  return obj.dump();
}

std::string mc_verdict_json(const McSummary& summary) {
  JsonObject obj;
  obj.put("experiment", summary.experiment)
      .put("kernel", summary.kernel_desc)
      .put("N", summary.items)
      .put_optional("c", summary.mean_degree)
      .put("runs", summary.runs)
      .put("mean_hit", summary.mean_hit)
      .put("var_hit", summary.var_hit)
      .put("T_star", summary.t_star)
      .put("sigma_sq", summary.sigma_sq)
      .put("ks_stat", summary.ks_stat)
      .put("sup_dev_mean", summary.sup_dev_mean)
      .put("seed", summary.seed)
      .put("pass", summary.pass);
  return obj.dump();
}

std::string budget_json(const ErrorBudget& budget) {
  JsonObject obj;
  obj.put("N", budget.items)
      .put("T", budget.horizon)
      .put("approx_error", budget.approx_error)
      .put("lipschitz", budget.lipschitz)
      .put("max_neighbor_var", budget.max_var)
      .put("max_neighbor_mean", budget.max_mean)
      .put("martingale_var_rate", budget.martingale_var_rate)
      .put("sup_dev_bound", budget.omega);
  return obj.dump();
}

}  // namespace jamsim
