// jamsim: greedy-exploration simulation and scaling-limit toolkit CLI.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "jamsim/bounds.hpp"
#include "jamsim/chain.hpp"
#include "jamsim/config.hpp"
#include "jamsim/ctime.hpp"
#include "jamsim/diffusion.hpp"
#include "jamsim/errors.hpp"
#include "jamsim/fluid.hpp"
#include "jamsim/graph_explore.hpp"
#include "jamsim/io.hpp"
#include "jamsim/kernel.hpp"
#include "jamsim/parallel.hpp"
#include "jamsim/stats.hpp"
#include "jamsim/validation.hpp"

namespace {

using jamsim::CltPrediction;
using jamsim::CtimeModel;
using jamsim::DiffusionSolution;
using jamsim::FluidSolution;
using jamsim::Kernel;
using jamsim::McSummary;

// Options shared by the experiment subcommands. Config-file values fill
// anything the command line left unset; explicit flags always win.
struct CommonOpts {
  std::optional<std::string> config_path;
  std::optional<std::int64_t> items;
  std::optional<double> degree;
  std::optional<std::int64_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_max;
  std::optional<double> rate;
  std::optional<int> threads;
  std::optional<std::string> output_dir;

  jamsim::TomlTable config;
  jamsim::RunConfig run_config;

  void load_config() {
    if (!config_path) return;
    config = jamsim::parse_toml_file(*config_path);
    jamsim::validate_config_sections(config);
    run_config = jamsim::load_run_config(config);
    if (!runs) runs = run_config.runs;
    if (!seed) seed = run_config.seed;
    if (!dt) dt = run_config.dt;
    if (!t_max) t_max = run_config.t_max;
    if (!rate) rate = run_config.rate;
    if (!threads) threads = run_config.threads;
    if (!output_dir) output_dir = run_config.output_dir;
  }

  std::shared_ptr<const Kernel> kernel() const {
    if (config_path && config.sections.contains("kernel")) {
      if (items || degree) {
        throw jamsim::ConfigError(
            "give the kernel either via --config or via --N/--c, not both");
      }
      const auto dir =
          std::filesystem::path(*config_path).parent_path().string();
      return jamsim::load_kernel(config, dir.empty() ? "." : dir);
    }
    if (!items || !degree) {
      throw jamsim::ConfigError(
          "kernel unspecified: pass --N and --c, or --config with a "
          "[kernel] section");
    }
    return jamsim::make_er_kernel(*items, *degree);
  }

  // For the deterministic solvers only the limit functions matter, so --c
  // alone suffices; N defaults to a value that keeps c/N in range.
  std::shared_ptr<const Kernel> limit_kernel() const {
    if ((config_path && config.sections.contains("kernel")) || items) {
      return kernel();
    }
    if (!degree) {
      throw jamsim::ConfigError("pass --c (or a [kernel] config section)");
    }
    const auto n =
        std::max<std::int64_t>(1000, static_cast<std::int64_t>(*degree) + 2);
    return jamsim::make_er_kernel(n, *degree);
  }

  std::uint64_t seed_or_throw() const {
    if (!seed) {
      throw jamsim::ConfigError(
          "--seed is required for simulation commands (no wall-clock "
          "seeding)");
    }
    return *seed;
  }
  std::int64_t runs_or(std::int64_t fallback) const {
    return runs.value_or(fallback);
  }
  double dt_or(double fallback) const { return dt.value_or(fallback); }
  double tmax_or(double fallback) const { return t_max.value_or(fallback); }
  double rate_or(double fallback) const { return rate.value_or(fallback); }
  int threads_or_default() const { return threads.value_or(0); }

  std::string out_path(const std::string& name) const {
    const std::string dir = output_dir.value_or(".");
    std::filesystem::create_directories(dir);
    return dir + "/" + name;
  }
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool with_runs = true,
                      bool with_dt = false) {
  cmd->add_option("--config", opts.config_path,
                  "TOML config with [kernel] and optional [run] sections");
  cmd->add_option("--N", opts.items, "number of items (Erdos-Renyi kernel)");
  cmd->add_option("--c", opts.degree, "mean degree c of G(N, c/N)");
  if (with_runs) {
    cmd->add_option("--runs", opts.runs, "number of Monte Carlo runs");
    cmd->add_option("--seed", opts.seed, "master seed (required)")
        ->envname("JAMSIM_SEED");
  }
  if (with_dt) {
    cmd->add_option("--dt", opts.dt, "solver grid step");
    cmd->add_option("--tmax", opts.t_max, "solver horizon");
  }
  cmd->add_option("--threads", opts.threads,
                  "worker threads (0 = hardware)")
      ->envname("JAMSIM_THREADS");
  cmd->add_option("--output-dir", opts.output_dir,
                  "directory for artifacts (default .)")
      ->envname("JAMSIM_OUTPUT_DIR");
}

int cmd_simulate(CommonOpts& opts, std::int64_t dump) {
  opts.load_config();
  const auto kernel = opts.kernel();
  const std::uint64_t seed = opts.seed_or_throw();
  const std::int64_t runs = opts.runs_or(1);
  const auto steps = jamsim::chain_hitting_steps(*kernel, runs, seed,
                                                 opts.threads_or_default());
  McSummary summary;
  summary.runs = runs;
  summary.items = kernel->items();
  summary.mean_degree = kernel->mean_degree();
  summary.seed = seed;
  double mean = 0.0;
  for (const auto s : steps) {
    mean += static_cast<double>(s) / static_cast<double>(kernel->items());
  }
  summary.mean_hit = mean / static_cast<double>(runs);
  double var = 0.0;
  for (const auto s : steps) {
    const double h =
        static_cast<double>(s) / static_cast<double>(kernel->items());
    var += (h - summary.mean_hit) * (h - summary.mean_hit);
  }
  summary.var_hit = runs > 1 ? var / static_cast<double>(runs - 1) : 0.0;
  jamsim::write_text_file(opts.out_path("summary.json"),
                          jamsim::batch_summary_json(summary, ""));
  for (std::int64_t i = 0; i < std::min(dump, runs); ++i) {
    const auto traj =
        jamsim::simulate(*kernel, seed, static_cast<std::uint64_t>(i));
    jamsim::write_trajectory_csv(
        opts.out_path("trajectory_" + std::to_string(i) + ".csv"), traj);
  }
  std::cout << "simulate: " << runs << " runs, mean hitting fraction "
            << jamsim::format_double(summary.mean_hit) << "\n";
  return 0;
}

int cmd_graph(CommonOpts& opts, std::int64_t dump) {
  opts.load_config();
  const std::uint64_t seed = opts.seed_or_throw();
  const std::int64_t runs = opts.runs_or(1);
  if (!opts.items || !opts.degree) {
    throw jamsim::ConfigError("graph: --N and --c are required");
  }
  const McSummary summary = jamsim::run_graph_experiment(
      *opts.items, *opts.degree, runs, seed, opts.threads_or_default());
  jamsim::write_text_file(opts.out_path("graph_summary.json"),
                          jamsim::batch_summary_json(summary, "graph"));
  const auto kernel = jamsim::make_er_kernel(*opts.items, *opts.degree);
  for (std::int64_t i = 0; i < std::min(dump, runs); ++i) {
    const auto run = jamsim::explore_er_graph(*opts.items, *opts.degree, seed,
                                              static_cast<std::uint64_t>(i));
    jamsim::write_exploration_csv(
        opts.out_path("graph_trajectory_" + std::to_string(i) + ".csv"), run,
        *kernel);
  }
  std::cout << "graph: " << runs << " runs, mean active fraction "
            << jamsim::format_double(summary.mean_hit) << "\n";
  return 0;
}

int cmd_fluid(CommonOpts& opts, bool closed_form) {
  opts.load_config();
  const double dt = opts.dt_or(1e-3);
  FluidSolution sol = [&] {
    if (closed_form) {
      if (!opts.degree) {
        throw jamsim::ConfigError("fluid --closed-form requires --c");
      }
      return jamsim::er_closed_form(*opts.degree, dt);
    }
    const auto kernel = opts.limit_kernel();
    return jamsim::solve_fluid(*kernel, dt, opts.tmax_or(4.0));
  }();
  jamsim::write_fluid_csv(opts.out_path("fluid.csv"), sol);
  jamsim::JsonObject obj;
  obj.put_optional("c", opts.degree)
      .put("dt", dt)
      .put("T_star", sol.hit() == jamsim::HitKind::none
                         ? std::numeric_limits<double>::quiet_NaN()
                         : sol.hitting_time())
      .put("provenance", closed_form ? "closed_form" : "numeric")
      .put("reached_one", sol.hit() != jamsim::HitKind::none);
  jamsim::write_text_file(opts.out_path("fluid.json"), obj.dump());
  if (sol.hit() == jamsim::HitKind::none) {
    std::cout << "fluid: level 1 not reached within the horizon\n";
  } else {
    std::cout << "fluid: T_star = "
              << jamsim::format_double(sol.hitting_time()) << "\n";
  }
  return 0;
}

int cmd_diffusion(CommonOpts& opts) {
  opts.load_config();
  const auto kernel = opts.limit_kernel();
  const double dt = opts.dt_or(1e-3);
  const FluidSolution fluid =
      jamsim::solve_fluid(*kernel, dt, opts.tmax_or(4.0));
  const DiffusionSolution diff = jamsim::solve_variance_ode(fluid, *kernel);
  jamsim::write_diffusion_csv(opts.out_path("diffusion.csv"), diff);
  jamsim::JsonObject obj;
  obj.put("T_star", diff.t_star).put("sigma_sq", diff.sigma_sq);
  jamsim::write_text_file(opts.out_path("diffusion.json"), obj.dump());
  std::cout << "diffusion: sigma_sq = "
            << jamsim::format_double(diff.sigma_sq) << "\n";
  return 0;
}

int cmd_lln(CommonOpts& opts) {
  opts.load_config();
  const auto kernel = opts.kernel();
  const McSummary s =
      jamsim::run_lln_experiment(*kernel, opts.runs_or(500),
                                 opts.seed_or_throw(),
                                 opts.threads_or_default());
  jamsim::write_text_file(opts.out_path("lln_verdict.json"),
                          jamsim::mc_verdict_json(s));
  jamsim::write_samples_csv(opts.out_path("lln_samples.csv"), s.clt_samples);
  std::cout << "lln: mean sup deviation "
            << jamsim::format_double(s.sup_dev_mean)
            << (s.pass ? " (within budget)" : " (budget exceeded)") << "\n";
  return s.pass ? 0 : 1;
}

int cmd_clt(CommonOpts& opts) {
  opts.load_config();
  const auto kernel = opts.kernel();
  const FluidSolution fluid =
      jamsim::solve_fluid(*kernel, opts.dt_or(1e-3), opts.tmax_or(4.0));
  const DiffusionSolution diff = jamsim::solve_variance_ode(fluid, *kernel);
  const CltPrediction pred = jamsim::clt_prediction(*kernel, fluid, diff);
  const McSummary s =
      jamsim::run_clt_experiment(*kernel, opts.runs_or(2000),
                                 opts.seed_or_throw(), pred,
                                 opts.threads_or_default());
  jamsim::write_text_file(opts.out_path("clt_verdict.json"),
                          jamsim::mc_verdict_json(s));
  jamsim::write_samples_csv(opts.out_path("clt_samples.csv"), s.clt_samples);
  std::cout << "clt: ks = " << jamsim::format_double(s.ks_stat)
            << (s.pass ? " PASS" : " FAIL") << "\n";
  return s.pass ? 0 : 1;
}

int cmd_bounds(CommonOpts& opts, double horizon, double p) {
  opts.load_config();
  const auto kernel = opts.kernel();
  const jamsim::ErrorBudget budget = jamsim::make_error_budget(*kernel,
                                                               horizon);
  jamsim::JsonObject obj;
  obj.put("N", budget.items)
      .put("T", budget.horizon)
      .put("approx_error", budget.approx_error)
      .put("lipschitz", budget.lipschitz)
      .put("max_neighbor_var", budget.max_var)
      .put("max_neighbor_mean", budget.max_mean)
      .put("martingale_var_rate", budget.martingale_var_rate)
      .put("sup_dev_bound", budget.omega)
      .put("lp_bound_p", p)
      .put("lp_bound", jamsim::lp_sup_bound(*kernel, horizon, p));
  const std::string json = obj.dump();
  jamsim::write_text_file(opts.out_path("budget.json"), json);
  std::cout << json;
  return 0;
}

int cmd_ctime(CommonOpts& opts, std::int64_t dump) {
  opts.load_config();
  const auto kernel = opts.kernel();
  const CtimeModel model{kernel, opts.rate_or(1.0)};
  const double dt = opts.dt_or(1e-3);
  const double t_max = opts.tmax_or(3.0);
  const FluidSolution fluid = jamsim::solve_ctime_fluid(model, dt, t_max);
  const DiffusionSolution variance = jamsim::solve_ctime_variance(model,
                                                                   fluid);
  jamsim::write_fluid_csv(opts.out_path("ctime_fluid.csv"), fluid);
  jamsim::write_diffusion_csv(opts.out_path("ctime_variance.csv"), variance);

  const std::uint64_t seed = opts.seed_or_throw();
  const std::int64_t runs = opts.runs_or(1);
  std::vector<double> sups(static_cast<std::size_t>(runs));
  std::vector<double> absorb(static_cast<std::size_t>(runs));
  jamsim::parallel_for(runs, opts.threads_or_default(), [&](std::int64_t i) {
    const auto traj =
        jamsim::simulate_ctime(model, seed, static_cast<std::uint64_t>(i));
    sups[static_cast<std::size_t>(i)] =
        jamsim::ctime_sup_deviation(traj, fluid, t_max);
    absorb[static_cast<std::size_t>(i)] = traj.absorb_time();
  });
  double sup_mean = 0.0, absorb_mean = 0.0;
  for (std::int64_t i = 0; i < runs; ++i) {
    sup_mean += sups[static_cast<std::size_t>(i)];
    absorb_mean += absorb[static_cast<std::size_t>(i)];
  }
  sup_mean /= static_cast<double>(runs);
  absorb_mean /= static_cast<double>(runs);

  jamsim::JsonObject obj;
  obj.put("runs", runs)
      .put("N", kernel->items())
      .put_optional("c", kernel->mean_degree())
      .put("lambda", model.rate)
      .put("tmax", t_max)
      .put("soft_hit",
           fluid.hit() == jamsim::HitKind::none
               ? std::numeric_limits<double>::quiet_NaN()
               : fluid.hitting_time())
      .put("mean_sup_deviation", sup_mean)
      .put("mean_absorb_time", absorb_mean)
      .put("seed", seed);
  jamsim::write_text_file(opts.out_path("ctime_summary.json"), obj.dump());
  for (std::int64_t i = 0; i < std::min(dump, runs); ++i) {
    const auto traj =
        jamsim::simulate_ctime(model, seed, static_cast<std::uint64_t>(i));
    jamsim::write_ctime_csv(
        opts.out_path("ctime_trajectory_" + std::to_string(i) + ".csv"),
        traj);
  }
  std::cout << "ctime: mean sup deviation over [0," << t_max << "] = "
            << jamsim::format_double(sup_mean) << "\n";
  return 0;
}

int cmd_validate(CommonOpts& opts, const std::string& preset) {
  opts.load_config();
  const std::uint64_t seed = opts.seed.value_or(jamsim::kValidationSeed);
  const auto results =
      jamsim::run_acceptance(preset, seed, opts.threads_or_default());
  bool all_pass = true;
  std::string lines;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    all_pass = all_pass && r.pass;
    std::cout << "[" << (i + 1) << "/" << results.size() << "] " << r.id
              << (r.pass ? " PASS  " : " FAIL  ") << r.detail << "\n";
  }
  jamsim::JsonObject obj;
  obj.put("preset", preset)
      .put("seed", seed)
      .put("criteria", static_cast<std::int64_t>(results.size()))
      .put("pass", all_pass);
  jamsim::write_text_file(opts.out_path("validate.json"), obj.dump());
  std::cout << (all_pass ? "validate: PASS" : "validate: FAIL") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "jamsim: greedy exploration / random sequential adsorption on "
      "homogeneous random graphs - simulation, fluid and diffusion limits, "
      "and their statistical validation"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::int64_t dump = 0;
  double horizon = 1.0;
  double lp_p = 2.0;
  std::string preset = "full";

  auto* simulate = app.add_subcommand(
      "simulate", "batch of exploration-chain trajectories");
  add_common_flags(simulate, opts);
  simulate->add_option("--dump-trajectories", dump,
                       "write the first K trajectories as CSV");

  auto* graph = app.add_subcommand(
      "graph", "batch of explicit-graph greedy explorations");
  add_common_flags(graph, opts);
  graph->add_option("--dump-trajectories", dump,
                    "write the first K traces as CSV");

  auto* fluid =
      app.add_subcommand("fluid", "deterministic scaled-exploration path");
  add_common_flags(fluid, opts, /*with_runs=*/false, /*with_dt=*/true);
  bool closed_form = false;
  fluid->add_flag("--closed-form", closed_form,
                  "use the explicit G(N, c/N) solution instead of the solver");

  auto* diffusion = app.add_subcommand(
      "diffusion", "fluctuation variance curve and limit variance");
  add_common_flags(diffusion, opts, /*with_runs=*/false, /*with_dt=*/true);

  auto* lln = app.add_subcommand(
      "lln", "sup-path deviation experiment against the fluid limit");
  add_common_flags(lln, opts);

  auto* clt = app.add_subcommand(
      "clt", "hitting-time fluctuation experiment against the normal limit");
  add_common_flags(clt, opts);

  auto* bounds = app.add_subcommand(
      "bounds", "explicit non-asymptotic error budget (JSON)");
  add_common_flags(bounds, opts, /*with_runs=*/false);
  bounds->add_option("--T", horizon, "time horizon of the budget");
  bounds->add_option("--p", lp_p, "norm order for the L^p envelope");

  auto* ctime = app.add_subcommand(
      "ctime", "continuous-time exploration with exponential clocks");
  add_common_flags(ctime, opts, /*with_runs=*/true, /*with_dt=*/true);
  ctime->add_option("--lambda", opts.rate, "per-item activation rate");
  ctime->add_option("--dump-trajectories", dump,
                    "write the first K event traces as CSV");

  auto* validate = app.add_subcommand(
      "validate", "run a validation preset and report pass/fail");
  add_common_flags(validate, opts);
  validate
      ->add_option("--preset", preset,
                   "one of: full, er-c1, er-c2, smoke")
      ->check(CLI::IsMember({"full", "er-c1", "er-c2", "smoke"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opts, dump);
    if (graph->parsed()) return cmd_graph(opts, dump);
    if (fluid->parsed()) return cmd_fluid(opts, closed_form);
    if (diffusion->parsed()) return cmd_diffusion(opts);
    if (lln->parsed()) return cmd_lln(opts);
    if (clt->parsed()) return cmd_clt(opts);
    if (bounds->parsed()) return cmd_bounds(opts, horizon, lp_p);
    if (ctime->parsed()) return cmd_ctime(opts, dump);
    if (validate->parsed()) return cmd_validate(opts, preset);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
