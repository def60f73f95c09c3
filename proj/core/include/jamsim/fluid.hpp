#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "jamsim/kernel.hpp"

namespace jamsim {

enum class FluidProvenance { numeric, closed_form };
enum class HitKind { exact, soft, none };

/// Deterministic scaled-exploration path z(t) on a uniform grid, with cubic
/// Hermite interpolation between nodes (the solver knows dz/dt exactly at
/// every node). Closed-form solutions evaluate their formula directly.
class FluidSolution {
 public:
  double value(double t) const;
  double deriv(double t) const;

  std::span<const double> times() const { return times_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> derivs() const { return derivs_; }
  double dt() const { return dt_; }
  double t_end() const { return times_.back(); }

  HitKind hit() const { return hit_; }
  FluidProvenance provenance() const { return provenance_; }

  /// Time at which the path reaches level 1 (or the soft threshold for
  /// asymptotic dynamics). Throws NoHitting when the level was never reached.
  double hitting_time() const;

  /// Clamped evaluation min(value(t), 1): the stopped fluid path that the
  /// absorbed chain tracks.
  double stopped_value(double t) const;

 private:
  friend FluidSolution solve_ode_grid(const std::function<double(double)>& rhs,
                                      double dt, double t_max,
                                      std::optional<double> stop_level,
                                      double soft_level);
  friend FluidSolution er_closed_form(double c, double dt);

  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  double dt_ = 0.0;
  HitKind hit_ = HitKind::none;
  std::optional<double> hit_time_;
  FluidProvenance provenance_ = FluidProvenance::numeric;
  std::function<double(double)> exact_;  // set for closed forms
  std::function<double(double)> exact_deriv_;
};

/// Classical fixed-step RK4 for dz/dt = rhs(z), z(0) = 0. Integration stops
/// one node past the first grid value >= stop_level (when given), else at
/// t_max. When stop_level is given but never reached within t_max the
/// solution is flagged HitKind::none rather than silently truncated; a
/// soft_level > 0 records a HitKind::soft crossing instead.
FluidSolution solve_ode_grid(const std::function<double(double)>& rhs,
                             double dt, double t_max,
                             std::optional<double> stop_level,
                             double soft_level = 0.0);

/// Fluid limit of the discrete chain: dz/dt = 1 + drift(z).
FluidSolution solve_fluid(const std::function<double(double)>& drift,
                          double dt, double t_max);
FluidSolution solve_fluid(const Kernel& kernel, double dt, double t_max);

/// Erdos-Renyi closed form z(t) = rho (1 - e^{-c t}), rho = (1+c)/c, with
/// exact hitting time log(1+c)/c.
FluidSolution er_closed_form(double c, double dt = 1e-3);

/// Hitting time of level 1; bisection on the monotone interpolant.
double hitting_time_fluid(const FluidSolution& sol);

}  // namespace jamsim
