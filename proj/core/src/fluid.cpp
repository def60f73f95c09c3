#include "jamsim/fluid.hpp"

#include <algorithm>
#include <cmath>

#include "jamsim/errors.hpp"

namespace jamsim {
namespace {

double hermite(double t0, double h, double y0, double y1, double d0, double d1,
               double t) {
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

double hermite_deriv(double t0, double h, double y0, double y1, double d0,
                     double d1, double t) {
  const double s = (t - t0) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * h * d0 +
          (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * h * d1) /
         h;
}

}  // namespace

double FluidSolution::value(double t) const {
  if (exact_) return exact_(t);
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto hi = static_cast<std::size_t>(std::ceil(t / dt_));
  const std::size_t i = std::min(hi, values_.size() - 1);
  if (i == 0) return values_.front();
  return hermite(times_[i - 1], dt_, values_[i - 1], values_[i],
                 derivs_[i - 1], derivs_[i], t);
}

double FluidSolution::deriv(double t) const {
  if (exact_deriv_) return exact_deriv_(t);
  if (t <= times_.front()) return derivs_.front();
  if (t >= times_.back()) return derivs_.back();
  const auto hi = static_cast<std::size_t>(std::ceil(t / dt_));
  const std::size_t i = std::min(hi, values_.size() - 1);
  if (i == 0) return derivs_.front();
  return hermite_deriv(times_[i - 1], dt_, values_[i - 1], values_[i],
                       derivs_[i - 1], derivs_[i], t);
}

double FluidSolution::hitting_time() const {
  if (hit_ == HitKind::none || !hit_time_) {
    throw NoHitting("fluid path never reached level 1 within the horizon");
  }
  return *hit_time_;
}

double FluidSolution::stopped_value(double t) const {
  return std::min(value(t), 1.0);
}

FluidSolution solve_ode_grid(const std::function<double(double)>& rhs,
                             double dt, double t_max,
                             std::optional<double> stop_level,
                             double soft_level) {
  if (dt <= 0.0) throw InvalidParameter("ode solver: dt must be > 0");
  if (t_max <= 0.0) throw InvalidParameter("ode solver: t_max must be > 0");

  FluidSolution sol;
  sol.dt_ = dt;
  double z = 0.0;
  double t = 0.0;
  sol.times_.push_back(0.0);
  sol.values_.push_back(0.0);
  sol.derivs_.push_back(rhs(0.0));

  bool crossed = false;
  bool one_more = false;
  const auto max_steps =
      static_cast<std::int64_t>(std::ceil(t_max / dt)) + 1;
  for (std::int64_t step = 0; step < max_steps; ++step) {
    const double k1 = rhs(z);
    const double k2 = rhs(z + 0.5 * dt * k1);
    const double k3 = rhs(z + 0.5 * dt * k2);
    const double k4 = rhs(z + dt * k3);
    z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = static_cast<double>(step + 1) * dt;
    sol.times_.push_back(t);
    sol.values_.push_back(z);
    sol.derivs_.push_back(rhs(z));
    if (one_more) break;
    if (stop_level && z >= *stop_level) {
      crossed = true;
      one_more = true;  // one extra node so the crossing cell is interior
    }
  }

  if (stop_level && crossed) {
    sol.hit_ = HitKind::exact;
    // Bracket the crossing on the grid, then bisect the interpolant.
    std::size_t i = 1;
    while (sol.values_[i] < *stop_level) ++i;
    double lo = sol.times_[i - 1];
    double hi = sol.times_[i];
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double v = sol.value(mid);
      if (std::fabs(v - *stop_level) < 1e-13) {
        lo = hi = mid;
        break;
      }
      (v < *stop_level ? lo : hi) = mid;
      if (hi - lo < 1e-15) break;
    }
    sol.hit_time_ = 0.5 * (lo + hi);
  } else if (soft_level > 0.0) {
    // Asymptotic dynamics: report the time the path clears the threshold.
    for (std::size_t i = 1; i < sol.values_.size(); ++i) {
      if (sol.values_[i] >= soft_level) {
        double lo = sol.times_[i - 1];
        double hi = sol.times_[i];
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
          const double mid = 0.5 * (lo + hi);
          (sol.value(mid) < soft_level ? lo : hi) = mid;
        }
        sol.hit_ = HitKind::soft;
        sol.hit_time_ = 0.5 * (lo + hi);
        break;
      }
    }
  }
  return sol;
}

FluidSolution solve_fluid(const std::function<double(double)>& drift,
                          double dt, double t_max) {
  return solve_ode_grid([&drift](double z) { return 1.0 + drift(z); }, dt,
                        t_max, 1.0);
}

FluidSolution solve_fluid(const Kernel& kernel, double dt, double t_max) {
  return solve_fluid([&kernel](double z) { return kernel.drift(z); }, dt,
                     t_max);
}

FluidSolution er_closed_form(double c, double dt) {
  if (c <= 0.0) throw InvalidParameter("er_closed_form: c must be > 0");
  if (dt <= 0.0) throw InvalidParameter("er_closed_form: dt must be > 0");
  const double rho = (1.0 + c) / c;
  const double t_star = std::log1p(c) / c;

  FluidSolution sol;
  sol.provenance_ = FluidProvenance::closed_form;
  sol.dt_ = dt;
  sol.hit_ = HitKind::exact;
  sol.hit_time_ = t_star;
  sol.exact_ = [rho, c](double t) { return rho * (1.0 - std::exp(-c * t)); };
  sol.exact_deriv_ = [rho, c](double t) { return rho * c * std::exp(-c * t); };
  const auto nodes = static_cast<std::int64_t>(std::ceil(t_star / dt)) + 1;
  for (std::int64_t i = 0; i <= nodes; ++i) {
    const double t = static_cast<double>(i) * dt;
    sol.times_.push_back(t);
    sol.values_.push_back(sol.exact_(t));
    sol.derivs_.push_back(sol.exact_deriv_(t));
  }
  return sol;
}

double hitting_time_fluid(const FluidSolution& sol) {
  return sol.hitting_time();
}

}  // namespace jamsim
