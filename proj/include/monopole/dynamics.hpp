#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "monopole/common.hpp"
#include "monopole/dual.hpp"
#include "monopole/integrals.hpp"
#include "monopole/linalg.hpp"
#include "monopole/model.hpp"

namespace monopole {

struct StepStats {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t newton_iters = 0;
};

struct DomainEvent {
  double t;
  std::string what;
};

/// Sampled time series with per-sample relative drift of (H, X1, X2, calX)
/// from their t = 0 values. calX drift is NaN when S <= 0 at the start.
struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> states;
  std::vector<std::array<double, 4>> drift_log;
  StepStats stats;
  std::optional<DomainEvent> domain_event;
};

struct ClosureReport {
  bool bounded = false;
  double min_recurrence_distance = 0.0;
  bool closes = false;
  std::int64_t epochs_scanned = 0;
  double t_guard_used = 0.0;
};

struct IntegrateOptions {
  double dt = 1e-3;
  double tol_newton = 1e-13;
  int sample_every = 10;
  bool monitor_calX = true;
};

namespace detail {

template <class T>
State6<T> rhs_at(const Model& mdl, const State6<T>& z) {
  // (dr, dtheta, dphi, dp_r, dp_theta, dp_phi)/dt from the canonical
  // equations; the gradient in phi vanishes identically (cyclic).
  State6<T> g;
  for (std::size_t i = 0; i < 6; ++i) {
    State6<Dual<T>> dz;
    for (std::size_t j = 0; j < 6; ++j)
      dz[j] = Dual<T>(z[j], T(i == j ? 1.0 : 0.0));
    g[i] = hamiltonian_at(mdl, dz).dot;
  }
  return {g[3], g[4], g[5], -g[0], -g[1], -g[2]};
}

inline bool hard_domain_ok(const State6<double>& z) {
  return z[0] > 1e-12 && z[1] > 1e-9 && z[1] < std::numbers::pi - 1e-9 &&
         std::isfinite(z[0]) && std::isfinite(z[1]) && std::isfinite(z[3]) &&
         std::isfinite(z[4]);
}

inline void require_window(const Model& mdl, const State6<double>& z,
                           const char* who) {
  if (!hard_domain_ok(z) || !mdl.r_in_window(z[0]) ||
      !mdl.theta_in_window(z[1]))
    throw DomainExit(std::string(who) + ": point left the validated window");
}

}  // namespace detail

inline std::array<double, 6> hamilton_rhs(const Model& mdl,
                                          const PhasePoint& z) {
  mdl.require_point(z);
  return detail::rhs_at(mdl, z.state());
}

/// One step of the implicit midpoint rule z' = z + dt f((z + z')/2); damped
/// Newton on the 6-dim residual with the Jacobian assembled from nested
/// dual numbers. p_phi is pinned exactly: dp_phi/dt vanishes identically in
/// constant-ell gauge, so the scheme's exact solution keeps it fixed.
inline PhasePoint step_implicit_midpoint(const Model& mdl, const PhasePoint& z,
                                         double dt, double tol_newton,
                                         StepStats* stats = nullptr) {
  const State6<double> z0 = z.state();
  if (dt == 0.0) return z;

  State6<double> zn = z0;  // iterate for z'
  auto residual = [&](const State6<double>& cand) {
    State6<double> mid;
    for (int i = 0; i < 6; ++i) mid[i] = 0.5 * (z0[i] + cand[i]);
    detail::require_window(mdl, mid, "step_implicit_midpoint");
    const auto f = detail::rhs_at(mdl, mid);
    State6<double> res;
    for (int i = 0; i < 6; ++i) res[i] = cand[i] - z0[i] - dt * f[i];
    return res;
  };

  // explicit Euler predictor
  {
    const auto f0 = detail::rhs_at(mdl, z0);
    for (int i = 0; i < 6; ++i) zn[i] = z0[i] + dt * f0[i];
  }

  auto res = residual(zn);
  double rnorm = norm2(res);
  constexpr int kMaxIter = 25;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    if (rnorm <= tol_newton) {
      if (stats) stats->newton_iters += iter;
      State6<double> out = zn;
      out[5] = z0[5];  // exact: f[5] == 0
      return PhasePoint::from_state(out);
    }
    State6<double> mid;
    for (int i = 0; i < 6; ++i) mid[i] = 0.5 * (z0[i] + zn[i]);
    // d residual / d z' = I - (dt/2) Df(mid)
    Mat6 jac{};
    for (int col = 0; col < 6; ++col) {
      State6<D1> dz;
      for (int j = 0; j < 6; ++j) dz[j] = D1(mid[j], j == col ? 0.5 : 0.0);
      State6<D1> f = detail::rhs_at(mdl, dz);
      for (int row = 0; row < 6; ++row)
        jac[row][col] = (row == col ? 1.0 : 0.0) - dt * f[row].dot;
    }
    Vec6 negres;
    for (int i = 0; i < 6; ++i) negres[i] = -res[i];
    const Vec6 step = lu_solve6(jac, negres);

    // damping: backtrack until the residual norm decreases
    double lambda = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 6; ++bt) {
      State6<double> trial;
      for (int i = 0; i < 6; ++i) trial[i] = zn[i] + lambda * step[i];
      auto tres = residual(trial);
      const double tnorm = norm2(tres);
      if (tnorm < rnorm || tnorm <= tol_newton) {
        zn = trial;
        res = tres;
        rnorm = tnorm;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved)
      throw NewtonDiverged("implicit midpoint: damped Newton stalled at |r| = " +
                           std::to_string(rnorm));
  }
  throw NewtonDiverged("implicit midpoint: no convergence in 25 iterations");
}

struct RkStepResult {
  PhasePoint z_next;
  double dt_used;
  double dt_next;
  double error_estimate;
};

/// Embedded Dormand-Prince 5(4) step with PI step-size control (pass the
/// previous step's error estimate for the PI term; < 0 means no history).
/// Cross-check integrator; not symplectic.
inline RkStepResult step_rk_adaptive(const Model& mdl, const PhasePoint& z,
                                     double dt_suggest, double tol,
                                     double err_prev = -1.0) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  const State6<double> z0 = z.state();
  auto eval = [&](const State6<double>& s) {
    if (!detail::hard_domain_ok(s))
      throw DomainExit("step_rk_adaptive: stage left the chart");
    return detail::rhs_at(mdl, s);
  };
  const State6<double> k1 = eval(z0);  // DomainExit propagates for a bad z0

  double dt = dt_suggest;
  for (int attempt = 0; attempt < 60; ++attempt) {
    if (std::abs(dt) < 1e-12)
      throw StepUnderflow("step_rk_adaptive: dt fell below 1e-12");
    State6<double> k2, k3, k4, k5, k6, k7, y;
    try {
      for (int i = 0; i < 6; ++i) y[i] = z0[i] + dt * a21 * k1[i];
      k2 = eval(y);
      for (int i = 0; i < 6; ++i)
        y[i] = z0[i] + dt * (a31 * k1[i] + a32 * k2[i]);
      k3 = eval(y);
      for (int i = 0; i < 6; ++i)
        y[i] = z0[i] + dt * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = eval(y);
      for (int i = 0; i < 6; ++i)
        y[i] = z0[i] +
               dt * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = eval(y);
      for (int i = 0; i < 6; ++i)
        y[i] = z0[i] + dt * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                             a64 * k4[i] + a65 * k5[i]);
      k6 = eval(y);
      for (int i = 0; i < 6; ++i)
        y[i] = z0[i] + dt * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                             b5 * k5[i] + b6 * k6[i]);
      k7 = eval(y);
    } catch (const DomainExit&) {
      // shrink toward the boundary; the driver records the exit when even
      // tiny steps fail
      dt *= 0.25;
      continue;
    }

    double err = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double ei = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                              e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = 1.0 + std::abs(z0[i]);
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / 6.0);

    if (err <= tol) {
      // PI controller: proportional exponent 0.7/5, integral 0.4/5
      const double safe_err = std::max(err, 1e-300);
      double grow;
      if (err_prev > 0.0)
        grow = 0.9 * std::pow(tol / safe_err, 0.14) *
               std::pow(err_prev / tol, 0.08);
      else
        grow = 0.9 * std::pow(tol / safe_err, 0.2);
      const double dt_next = dt * std::clamp(grow, 0.2, 5.0);
      return {PhasePoint::from_state(y), dt, dt_next, err};
    }
    dt *= std::max(0.2, 0.9 * std::pow(tol / err, 0.2));
  }
  throw StepUnderflow("step_rk_adaptive: controller failed to accept a step");
}

/// Implicit-midpoint integration with conserved-quantity drift monitoring
/// every sample_every steps. Leaving the window is an event, not an error:
/// the partial trajectory is returned with the event recorded.
inline Trajectory integrate(const Model& mdl, const PhasePoint& z0,
                            double t_end, const IntegrateOptions& opt = {}) {
  mdl.require_point(z0);
  Trajectory traj;
  const double h0 = hamiltonian(mdl, z0);
  const double x10 = eval_x1(mdl, z0);
  const double x20 = eval_x2(mdl, z0);
  double cx0 = std::numeric_limits<double>::quiet_NaN();
  bool with_cx = false;
  if (opt.monitor_calX && mdl.prm.ell == 0.0) {
    try {
      cx0 = eval_calX(mdl, z0).value;
      with_cx = true;
    } catch (const NonpositiveS&) {
    }
  }
  auto rel = [](double now, double ref) {
    return std::abs(now - ref) / std::max(std::abs(ref), 1e-300);
  };
  auto log_sample = [&](double t, const PhasePoint& p) {
    traj.times.push_back(t);
    traj.states.push_back(p);
    std::array<double, 4> d{rel(hamiltonian(mdl, p), h0),
                            rel(eval_x1(mdl, p), x10),
                            rel(eval_x2(mdl, p), x20),
                            std::numeric_limits<double>::quiet_NaN()};
    if (with_cx) d[3] = rel(eval_calX(mdl, p).value, cx0);
    traj.drift_log.push_back(d);
  };

  log_sample(0.0, z0);
  const auto n_steps = static_cast<std::int64_t>(std::llround(t_end / opt.dt));
  PhasePoint cur = z0;
  for (std::int64_t s = 1; s <= n_steps; ++s) {
    try {
      cur = step_implicit_midpoint(mdl, cur, opt.dt, opt.tol_newton,
                                   &traj.stats);
      if (!mdl.r_in_window(cur.r) || !mdl.theta_in_window(cur.theta))
        throw DomainExit("integrate: trajectory left the window");
    } catch (const DomainExit& e) {
      traj.domain_event = DomainEvent{s * opt.dt, e.what()};
      break;
    }
    traj.stats.accepted += 1;
    if (s % opt.sample_every == 0 || s == n_steps)
      log_sample(s * opt.dt, cur);
  }
  return traj;
}

namespace detail {

// Weighted phase-space distance used by the recurrence scan: Euclidean in
// (r, theta, p_r, p_theta) scaled by the initial-condition magnitudes plus
// angular distance for phi modulo the angular period.
inline double recurrence_distance(const PhasePoint& z, const PhasePoint& ref,
                                  double phi_period) {
  auto scale = [](double x) { return std::max(1.0, std::abs(x)); };
  const double dr = (z.r - ref.r) / scale(ref.r);
  const double dth = (z.theta - ref.theta) / scale(ref.theta);
  const double dpr = (z.p_r - ref.p_r) / scale(ref.p_r);
  const double dpt = (z.p_theta - ref.p_theta) / scale(ref.p_theta);
  double dphi = std::fmod(z.phi - ref.phi, phi_period);
  if (dphi > 0.5 * phi_period) dphi -= phi_period;
  if (dphi < -0.5 * phi_period) dphi += phi_period;
  return std::sqrt(dr * dr + dth * dth + dpr * dpr + dpt * dpt +
                   dphi * dphi);
}

}  // namespace detail

/// Integrates and scans for recurrence to the initial state after t_guard
/// (t_guard < 0: five radial periods estimated from p_r sign changes).
inline ClosureReport closure_analysis(const Model& mdl, const PhasePoint& z0,
                                      double t_end, double eps_close,
                                      double t_guard,
                                      const IntegrateOptions& opt = {}) {
  IntegrateOptions o = opt;
  o.sample_every = 1;
  o.monitor_calX = false;
  const Trajectory traj = integrate(mdl, z0, t_end, o);

  ClosureReport rep;
  rep.bounded = !traj.domain_event.has_value();

  if (t_guard < 0.0) {
    // time of the second same-direction p_r sign change ~ one radial period
    std::vector<double> flips;
    for (std::size_t i = 1; i < traj.states.size() && flips.size() < 3; ++i)
      if ((traj.states[i].p_r > 0.0) != (traj.states[i - 1].p_r > 0.0))
        flips.push_back(traj.times[i]);
    const double period =
        flips.size() >= 3 ? flips[2] - flips[0] : t_end / 10.0;
    t_guard = 5.0 * period;
  }
  rep.t_guard_used = t_guard;

  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    if (traj.times[i] <= t_guard) continue;
    dmin = std::min(dmin, detail::recurrence_distance(traj.states[i], z0,
                                                      mdl.phi_period));
    rep.epochs_scanned += 1;
  }
  rep.min_recurrence_distance = dmin;
  rep.closes = rep.bounded && dmin < eps_close;
  return rep;
}

}  // namespace monopole
