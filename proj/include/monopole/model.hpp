#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "monopole/common.hpp"
#include "monopole/dual.hpp"

namespace monopole {

/// All physical and geometric constants of the model: metric profile
/// (alpha1, beta1) and deformation m, monopole strength k with gauge
/// constant ell, radial potential (alpha2, beta2) and angular potential
/// (a, b, c), angular period 2*pi/nu.
struct ModelParams {
  RationalM m{1, 1};
  int delta = +1;  // branch of the conformal map, in {-1, +1}
  double nu = 1.0;
  double alpha1 = 0.0;
  double beta1 = 1.0;
  double alpha2 = 0.0;
  double beta2 = 0.0;
  double k = 1.0;
  double ell = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Radial/polar sampling box kept away from the r -> 0 and sin(theta) -> 0
/// coordinate singularities.
struct DomainWindow {
  double r_min = 0.5;
  double r_max = 3.0;
  double theta_margin = 0.3;
};

/// One point of phase space; the constructor rejects the coordinate
/// boundary (r <= 0, theta outside the open interval (0, pi)).
struct PhasePoint {
  double r, theta, phi, p_r, p_theta, p_phi;

  PhasePoint(double r_, double theta_, double phi_, double pr, double ptheta,
             double pphi)
      : r(r_), theta(theta_), phi(phi_), p_r(pr), p_theta(ptheta), p_phi(pphi) {
    if (!(r > 0.0))
      throw OutOfDomain("PhasePoint: r must be > 0, got " + std::to_string(r_));
    if (!(theta > 0.0 && theta < std::numbers::pi))
      throw OutOfDomain("PhasePoint: theta must lie in (0, pi), got " +
                        std::to_string(theta_));
  }

  State6<double> state() const { return {r, theta, phi, p_r, p_theta, p_phi}; }
  static PhasePoint from_state(const State6<double>& z) {
    return {z[0], z[1], z[2], z[3], z[4], z[5]};
  }
};

/// Parameters validated against a window, with derived constants cached.
class Model {
 public:
  ModelParams prm;
  DomainWindow win;
  double m_val;       // signed m as a double
  double m_abs;       // positive representative m1/m2
  double m2;          // m^2
  double k2m2;        // k^2 m^2
  double phi_period;  // 2*pi/nu

  const RationalM& m() const { return prm.m; }

  bool r_in_window(double r) const { return r >= win.r_min && r <= win.r_max; }
  bool theta_in_window(double th) const {
    return th >= win.theta_margin && th <= std::numbers::pi - win.theta_margin;
  }
  void require_r(double r) const {
    if (!r_in_window(r))
      throw OutOfDomain("r = " + std::to_string(r) + " outside window [" +
                        std::to_string(win.r_min) + ", " +
                        std::to_string(win.r_max) + "]");
  }
  void require_theta(double th) const {
    if (!theta_in_window(th))
      throw OutOfDomain("theta = " + std::to_string(th) +
                        " outside polar window");
  }
  void require_point(const PhasePoint& z) const {
    require_r(z.r);
    require_theta(z.theta);
  }

 private:
  friend Model validate_params(const ModelParams&, const DomainWindow&);
  Model(const ModelParams& p, const DomainWindow& w)
      : prm(p),
        win(w),
        m_val(p.m.value()),
        m_abs(p.m.abs_value()),
        m2(m_val * m_val),
        k2m2(p.k * p.k * m2),
        phi_period(2.0 * std::numbers::pi / p.nu) {}
};

/// Checks every ModelParams invariant plus metric positivity on the window.
inline Model validate_params(const ModelParams& p, const DomainWindow& w) {
  if (p.k == 0.0) throw ZeroMonopole("k must be nonzero");
  if (!(p.nu > 0.0)) throw DegenerateMetric("nu must be positive");
  if (p.delta != 1 && p.delta != -1)
    throw DegenerateMetric("delta must be +1 or -1");
  if (p.alpha1 == 0.0 && p.beta1 == 0.0)
    throw DegenerateMetric("alpha1 and beta1 cannot both vanish");
  if (!(w.r_min > 0.0 && w.r_min < w.r_max))
    throw OutOfDomain("window: need 0 < r_min < r_max");
  if (!(w.theta_margin > 0.0 && w.theta_margin < std::numbers::pi / 2))
    throw OutOfDomain("window: need 0 < theta_margin < pi/2");
  // alpha1 + beta1 r is affine, so positivity at both ends covers the window
  if (!(p.alpha1 + p.beta1 * w.r_min > 0.0 &&
        p.alpha1 + p.beta1 * w.r_max > 0.0))
    throw DegenerateMetric("alpha1 + beta1 * r must stay positive on window");
  return Model(p, w);
}

// ---- scalar-type-generic evaluators (T = double or a Dual nest) ----

template <class T>
T w1_at(const Model& mdl, const T& r) {
  const auto& p = mdl.prm;
  return (p.alpha2 * r * r + p.beta2 * r + p.k * p.k) /
         (2.0 * r * (p.alpha1 + p.beta1 * r));
}

template <class T>
T w2_at(const Model& mdl, const T& theta) {
  const auto& p = mdl.prm;
  const T ch = cos(theta / 2.0), sh = sin(theta / 2.0), s = sin(theta);
  return (4.0 * (p.a * ch * ch + p.b * sh * sh) + p.c) / (s * s);
}

template <class T>
T vector_potential_at(const Model& mdl, const T& theta) {
  return mdl.prm.ell - mdl.prm.k * cos(theta);
}

template <class T>
T hamiltonian_at(const Model& mdl, const State6<T>& z) {
  const auto& p = mdl.prm;
  const T r = z[0], theta = z[1];
  const T s = sin(theta);
  const T pA = z[5] + vector_potential_at(mdl, theta);
  const T g = p.alpha1 + p.beta1 * r;
  const T kin = r / (2.0 * g) *
                (z[3] * z[3] + z[4] * z[4] / (mdl.m2 * r * r) +
                 pA * pA / (r * r * s * s));
  return kin + w1_at(mdl, r) + w2_at(mdl, theta) / (r * g);
}

// ---- public operations ----

inline double eval_w1(const Model& mdl, double r) {
  mdl.require_r(r);
  return w1_at(mdl, r);
}

inline double eval_w2(const Model& mdl, double theta) {
  mdl.require_theta(theta);
  return w2_at(mdl, theta);
}

inline double vector_potential(const Model& mdl, double theta) {
  return vector_potential_at(mdl, theta);
}

/// |d A_phi / d theta - k sin(theta)| with a central difference: the gauge
/// potential must reproduce the monopole field F_{theta phi} = k sin(theta).
inline double magnetic_field_check(const Model& mdl, double theta,
                                   double step) {
  const double dA = (vector_potential_at(mdl, theta + step) -
                     vector_potential_at(mdl, theta - step)) /
                    (2.0 * step);
  return std::abs(dA - mdl.prm.k * std::sin(theta));
}

inline double hamiltonian(const Model& mdl, const PhasePoint& z) {
  mdl.require_point(z);
  return hamiltonian_at(mdl, z.state());
}

/// Exact partial derivatives of H in the order
/// (dH/dr, dH/dtheta, dH/dphi, dH/dp_r, dH/dp_theta, dH/dp_phi).
inline std::array<double, 6> hamiltonian_gradient(const Model& mdl,
                                                  const PhasePoint& z) {
  mdl.require_point(z);
  return gradient6(
      [&mdl](const State6<D1>& s) { return hamiltonian_at(mdl, s); },
      z.state());
}

inline double scalar_curvature_closed(const Model& mdl, double r) {
  mdl.require_r(r);
  const auto& p = mdl.prm;
  const double g = p.alpha1 + p.beta1 * r;
  return 2.0 * (1.0 - mdl.m2) / (mdl.m2 * g * r) +
         3.0 * p.alpha1 * p.alpha1 / (2.0 * g * g * g * r);
}

namespace detail {

// Diagonal metric components of the 3D line element at (r, theta).
inline std::array<double, 3> metric_diag(const Model& mdl, double r,
                                         double theta) {
  const auto& p = mdl.prm;
  const double f = (p.alpha1 + p.beta1 * r) / r;
  const double s = std::sin(theta);
  return {f, f * r * r * mdl.m2, f * r * r * s * s};
}

// Christoffel symbols Gamma^a_{bc} from central differences of the metric.
inline std::array<std::array<std::array<double, 3>, 3>, 3> christoffel_fd(
    const Model& mdl, double r, double theta, double h) {
  auto dmetric = [&](int dir) {
    // derivative of the diagonal metric w.r.t. coordinate dir (0:r, 1:theta)
    std::array<double, 3> d{};
    if (dir == 2) return d;  // phi-independent
    const double rp = dir == 0 ? r + h : r, rm = dir == 0 ? r - h : r;
    const double tp = dir == 1 ? theta + h : theta,
                 tm = dir == 1 ? theta - h : theta;
    const auto gp = metric_diag(mdl, rp, tp), gm = metric_diag(mdl, rm, tm);
    for (int i = 0; i < 3; ++i) d[i] = (gp[i] - gm[i]) / (2.0 * h);
    return d;
  };
  const auto g = metric_diag(mdl, r, theta);
  const std::array<std::array<double, 3>, 3> dg = {dmetric(0), dmetric(1),
                                                   dmetric(2)};
  std::array<std::array<std::array<double, 3>, 3>, 3> gamma{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        // diagonal metric: only the d = a term of the inverse survives
        double s = 0.0;
        if (a == b) s += dg[c][a];
        if (a == c) s += dg[b][a];
        if (b == c) s -= dg[a][b];
        gamma[a][b][c] = 0.5 * s / g[a];
      }
  return gamma;
}

}  // namespace detail

/// Ricci scalar of the 3D metric assembled from finite differences of the
/// metric components (independent of the closed form above). theta defaults
/// to the equator; the result is theta-independent up to FD error.
inline double scalar_curvature_numeric(const Model& mdl, double r, double step,
                                       double theta = std::numbers::pi / 2) {
  mdl.require_r(r);
  const double h = step;
  const auto g = detail::metric_diag(mdl, r, theta);
  const auto gamma = detail::christoffel_fd(mdl, r, theta, h);

  // d Gamma / d x_c by the same central-difference step
  auto dgamma = [&](int dir) {
    std::array<std::array<std::array<double, 3>, 3>, 3> d{};
    if (dir == 2) return d;
    const double rp = dir == 0 ? r + h : r, rm = dir == 0 ? r - h : r;
    const double tp = dir == 1 ? theta + h : theta,
                 tm = dir == 1 ? theta - h : theta;
    const auto gp = detail::christoffel_fd(mdl, rp, tp, h);
    const auto gm = detail::christoffel_fd(mdl, rm, tm, h);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          d[a][b][c] = (gp[a][b][c] - gm[a][b][c]) / (2.0 * h);
    return d;
  };
  const std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3> dG =
      {dgamma(0), dgamma(1), dgamma(2)};

  double scal = 0.0;
  for (int b = 0; b < 3; ++b) {
    // R_bb = d_a Gamma^a_bb - d_b Gamma^a_ba + Gamma^a_ad Gamma^d_bb
    //        - Gamma^a_bd Gamma^d_ab
    double ric = 0.0;
    for (int a = 0; a < 3; ++a) {
      ric += dG[a][a][b][b] - dG[b][a][b][a];
      for (int d = 0; d < 3; ++d)
        ric += gamma[a][a][d] * gamma[d][b][b] -
               gamma[a][b][d] * gamma[d][a][b];
    }
    scal += ric / g[b];
  }
  return scal;
}

}  // namespace monopole
