#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "monopole/common.hpp"
#include "monopole/linalg.hpp"
#include "monopole/model.hpp"

namespace monopole {

/// A point of the conformally flat chart (R, Theta, Phi) with momenta.
struct TaubNutPoint {
  double R, Theta, Phi, P_R, P_Theta, P_Phi;

  TaubNutPoint(double R_, double Theta_, double Phi_, double PR, double PTheta,
               double PPhi)
      : R(R_), Theta(Theta_), Phi(Phi_), P_R(PR), P_Theta(PTheta),
        P_Phi(PPhi) {
    if (!(R > 0.0)) throw OutOfDomain("TaubNutPoint: R must be > 0");
    if (!(Theta > 0.0 && Theta < std::numbers::pi))
      throw OutOfDomain("TaubNutPoint: Theta must lie in (0, pi)");
  }
};

/// 2D reduction parameters: the polar-deformation mu = 1/(2m), the two
/// trigonometric strengths, and the radial profile
/// W0(r) = (alpha2 r^2 + beta2 r) / (2 r (alpha1 + beta1 r)).
struct PWParams {
  double mu;
  double alpha_pw;
  double beta_pw;
  double w0_alpha1, w0_beta1;  // metric profile entering W0
  double w0_alpha2, w0_beta2;  // radial potential minus the k^2 piece

  double w0(double r) const {
    return (w0_alpha2 * r * r + w0_beta2 * r) /
           (2.0 * r * (w0_alpha1 + w0_beta1 * r));
  }
};

/// The point map r = R^(m delta), theta = Theta, phi = m delta Phi extended
/// canonically to momenta.
inline TaubNutPoint to_taubnut(const Model& mdl, const PhasePoint& z) {
  const double md = mdl.m_val * mdl.prm.delta;
  const double R = std::pow(z.r, 1.0 / md);
  return {R,
          z.theta,
          z.phi / md,
          md * std::pow(R, md - 1.0) * z.p_r,
          z.p_theta,
          md * z.p_phi};
}

inline PhasePoint from_taubnut(const Model& mdl, const TaubNutPoint& Z) {
  const double md = mdl.m_val * mdl.prm.delta;
  return {std::pow(Z.R, md),
          Z.Theta,
          md * Z.Phi,
          std::pow(Z.R, 1.0 - md) * Z.P_R / md,
          Z.P_Theta,
          Z.P_Phi / md};
}

namespace detail {

inline double taubnut_prefactor(const Model& mdl, double R) {
  const auto& p = mdl.prm;
  const double md = mdl.m_val * p.delta;
  return std::pow(R, 2.0 - md) /
         (2.0 * mdl.m2 * (p.alpha1 + p.beta1 * std::pow(R, md)));
}

inline double taubnut_kin_bracket(const Model& mdl, const TaubNutPoint& Z) {
  const auto& p = mdl.prm;
  const double md = mdl.m_val * p.delta;
  const double s = std::sin(Z.Theta);
  const double APhi = md * (p.ell - p.k * std::cos(Z.Theta));
  const double pA = Z.P_Phi + APhi;
  return Z.P_R * Z.P_R + Z.P_Theta * Z.P_Theta / (Z.R * Z.R) +
         pA * pA / (Z.R * Z.R * s * s);
}

inline double taubnut_rad_bracket(const Model& mdl, const TaubNutPoint& Z) {
  const auto& p = mdl.prm;
  const double md = mdl.m_val * p.delta;
  const double Rmd = std::pow(Z.R, md);
  return (p.alpha2 * Rmd * Rmd + p.beta2 * Rmd + p.k * p.k) / (Z.R * Z.R);
}

inline double taubnut_ang_bracket(const Model& mdl, const TaubNutPoint& Z) {
  const auto& p = mdl.prm;
  const double ch = std::cos(Z.Theta / 2), sh = std::sin(Z.Theta / 2);
  const double s = std::sin(Z.Theta);
  return (4.0 * (p.a * ch * ch + p.b * sh * sh) + p.c) / (Z.R * Z.R * s * s);
}

}  // namespace detail

/// Kinetic part of the transformed Hamiltonian; agrees with the kinetic
/// part of H composed with from_taubnut identically (gauge included, with
/// A_Phi = m delta A_phi).
inline double taubnut_kinetic(const Model& mdl, const TaubNutPoint& Z) {
  return detail::taubnut_prefactor(mdl, Z.R) * detail::taubnut_kin_bracket(mdl, Z);
}

/// Kinetic part of H on the original chart, for the equality check.
inline double hamiltonian_kinetic(const Model& mdl, const PhasePoint& z) {
  const auto& p = mdl.prm;
  const double s = std::sin(z.theta);
  const double pA = z.p_phi + vector_potential(mdl, z.theta);
  return z.r / (2.0 * (p.alpha1 + p.beta1 * z.r)) *
         (z.p_r * z.p_r + z.p_theta * z.p_theta / (mdl.m2 * z.r * z.r) +
          pA * pA / (z.r * z.r * s * s));
}

/// The transformed Hamiltonian evaluated exactly as printed (kinetic and
/// potential terms all inside one conformal prefactor). Requires the
/// angular-period convention nu = 1/(m delta).
inline double taubnut_hamiltonian(const Model& mdl, const TaubNutPoint& Z) {
  const double md = mdl.m_val * mdl.prm.delta;
  if (!(md > 0.0) || std::abs(mdl.prm.nu * md - 1.0) > 1e-12)
    throw ConventionError(
        "taubnut_hamiltonian requires nu = 1/(m delta) with m delta > 0");
  return detail::taubnut_prefactor(mdl, Z.R) *
         (detail::taubnut_kin_bracket(mdl, Z) +
          detail::taubnut_rad_bracket(mdl, Z) +
          detail::taubnut_ang_bracket(mdl, Z));
}

/// Open-question instrumentation: pointwise ratio of the potential terms of
/// H (direct) to the corresponding terms of the transformed Hamiltonian.
/// Measured: m^2 on the radial block and 2 m^2 on the angular block.
struct PotentialDiscrepancy {
  double ratio_radial;
  double ratio_angular;
};

inline PotentialDiscrepancy potential_discrepancy(const Model& mdl,
                                                  const PhasePoint& z) {
  const auto& p = mdl.prm;
  const TaubNutPoint Z = to_taubnut(mdl, z);
  const double pref = detail::taubnut_prefactor(mdl, Z.R);
  const double direct_rad = w1_at(mdl, z.r);
  const double direct_ang =
      w2_at(mdl, z.theta) / (z.r * (p.alpha1 + p.beta1 * z.r));
  return {direct_rad / (pref * detail::taubnut_rad_bracket(mdl, Z)),
          direct_ang / (pref * detail::taubnut_ang_bracket(mdl, Z))};
}

/// Parameter map of the 2D reduction at fixed p_phi = p0 (gauge ell = k).
inline PWParams reduce_2d(const Model& mdl, double p0) {
  const auto& p = mdl.prm;
  if (p.ell != p.k)
    throw WrongGauge("reduce_2d: the reduction uses the gauge ell = k");
  return {1.0 / (2.0 * mdl.m_val),
          (8.0 * p.a + 2.0 * p.c + p0 * p0) / 8.0,
          (8.0 * p.b + 2.0 * p.c + (p0 + 2.0 * p.k) * (p0 + 2.0 * p.k)) / 8.0,
          p.alpha1,
          p.beta1,
          p.alpha2,
          p.beta2};
}

/// Evaluates the reduced 2D Hamiltonian on the scaled variables
/// (theta_pw = m theta, p_pw = p_theta / m) and compares with H at
/// p_phi = p0. The scaling is canonical, so the residual is round-off.
inline double reduced_hamiltonian_check(const Model& mdl, const PhasePoint& z) {
  const auto& p = mdl.prm;
  const PWParams pw = reduce_2d(mdl, z.p_phi);
  const double h = hamiltonian(mdl, z);
  const double theta_pw = mdl.m_val * z.theta;
  const double p_pw = z.p_theta / mdl.m_val;
  const double g = p.alpha1 + p.beta1 * z.r;
  const double smu = std::sin(pw.mu * theta_pw), cmu = std::cos(pw.mu * theta_pw);
  const double h2d =
      z.r / (2.0 * g) * (z.p_r * z.p_r + p_pw * p_pw / (z.r * z.r)) +
      (pw.alpha_pw / (smu * smu) + pw.beta_pw / (cmu * cmu)) / (z.r * g) +
      pw.w0(z.r);
  return std::abs(h - h2d) / std::max(1.0, std::abs(h));
}

/// Residual of the symplectic condition J^T Omega J = Omega for the
/// finite-difference Jacobian of the chart map at z (max-abs entry).
inline double symplectic_residual(const Model& mdl, const PhasePoint& z,
                                  double step = 1e-6) {
  auto map = [&](const State6<double>& s) -> State6<double> {
    const TaubNutPoint Z =
        to_taubnut(mdl, PhasePoint(s[0], s[1], s[2], s[3], s[4], s[5]));
    return {Z.R, Z.Theta, Z.Phi, Z.P_R, Z.P_Theta, Z.P_Phi};
  };
  const State6<double> z0 = z.state();
  Mat6 jac{};
  for (int j = 0; j < 6; ++j) {
    State6<double> zp = z0, zm = z0;
    zp[j] += step;
    zm[j] -= step;
    const auto fp = map(zp), fm = map(zm);
    for (int i = 0; i < 6; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * step);
  }
  // Omega in the (q1,q2,q3,p1,p2,p3) layout
  auto omega = [](int i, int j) -> double {
    if (i < 3 && j == i + 3) return 1.0;
    if (i >= 3 && j == i - 3) return -1.0;
    return 0.0;
  };
  double worst = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      double s = 0.0;
      for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l) s += jac[k][i] * omega(k, l) * jac[l][j];
      worst = std::max(worst, std::abs(s - omega(i, j)));
    }
  return worst;
}

}  // namespace monopole
