#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "monopole/common.hpp"
#include "monopole/dual.hpp"
#include "monopole/linalg.hpp"
#include "monopole/model.hpp"

namespace monopole {

/// The conserved triple (H, X2, p_phi) at one phase point plus the
/// recurring combination S = X2 + k^2 m^2 that sits under every square
/// root of the higher-order construction. Gauge ell = 0 only.
struct ConservedSet {
  double E0;  // Hamiltonian value
  double E1;  // X2 value
  double p0;  // p_phi
  double S;   // E1 + k^2 m^2
};

enum class ParityBranch { RealPart, ImagPart };

/// The two complex factors of the higher-order integral and their product,
/// with the branch bookkeeping resolved from the parity of (m1, m2).
struct ComplexFactorization {
  std::complex<double> w_r;
  std::complex<double> w_theta;
  std::complex<double> P;  // w_r^(m2) * w_theta^(m1)
  ParityBranch parity_branch;
  bool sqrtS_division;
};

struct CalXResult {
  double value;
  double offbranch_residual;
};

template <class T>
T x1_at(const Model& mdl, const State6<T>& z) {
  // p_phi^A + k cos(theta); the gauge terms cancel to p_phi + ell
  return z[5] + mdl.prm.ell;
}

template <class T>
T x2_at(const Model& mdl, const State6<T>& z) {
  const T theta = z[1];
  const T s = sin(theta);
  const T pA = z[5] + vector_potential_at(mdl, theta);
  return z[4] * z[4] +
         mdl.m2 * (pA * pA / (s * s) + 2.0 * w2_at(mdl, theta));
}

inline double eval_x1(const Model& mdl, const PhasePoint& z) {
  return x1_at(mdl, z.state());
}

inline double eval_x2(const Model& mdl, const PhasePoint& z) {
  mdl.require_theta(z.theta);
  return x2_at(mdl, z.state());
}

inline void require_zero_gauge(const Model& mdl) {
  if (mdl.prm.ell != 0.0)
    throw WrongGauge("the separation formulas assume gauge ell = 0");
}

inline ConservedSet conserved_set(const Model& mdl, const PhasePoint& z) {
  require_zero_gauge(mdl);
  mdl.require_point(z);
  const double e1 = x2_at(mdl, z.state());
  return {hamiltonian_at(mdl, z.state()), e1, z.p_phi, e1 + mdl.k2m2};
}

namespace detail {

// The four ingredients of the product form, generic in the scalar type.
// m enters only through m^2 except for the 1/(m r) factor, which uses the
// positive representative m1/m2: the dynamics is even in m and the printed
// product is a conserved quantity only for m > 0.
template <class T>
struct CalXParts {
  T u;   // 2 sqrt(S) p_r
  T v;   // sin(theta) sqrt(S) p_theta
  T q1;  // imaginary part of the radial factor
  T q2;  // imaginary part of the angular factor
  T S;
  T sqrtS;
};

template <class T>
CalXParts<T> calx_parts(const Model& mdl, const State6<T>& z) {
  const auto& p = mdl.prm;
  const T r = z[0], theta = z[1];
  const T e0 = hamiltonian_at(mdl, z);
  const T e1 = x2_at(mdl, z);
  const T p0 = z[5];
  const T S = e1 + mdl.k2m2;
  if (!(value_of(S) > 0.0))
    throw NonpositiveS("S = X2 + k^2 m^2 must be positive");
  const T sqrtS = sqrt(S);
  const T q1 = (2.0 * e1 + mdl.m2 * (r * (p.beta2 - 2.0 * p.alpha1 * e0) +
                                     2.0 * p.k * p.k)) /
               (mdl.m_abs * r);
  const T q2 = mdl.m2 * (2.0 * p.a - 2.0 * p.b - p.k * p0) + cos(theta) * S;
  return {2.0 * sqrtS * z[3], sin(theta) * sqrtS * z[4], q1, q2, S, sqrtS};
}

template <class T>
Complex<T> calx_product(const CalXParts<T>& w, std::int64_t m1,
                        std::int64_t m2) {
  return cpow(Complex<T>{-w.u, w.q1}, m2) * cpow(Complex<T>{w.v, w.q2}, m1);
}

// Parity-selected component of the conjugate difference, scaled by 1/2 so
// both branches share one convention, divided by sqrt(S) for m1 even,
// m2 odd. Generic in the scalar type for bracket differentiation.
template <class T>
T calx_value(const Model& mdl, const State6<T>& z) {
  const auto w = calx_parts(mdl, z);
  const std::int64_t m1 = mdl.m().m1(), m2 = mdl.m().m2();
  const Complex<T> diff =
      calx_product(w, m1, m2) -
      cpow(Complex<T>{w.u, w.q1}, m2) * cpow(Complex<T>{w.v, -w.q2}, m1);
  T value = (m2 % 2 == 1) ? 0.5 * diff.re : 0.5 * diff.im;
  if (m1 % 2 == 0 && m2 % 2 == 1) value = value / w.sqrtS;
  return value;
}

}  // namespace detail

inline ComplexFactorization complex_factorization(const Model& mdl,
                                                  const PhasePoint& z) {
  require_zero_gauge(mdl);
  mdl.require_point(z);
  const auto w = detail::calx_parts(mdl, z.state());
  const std::int64_t m1 = mdl.m().m1(), m2 = mdl.m().m2();
  const auto P = detail::calx_product(w, m1, m2);
  return {{-w.u, w.q1},
          {w.v, w.q2},
          {P.re, P.im},
          m2 % 2 == 1 ? ParityBranch::RealPart : ParityBranch::ImagPart,
          m1 % 2 == 0 && m2 % 2 == 1};
}

/// Evaluates the higher-order integral: both conjugate products as printed,
/// their difference, parity selection, and the conditional sqrt(S)
/// division. The complementary component must vanish; its magnitude is
/// reported as offbranch_residual.
inline CalXResult eval_calX(const Model& mdl, const PhasePoint& z) {
  require_zero_gauge(mdl);
  mdl.require_point(z);
  const auto w = detail::calx_parts(mdl, z.state());
  const std::int64_t m1 = mdl.m().m1(), m2 = mdl.m().m2();
  const Complex<double> diff =
      detail::calx_product(w, m1, m2) -
      cpow(Complex<double>{w.u, w.q1}, m2) *
          cpow(Complex<double>{w.v, -w.q2}, m1);
  const bool real_branch = (m2 % 2 == 1);
  double value = 0.5 * (real_branch ? diff.re : diff.im);
  const double off = std::abs(real_branch ? diff.im : diff.re);
  if (m1 % 2 == 0 && m2 % 2 == 1) value /= w.sqrtS;
  return {value, off};
}

// ---- separation-of-variables objects ----

inline double eval_T1(const Model& mdl, const ConservedSet& cs, double r) {
  mdl.require_r(r);
  const auto& p = mdl.prm;
  const double m2 = mdl.m2;
  const double rad =
      4.0 * p.alpha1 * p.alpha1 * cs.E0 * cs.E0 * m2 +
      8.0 * p.beta1 * cs.E0 * cs.E1 +
      4.0 * cs.E0 * m2 * (2.0 * p.beta1 * p.k * p.k - p.alpha1 * p.beta2) -
      4.0 * p.alpha2 * cs.E1 + m2 * (p.beta2 * p.beta2 -
                                     4.0 * p.alpha2 * p.k * p.k);
  if (!(rad > 0.0))
    throw ComplexDomain("T1: radicand must be positive");
  return (m2 * (r * (p.beta2 - 2.0 * p.alpha1 * cs.E0) + 2.0 * p.k * p.k) +
          2.0 * cs.E1) /
         (mdl.m_val * r * std::sqrt(rad));
}

inline double eval_T2(const Model& mdl, const ConservedSet& cs, double theta) {
  mdl.require_theta(theta);
  const auto& p = mdl.prm;
  const double m2 = mdl.m2;
  const double rad =
      2.0 * m2 * m2 *
          (2.0 * p.a * p.a - 2.0 * p.a * (2.0 * p.b + p.k * (p.k + cs.p0)) +
           2.0 * p.b * p.b - 2.0 * p.b * p.k * (p.k - cs.p0) -
           p.c * p.k * p.k) -
      cs.E1 * m2 * (4.0 * p.a + 4.0 * p.b + 2.0 * p.c - p.k * p.k +
                    cs.p0 * cs.p0) +
      cs.E1 * cs.E1;
  if (!(rad > 0.0))
    throw ComplexDomain("T2: radicand must be positive");
  return (std::cos(theta) * cs.S -
          m2 * (-2.0 * p.a + 2.0 * p.b + p.k * cs.p0)) /
         std::sqrt(rad);
}

inline double eval_M(const Model& mdl, const ConservedSet& cs, double r) {
  if (!(cs.S > 0.0)) throw ComplexDomain("M: S must be positive");
  const double t1 = eval_T1(mdl, cs, r);
  if (std::abs(t1) > 1.0) throw ComplexDomain("M: |T1| > 1");
  return -std::acos(t1) / (mdl.m_val * std::sqrt(cs.S));
}

inline double eval_N(const Model& mdl, const ConservedSet& cs, double theta) {
  if (!(cs.S > 0.0)) throw ComplexDomain("N: S must be positive");
  const double t2 = eval_T2(mdl, cs, theta);
  if (std::abs(t2) > 1.0) throw ComplexDomain("N: |T2| > 1");
  return std::asin(t2) / std::sqrt(cs.S);
}

/// The globally defined combination 2i exp(i pi m2 / 2)
/// sin(m1 sqrt(S) (N - M)); constant along admissible trajectory segments.
inline std::complex<double> eval_I(const Model& mdl, const PhasePoint& z) {
  const auto cs = conserved_set(mdl, z);
  const double mv = eval_M(mdl, cs, z.r);
  const double nv = eval_N(mdl, cs, z.theta);
  const double m1 = static_cast<double>(mdl.m().m1());
  const double m2 = static_cast<double>(mdl.m().m2());
  const std::complex<double> phase =
      std::exp(std::complex<double>(0.0, 0.5 * std::numbers::pi * m2));
  return 2.0 * std::complex<double>(0.0, 1.0) * phase *
         std::sin(m1 * std::sqrt(cs.S) * (nv - mv));
}

// ---- observables, brackets, independence ----

/// A phase-space observable differentiable by dual numbers.
using Observable = std::function<D1(const State6<D1>&)>;

inline Observable observable_hamiltonian(const Model& mdl) {
  return [&mdl](const State6<D1>& z) { return hamiltonian_at(mdl, z); };
}
inline Observable observable_x1(const Model& mdl) {
  return [&mdl](const State6<D1>& z) { return x1_at(mdl, z); };
}
inline Observable observable_x2(const Model& mdl) {
  return [&mdl](const State6<D1>& z) { return x2_at(mdl, z); };
}
inline Observable observable_calX(const Model& mdl) {
  require_zero_gauge(mdl);
  return [&mdl](const State6<D1>& z) { return detail::calx_value(mdl, z); };
}

inline std::array<double, 6> observable_gradient(const Observable& f,
                                                 const PhasePoint& z) {
  return gradient6(f, z.state());
}

/// Canonical bracket sum_q (df/dq dg/dp_q - df/dp_q dg/dq) from dual-number
/// gradients of black-box observables.
inline double poisson_bracket(const Observable& f, const Observable& g,
                              const Model& mdl, const PhasePoint& z) {
  mdl.require_point(z);
  const auto gf = observable_gradient(f, z);
  const auto gg = observable_gradient(g, z);
  double sum = 0.0;
  for (int q = 0; q < 3; ++q)
    sum += gf[q] * gg[q + 3] - gf[q + 3] * gg[q];
  return sum;
}

/// Product of the two gradient norms; the natural scale for bracket
/// tolerances, which otherwise vary over many orders with the integral's
/// polynomial degree.
inline double bracket_scale(const Observable& f, const Observable& g,
                            const PhasePoint& z) {
  return norm2(observable_gradient(f, z)) *
         norm2(observable_gradient(g, z));
}

/// Rank of the Jacobian of the observables w.r.t. the six phase variables.
/// Rows are normalized before the SVD (rank is invariant under nonzero row
/// scaling; raw gradient magnitudes differ by many orders across mixed
/// polynomial degrees).
inline int independence_rank(const Model& mdl, const PhasePoint& z,
                             const std::vector<Observable>& observables,
                             double threshold = 1e-8) {
  mdl.require_point(z);
  std::vector<Vec6> rows;
  rows.reserve(observables.size());
  for (const auto& f : observables) {
    Vec6 g = observable_gradient(f, z);
    const double n = norm2(g);
    if (n > 0.0)
      for (double& x : g) x /= n;
    rows.push_back(g);
  }
  const auto sv = singular_values(rows);
  if (sv.empty() || sv.front() == 0.0) return 0;
  int rank = 0;
  for (double s : sv)
    if (s > threshold * sv.front()) ++rank;
  return rank;
}

}  // namespace monopole
