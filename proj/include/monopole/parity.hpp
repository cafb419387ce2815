#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "monopole/common.hpp"
#include "monopole/integrals.hpp"
#include "monopole/model.hpp"

namespace monopole {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// One term of the exact expansion of the higher-order integral over the
/// abstract symbols u = 2 sqrt(S) p_r, v = sin(theta) sqrt(S) p_theta and
/// the imaginary parts Q1, Q2 of the two complex factors. exp_halfS counts
/// the sqrt(S) factors carried inside u^exp_u v^exp_v, so "integer powers
/// of S" is the predicate exp_halfS % 2 == 0.
struct Monomial {
  BigRational coeff;
  int exp_u = 0;
  int exp_v = 0;
  int exp_q1 = 0;
  int exp_q2 = 0;
  int exp_halfS = 0;
};

struct ParityReport {
  std::int64_t m1 = 0;
  std::int64_t m2 = 0;
  ParityBranch branch = ParityBranch::RealPart;
  bool divided_by_sqrtS = false;
  bool all_integer_S_powers = false;
  bool uniform_halfS_parity = false;  // before any division
  int min_exp_halfS = 0;              // after division, observed minimum
  std::size_t monomial_count = 0;
  BigRational max_abs_coeff = 0;
};

namespace detail {

inline BigInt binomial(std::int64_t n, std::int64_t k) {
  BigInt num = 1, den = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return num / den;
}

}  // namespace detail

/// Double-binomial expansion of the conjugate-product difference with the
/// i-powers resolved into the parity-selected component (real part for m2
/// odd, imaginary part for m2 even), in the same x1/2 value convention as
/// the numeric evaluator. Surviving terms have m2 - k + j odd; their
/// coefficients are +-C(m2,k) C(m1,j) exactly.
inline std::vector<Monomial> expand(std::int64_t m1, std::int64_t m2) {
  if (m1 < 1 || m2 < 1 || std::gcd(m1, m2) != 1)
    throw NotCoprime("expand: need m1, m2 >= 1 with gcd(m1, m2) = 1");
  std::vector<Monomial> out;
  for (std::int64_t k = 0; k <= m2; ++k) {
    for (std::int64_t j = 0; j <= m1; ++j) {
      // bracket = (-1)^(m2-k) - (-1)^j, nonzero iff m2 - k + j is odd
      if ((m2 - k + j) % 2 == 0) continue;
      const int bracket_half = ((m2 - k) % 2 == 0) ? 1 : -1;  // bracket / 2
      int ipow_sign;  // i^(k+j) collapsed onto the selected branch
      if (m2 % 2 == 1) {
        // k + j is even here; i^(k+j) = (-1)^((k+j)/2)
        ipow_sign = ((k + j) / 2 % 2 == 0) ? 1 : -1;
      } else {
        // k + j odd; i^(k+j) = i * (-1)^((k+j-1)/2), and the selected
        // component is the imaginary part, so drop the leading i
        ipow_sign = ((k + j - 1) / 2 % 2 == 0) ? 1 : -1;
      }
      Monomial mo;
      mo.coeff = BigRational(detail::binomial(m2, k) * detail::binomial(m1, j) *
                             (bracket_half * ipow_sign));
      mo.exp_u = static_cast<int>(m2 - k);
      mo.exp_v = static_cast<int>(m1 - j);
      mo.exp_q1 = static_cast<int>(k);
      mo.exp_q2 = static_cast<int>(j);
      mo.exp_halfS = mo.exp_u + mo.exp_v;
      out.push_back(std::move(mo));
    }
  }
  // graded lexicographic in (exp_u, exp_v, exp_q1, exp_q2)
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    const int da = a.exp_u + a.exp_v + a.exp_q1 + a.exp_q2;
    const int db = b.exp_u + b.exp_v + b.exp_q1 + b.exp_q2;
    if (da != db) return da > db;
    const auto ka = std::array<int, 4>{a.exp_u, a.exp_v, a.exp_q1, a.exp_q2};
    const auto kb = std::array<int, 4>{b.exp_u, b.exp_v, b.exp_q1, b.exp_q2};
    return ka > kb;
  });
  return out;
}

/// Certifies the parity theorem for one coprime pair: after branch
/// selection (and sqrt(S) division when m1 is even and m2 odd) every
/// monomial carries an integer power of S.
inline ParityReport parity_certify(std::int64_t m1, std::int64_t m2) {
  auto mono = expand(m1, m2);
  ParityReport rep;
  rep.m1 = m1;
  rep.m2 = m2;
  rep.branch = m2 % 2 == 1 ? ParityBranch::RealPart : ParityBranch::ImagPart;
  rep.divided_by_sqrtS = (m1 % 2 == 0 && m2 % 2 == 1);
  rep.monomial_count = mono.size();

  rep.uniform_halfS_parity = true;
  if (!mono.empty()) {
    const int par = mono.front().exp_halfS % 2;
    for (const auto& mo : mono)
      if (mo.exp_halfS % 2 != par) rep.uniform_halfS_parity = false;
  }
  if (rep.divided_by_sqrtS)
    for (auto& mo : mono) mo.exp_halfS -= 1;

  rep.all_integer_S_powers = true;
  rep.min_exp_halfS = mono.empty() ? 0 : mono.front().exp_halfS;
  for (const auto& mo : mono) {
    if (mo.exp_halfS % 2 != 0 || mo.exp_halfS < 0)
      rep.all_integer_S_powers = false;
    rep.min_exp_halfS = std::min(rep.min_exp_halfS, mo.exp_halfS);
    const BigRational mag = mo.coeff < 0 ? BigRational(-mo.coeff) : mo.coeff;
    rep.max_abs_coeff = std::max(rep.max_abs_coeff, mag);
  }
  return rep;
}

/// Evaluates the certified monomial list at a concrete phase point and
/// compares against the numeric evaluator: two independent code paths for
/// the same quantity. Returns |symbolic - numeric| / max(1, |numeric|).
inline double numeric_consistency(const Model& mdl, const PhasePoint& z) {
  const std::int64_t m1 = mdl.m().m1(), m2 = mdl.m().m2();
  auto mono = expand(m1, m2);
  const bool divide = (m1 % 2 == 0 && m2 % 2 == 1);
  if (divide)
    for (auto& mo : mono) mo.exp_halfS -= 1;

  const auto w = detail::calx_parts(mdl, z.state());
  const double ubase = 2.0 * z.p_r;                    // u / sqrt(S)
  const double vbase = std::sin(z.theta) * z.p_theta;  // v / sqrt(S)
  double sym = 0.0;
  for (const auto& mo : mono) {
    double term = mo.coeff.convert_to<double>();
    for (int i = 0; i < mo.exp_u; ++i) term *= ubase;
    for (int i = 0; i < mo.exp_v; ++i) term *= vbase;
    for (int i = 0; i < mo.exp_q1; ++i) term *= w.q1;
    for (int i = 0; i < mo.exp_q2; ++i) term *= w.q2;
    // exp_halfS is even for every certified pair
    for (int i = 0; i < mo.exp_halfS / 2; ++i) term *= w.S;
    sym += term;
  }
  const double num = eval_calX(mdl, z).value;
  return std::abs(sym - num) / std::max(1.0, std::abs(num));
}

}  // namespace monopole
