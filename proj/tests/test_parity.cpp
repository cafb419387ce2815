#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "monopole/parity.hpp"
#include "monopole/sampling.hpp"

using namespace monopole;
using Catch::Approx;

namespace {

ModelParams generic(std::int64_t m1, std::int64_t m2) {
  ModelParams p;
  p.m = RationalM(m1, m2);
  p.alpha1 = 1.0;
  p.beta1 = 0.5;
  p.alpha2 = 0.3;
  p.beta2 = 0.7;
  p.k = 1.2;
  p.a = 0.1;
  p.b = 0.2;
  p.c = 0.05;
  return p;
}

bool has_monomial(const std::vector<Monomial>& list, long coeff, int eu,
                  int ev, int eq1, int eq2) {
  for (const auto& m : list)
    if (m.exp_u == eu && m.exp_v == ev && m.exp_q1 == eq1 && m.exp_q2 == eq2)
      return m.coeff == coeff;
  return false;
}

}  // namespace

TEST_CASE("expansion of the (1,1) case") {
  // independently confirmed by symbolic expansion: the value convention
  // (selected component / 2) gives exactly {-u v, -Q1 Q2}
  const auto mono = expand(1, 1);
  REQUIRE(mono.size() == 2);
  REQUIRE(has_monomial(mono, -1, 1, 1, 0, 0));
  REQUIRE(has_monomial(mono, -1, 0, 0, 1, 1));
  for (const auto& m : mono) REQUIRE(m.exp_halfS == m.exp_u + m.exp_v);
}

TEST_CASE("expansion of the (1,2) case") {
  // symbolic oracle: +Q2 u^2 - 2 Q1 u v - Q1^2 Q2
  const auto mono = expand(1, 2);
  REQUIRE(mono.size() == 3);
  REQUIRE(has_monomial(mono, 1, 2, 0, 0, 1));
  REQUIRE(has_monomial(mono, -2, 1, 1, 1, 0));
  REQUIRE(has_monomial(mono, -1, 0, 0, 2, 1));
}

TEST_CASE("expansion of the (2,3) case") {
  // symbolic oracle: 2 Q1^3 Q2 v - 3 Q1^2 Q2^2 u + 3 Q1^2 u v^2
  //                  - 6 Q1 Q2 u^2 v + Q2^2 u^3 - u^3 v^2
  const auto mono = expand(2, 3);
  REQUIRE(mono.size() == 6);
  REQUIRE(has_monomial(mono, 2, 0, 1, 3, 1));
  REQUIRE(has_monomial(mono, -3, 1, 0, 2, 2));
  REQUIRE(has_monomial(mono, 3, 1, 2, 2, 0));
  REQUIRE(has_monomial(mono, -6, 2, 1, 1, 1));
  REQUIRE(has_monomial(mono, 1, 3, 0, 0, 2));
  REQUIRE(has_monomial(mono, -1, 3, 2, 0, 0));
}

TEST_CASE("graded-lex ordering is deterministic") {
  const auto a = expand(3, 4);
  const auto b = expand(3, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].coeff == b[i].coeff);
    REQUIRE(a[i].exp_u == b[i].exp_u);
  }
  for (std::size_t i = 1; i < a.size(); ++i) {
    const int da = a[i - 1].exp_u + a[i - 1].exp_v + a[i - 1].exp_q1 +
                   a[i - 1].exp_q2;
    const int db = a[i].exp_u + a[i].exp_v + a[i].exp_q1 + a[i].exp_q2;
    REQUIRE(da >= db);
  }
}

TEST_CASE("non-coprime input is rejected") {
  REQUIRE_THROWS_AS(expand(2, 4), NotCoprime);
  REQUIRE_THROWS_AS(expand(0, 1), NotCoprime);
  REQUIRE_THROWS_AS(parity_certify(3, 6), NotCoprime);
}

TEST_CASE("certification of the three parity classes") {
  const auto r11 = parity_certify(1, 1);
  REQUIRE(r11.branch == ParityBranch::RealPart);
  REQUIRE_FALSE(r11.divided_by_sqrtS);
  REQUIRE(r11.all_integer_S_powers);

  const auto r21 = parity_certify(2, 1);
  REQUIRE(r21.branch == ParityBranch::RealPart);
  REQUIRE(r21.divided_by_sqrtS);
  REQUIRE(r21.all_integer_S_powers);

  const auto r12 = parity_certify(1, 2);
  REQUIRE(r12.branch == ParityBranch::ImagPart);
  REQUIRE_FALSE(r12.divided_by_sqrtS);
  REQUIRE(r12.all_integer_S_powers);
}

TEST_CASE("exhaustive certification for m1, m2 <= 9") {
  for (std::int64_t m1 = 1; m1 <= 9; ++m1)
    for (std::int64_t m2 = 1; m2 <= 9; ++m2) {
      if (std::gcd(m1, m2) != 1) continue;
      const auto rep = parity_certify(m1, m2);
      REQUIRE(rep.all_integer_S_powers);
      REQUIRE(rep.uniform_halfS_parity);
      REQUIRE(rep.min_exp_halfS >= 0);
      REQUIRE(rep.monomial_count > 0);
    }
}

TEST_CASE("conjugation self-consistency of the split") {
  // sending i -> -i flips monomials with odd Q-degree; negating once more
  // on the imaginary branch must reproduce the original list
  for (auto [m1, m2] : {std::pair<std::int64_t, std::int64_t>{2, 3},
                        {3, 2},
                        {4, 5},
                        {5, 4}}) {
    const auto mono = expand(m1, m2);
    for (const auto& m : mono) {
      BigRational flipped = m.coeff;
      if ((m.exp_q1 + m.exp_q2) % 2 == 1) flipped = -flipped;
      if (m2 % 2 == 0) flipped = -flipped;
      REQUIRE(flipped == m.coeff);
    }
  }
}

TEST_CASE("coefficients are integers for small degree") {
  for (auto [m1, m2] : {std::pair<std::int64_t, std::int64_t>{1, 1},
                        {1, 2},
                        {2, 1},
                        {1, 3},
                        {3, 1},
                        {2, 3},  // degree 5, still integer by construction
                        {3, 2}}) {
    for (const auto& m : expand(m1, m2))
      REQUIRE(boost::multiprecision::denominator(m.coeff) == 1);
  }
}

TEST_CASE("numeric consistency of the two evaluation paths") {
  // MIC-Kepler, m = 1
  ModelParams mic;
  mic.m = RationalM(1, 1);
  mic.alpha1 = 0.0;
  mic.beta1 = 1.0;
  mic.k = 1.0;
  const Model mmic = validate_params(mic, DomainWindow{});
  REQUIRE(numeric_consistency(mmic, {1.0, 1.2, 0.0, 0.3, 0.4, 0.2}) <= 1e-12);

  const Model g23 = validate_params(generic(2, 3), DomainWindow{});
  REQUIRE(numeric_consistency(g23, {1.3, 1.1, 0.7, 0.4, -0.6, 0.8}) <= 1e-10);

  const Model g52 = validate_params(generic(5, 2), DomainWindow{});
  REQUIRE(numeric_consistency(g52, {1.3, 1.1, 0.7, 0.4, -0.6, 0.8}) <= 1e-9);
}

TEST_CASE("numeric consistency across pairs and random points") {
  for (std::int64_t m1 = 1; m1 <= 7; ++m1)
    for (std::int64_t m2 = 1; m2 + m1 <= 8; ++m2) {
      if (std::gcd(m1, m2) != 1) continue;
      const Model mdl = validate_params(generic(m1, m2), DomainWindow{});
      const CounterRng rng(m1 * 31 + m2);
      int used = 0;
      for (std::uint64_t i = 0; i < 120 && used < 100; ++i) {
        const auto z = sample_point_positive_S(mdl, rng, i, 15013);
        if (!z) continue;
        ++used;
        REQUIRE(numeric_consistency(mdl, *z) <= 1e-9);
      }
      REQUIRE(used >= 50);
    }
}
