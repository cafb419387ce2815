#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "monopole/model.hpp"
#include "monopole/sampling.hpp"

using namespace monopole;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams mic_kepler() {
  ModelParams p;
  p.m = RationalM(1, 1);
  p.alpha1 = 0.0;
  p.beta1 = 1.0;
  p.k = 1.0;
  return p;
}

ModelParams generic() {
  ModelParams p;
  p.m = RationalM(2, 3);
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

// central-difference gradient, the independent oracle for the dual path
std::array<double, 6> fd_gradient(const Model& mdl, const PhasePoint& z,
                                  double h) {
  std::array<double, 6> g{};
  auto s = z.state();
  for (int i = 0; i < 6; ++i) {
    auto zp = s, zm = s;
    zp[i] += h;
    zm[i] -= h;
    g[i] = (hamiltonian_at(mdl, zp) - hamiltonian_at(mdl, zm)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("rational m normalizes and rejects zero") {
  const RationalM m(4, 6);
  REQUIRE(m.m1() == 2);
  REQUIRE(m.m2() == 3);
  REQUIRE(m.value() == Approx(2.0 / 3.0));
  REQUIRE(RationalM(-2, 3).value() == Approx(-2.0 / 3.0));
  REQUIRE(RationalM(2, -3).sign() == -1);
  REQUIRE_THROWS_AS(RationalM(0, 1), ZeroM);
  REQUIRE(RationalM::parse("5/2") == RationalM(5, 2));
  REQUIRE(RationalM::parse("-3/2") == RationalM(3, 2, -1));
  REQUIRE(RationalM::parse("2") == RationalM(2, 1));
  REQUIRE_THROWS_AS(RationalM::parse("x/y"), ZeroM);
}

TEST_CASE("validate_params accepts the Euclidean case") {
  REQUIRE_NOTHROW(validate_params(mic_kepler(), DomainWindow{}));
}

TEST_CASE("validate_params rejects degenerate input") {
  ModelParams p = mic_kepler();
  p.alpha1 = 0.0;
  p.beta1 = 0.0;
  REQUIRE_THROWS_AS(validate_params(p, DomainWindow{}), DegenerateMetric);

  p = mic_kepler();
  p.alpha1 = 1.0;
  p.beta1 = -1.0;  // alpha1 + beta1 r <= 0 at r = 1 inside the window
  REQUIRE_THROWS_AS(validate_params(p, DomainWindow{}), DegenerateMetric);

  p = mic_kepler();
  p.k = 0.0;
  REQUIRE_THROWS_AS(validate_params(p, DomainWindow{}), ZeroMonopole);
}

TEST_CASE("phase point constructor rejects the coordinate boundary") {
  REQUIRE_THROWS_AS(PhasePoint(-1.0, 1.0, 0, 0, 0, 0), OutOfDomain);
  REQUIRE_THROWS_AS(PhasePoint(1.0, 0.0, 0, 0, 0, 0), OutOfDomain);
  REQUIRE_THROWS_AS(PhasePoint(1.0, kPi, 0, 0, 0, 0), OutOfDomain);
}

TEST_CASE("radial potential") {
  ModelParams p = mic_kepler();  // alpha1=0, beta1=1, alpha2=beta2=0, k=1
  Model mdl = validate_params(p, DomainWindow{});
  REQUIRE(eval_w1(mdl, 2.0) == Approx(1.0 / 8.0).epsilon(1e-15));

  p.alpha1 = 1.0;
  p.beta1 = 0.0;
  mdl = validate_params(p, DomainWindow{});
  REQUIRE(eval_w1(mdl, 1.0) == Approx(0.5).epsilon(1e-15));

  p.alpha1 = 1.0;
  p.beta1 = 2.0;
  p.alpha2 = 3.0;
  p.beta2 = 5.0;
  mdl = validate_params(p, DomainWindow{});
  // frozen: independent 40-digit substitution
  REQUIRE(eval_w1(mdl, 1.7) ==
          Approx(1.214572192513368983957).epsilon(1e-15));

  REQUIRE_THROWS_AS(eval_w1(mdl, 10.0), OutOfDomain);
}

TEST_CASE("angular potential") {
  ModelParams p = mic_kepler();
  Model mdl = validate_params(p, DomainWindow{});
  REQUIRE(eval_w2(mdl, 0.7) == 0.0);  // a = b = c = 0

  p.a = 1.0;
  p.b = 2.0;
  p.c = 3.0;
  mdl = validate_params(p, DomainWindow{});
  REQUIRE(eval_w2(mdl, kPi / 2) == Approx(9.0).epsilon(1e-15));

  p.a = 0.3;
  p.b = -0.2;
  p.c = 0.1;
  mdl = validate_params(p, DomainWindow{});
  // frozen: independent 40-digit substitution
  REQUIRE(eval_w2(mdl, 1.0) == Approx(1.18674460046384707055).epsilon(1e-15));

  REQUIRE_THROWS_AS(eval_w2(mdl, 0.05), OutOfDomain);
}

TEST_CASE("vector potential and magnetic field") {
  ModelParams p = mic_kepler();
  Model mdl = validate_params(p, DomainWindow{});
  REQUIRE(vector_potential(mdl, kPi / 2) == Approx(0.0).margin(1e-16));

  p.k = 2.0;
  p.ell = 2.0;
  mdl = validate_params(p, DomainWindow{});
  REQUIRE(vector_potential(mdl, 1e-9) == Approx(0.0).margin(1e-15));

  p.k = 1.5;
  p.ell = 0.0;
  mdl = validate_params(p, DomainWindow{});
  REQUIRE(vector_potential(mdl, 2.0) == Approx(-1.5 * std::cos(2.0)));

  // dA = B residuals, both at the spec'd points and as a sweep
  p = mic_kepler();
  mdl = validate_params(p, DomainWindow{});
  REQUIRE(magnetic_field_check(mdl, 1.0, 1e-5) <= 1e-9);
  REQUIRE(magnetic_field_check(mdl, kPi / 2, 1e-4) <= 1e-7);
  p.k = 3.0;
  mdl = validate_params(p, DomainWindow{});
  REQUIRE(magnetic_field_check(mdl, 0.5, 1e-5) <= 1e-9);
  for (double th = 0.3; th < kPi - 0.3; th += 0.1)
    for (double step : {1e-5, 1e-4, 1e-3})
      REQUIRE(magnetic_field_check(mdl, th, step) <=
              10.0 * step * step * std::abs(mdl.prm.k));
}

TEST_CASE("hamiltonian at the MIC-Kepler rest point and beyond") {
  const Model mdl = validate_params(mic_kepler(), DomainWindow{});
  REQUIRE(hamiltonian(mdl, {1.0, kPi / 2, 0, 0, 0, 0}) ==
          Approx(0.5).epsilon(1e-15));
  REQUIRE(hamiltonian(mdl, {2.0, kPi / 2, 0, 1.0, 0, 0}) ==
          Approx(5.0 / 8.0).epsilon(1e-15));

  const Model g = validate_params(generic(), DomainWindow{});
  // frozen: independent 40-digit substitution at a generic point
  REQUIRE(hamiltonian(g, {1.3, 1.1, 0.7, 0.4, -0.6, 0.8}) ==
          Approx(1.265275787191269624116).epsilon(1e-15));

  REQUIRE_THROWS_AS(hamiltonian(g, {0.1, 1.0, 0, 0, 0, 0}), OutOfDomain);
}

TEST_CASE("gauge covariance: ell shifts are momentum shifts") {
  ModelParams p = generic();
  const CounterRng rng(11);
  for (std::uint64_t i = 0; i < 100; ++i) {
    p.ell = 0.0;
    const Model m0 = validate_params(p, DomainWindow{});
    const PhasePoint z = sample_point(m0, rng, i);
    p.ell = 0.75;
    const Model m1 = validate_params(p, DomainWindow{});
    const PhasePoint shifted(z.r, z.theta, z.phi, z.p_r, z.p_theta,
                             z.p_phi + (0.0 - 0.75));
    REQUIRE(hamiltonian(m1, shifted) ==
            Approx(hamiltonian(m0, z)).epsilon(1e-12));
  }
}

TEST_CASE("gradient matches central differences at random points") {
  const Model mdl = validate_params(generic(), DomainWindow{});
  const CounterRng rng(17);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const PhasePoint z = sample_point(mdl, rng, i);
    const auto gd = hamiltonian_gradient(mdl, z);
    const auto gn = fd_gradient(mdl, z, 1e-6);
    const double scale = std::max(1.0, norm2(gd));
    for (int j = 0; j < 6; ++j)
      REQUIRE(gd[j] == Approx(gn[j]).margin(1e-6 * scale));
    REQUIRE(gd[2] == 0.0);  // phi is cyclic, exactly
  }
}

TEST_CASE("gradient vanishes appropriately at the rest point") {
  const Model mdl = validate_params(mic_kepler(), DomainWindow{});
  const auto g = hamiltonian_gradient(mdl, {1.0, kPi / 2, 0, 0, 0, 0});
  REQUIRE(g[3] == 0.0);
  REQUIRE(g[4] == 0.0);
  REQUIRE(g[5] == Approx(0.0).margin(1e-16));  // A_phi = 0 at the equator
}

TEST_CASE("closed-form scalar curvature") {
  ModelParams p = mic_kepler();  // m=1, alpha1=0: flat
  Model mdl = validate_params(p, DomainWindow{});
  REQUIRE(scalar_curvature_closed(mdl, 1.3) == 0.0);

  p.alpha1 = 1.0;
  p.beta1 = 0.0;
  mdl = validate_params(p, DomainWindow{});
  REQUIRE(scalar_curvature_closed(mdl, 2.0) == Approx(0.75).epsilon(1e-15));

  p.m = RationalM(1, 2);
  p.alpha1 = 1.0;
  p.beta1 = 1.0;
  mdl = validate_params(p, DomainWindow{});
  REQUIRE(scalar_curvature_closed(mdl, 1.0) ==
          Approx(51.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("finite-difference curvature agrees with the closed form") {
  // flat case
  ModelParams p = mic_kepler();
  Model mdl = validate_params(p, DomainWindow{});
  REQUIRE(std::abs(scalar_curvature_numeric(mdl, 1.3, 1e-4)) <= 1e-5);

  p.alpha1 = 1.0;
  p.beta1 = 0.0;
  mdl = validate_params(p, DomainWindow{});
  REQUIRE(scalar_curvature_numeric(mdl, 2.0, 1e-4) ==
          Approx(0.75).margin(1e-5));

  p.m = RationalM(2, 3);
  p.alpha1 = 0.5;
  p.beta1 = 1.1;
  mdl = validate_params(p, DomainWindow{});
  const double closed = scalar_curvature_closed(mdl, 1.7);
  REQUIRE(scalar_curvature_numeric(mdl, 1.7, 1e-4) ==
          Approx(closed).epsilon(1e-5));

  // theta-independence of the numeric route
  for (double th : {0.8, kPi / 2, 2.1})
    REQUIRE(scalar_curvature_numeric(mdl, 1.7, 1e-4, th) ==
            Approx(closed).epsilon(1e-5));
}

TEST_CASE("curvature property over random parameter draws") {
  const CounterRng rng(23);
  for (std::uint64_t i = 0; i < 100; ++i) {
    ModelParams p;
    const std::int64_t m1 = 1 + static_cast<std::int64_t>(
                                    rng.uniform(i, 10) * 4);
    const std::int64_t m2 = 1 + static_cast<std::int64_t>(
                                    rng.uniform(i, 11) * 4);
    p.m = RationalM(m1, m2);
    p.alpha1 = rng.uniform(i, 12, 0.1, 2.0);
    p.beta1 = rng.uniform(i, 13, 0.1, 2.0);
    p.k = 1.0;
    const Model mdl = validate_params(p, DomainWindow{});
    const double r = rng.uniform(i, 14, 0.6, 2.9);
    const double closed = scalar_curvature_closed(mdl, r);
    const double numeric = scalar_curvature_numeric(mdl, r, 1e-4);
    REQUIRE(numeric == Approx(closed).epsilon(1e-5).margin(1e-6));
  }
}
