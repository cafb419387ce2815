#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "monopole/linalg.hpp"

using namespace monopole;

TEST_CASE("lu_solve6 recovers a known solution") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Mat6 a{};
    Vec6 x{};
    for (int i = 0; i < 6; ++i) {
      x[i] = u(rng);
      for (int j = 0; j < 6; ++j) a[i][j] = u(rng);
      a[i][i] += 4.0;  // keep it comfortably nonsingular
    }
    Vec6 b{};
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) b[i] += a[i][j] * x[j];
    const Vec6 got = lu_solve6(a, b);
    for (int i = 0; i < 6; ++i)
      REQUIRE(got[i] == Catch::Approx(x[i]).margin(1e-11));
  }
}

TEST_CASE("lu_solve6 rejects a singular matrix") {
  Mat6 a{};
  for (int j = 0; j < 6; ++j) {
    a[0][j] = 1.0;
    a[1][j] = 2.0;  // row 1 = 2 * row 0
  }
  for (int i = 2; i < 6; ++i) a[i][i] = 1.0;
  REQUIRE_THROWS_AS(lu_solve6(a, Vec6{1, 2, 0, 0, 0, 0}),
                    std::runtime_error);
}

TEST_CASE("singular values of rotated diagonal data") {
  // rows = diag(5, 3, 1e-3) * known orthonormal triple in R^6
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Vec6> basis = {
      Vec6{inv_sqrt2, inv_sqrt2, 0, 0, 0, 0},
      Vec6{0, 0, inv_sqrt2, -inv_sqrt2, 0, 0},
      Vec6{0, 0, 0, 0, 1, 0},
  };
  const std::vector<double> expected = {5.0, 3.0, 1e-3};
  std::vector<Vec6> rows(3);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 6; ++k) rows[i][k] = expected[i] * basis[i][k];
  const auto sv = singular_values(rows);
  REQUIRE(sv.size() == 3);
  for (int i = 0; i < 3; ++i)
    REQUIRE(sv[i] == Catch::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("rank deficiency shows as a tiny singular value") {
  std::vector<Vec6> rows = {
      Vec6{1, 2, 3, 4, 5, 6},
      Vec6{0, 1, -1, 0.5, 2, -0.3},
      Vec6{2, 5, 5, 8.5, 12, 11.7},  // row0 + row1 dependence: 2r0 + r1
  };
  for (int k = 0; k < 6; ++k)
    REQUIRE(rows[2][k] == Catch::Approx(2 * rows[0][k] + rows[1][k]));
  const auto sv = singular_values(rows);
  REQUIRE(sv[0] > 1.0);
  REQUIRE(sv[2] <= 1e-12 * sv[0]);
}
