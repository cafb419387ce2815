#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace monopole {

using Vec6 = std::array<double, 6>;
using Mat6 = std::array<std::array<double, 6>, 6>;

inline double norm2(const Vec6& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Solves A x = b in place for a 6x6 system, Gaussian elimination with
/// partial pivoting.
inline Vec6 lu_solve6(Mat6 a, Vec6 b) {
  constexpr std::size_t n = 6;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
    if (a[piv][col] == 0.0)
      throw std::runtime_error("lu_solve6: singular matrix");
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = a[row][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
      b[row] -= f * b[col];
    }
  }
  Vec6 x{};
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Singular values of an n_rows x n_cols matrix (row-major, n_cols <= 6
/// rows of observables against 6 phase variables in practice), one-sided
/// Jacobi on the columns of A^T. Returns values sorted descending.
inline std::vector<double> singular_values(const std::vector<Vec6>& rows) {
  const std::size_t m = rows.size();  // vectors in R^6
  // Work on the transposed problem: columns are the observable gradients.
  std::vector<Vec6> col(m);
  for (std::size_t i = 0; i < m; ++i) col[i] = rows[i];

  auto dot = [](const Vec6& x, const Vec6& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < 6; ++k) s += x[k] * y[k];
    return s;
  };

  const double eps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double app = dot(col[p], col[p]);
        const double aqq = dot(col[q], col[q]);
        const double apq = dot(col[p], col[q]);
        if (std::abs(apq) <= eps * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < 6; ++k) {
          const double xp = col[p][k], xq = col[q][k];
          col[p][k] = c * xp - s * xq;
          col[q][k] = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(m);
  for (std::size_t i = 0; i < m; ++i) sv[i] = std::sqrt(dot(col[i], col[i]));
  std::sort(sv.begin(), sv.end(), [](double x, double y) { return x > y; });
  return sv;
}

}  // namespace monopole
