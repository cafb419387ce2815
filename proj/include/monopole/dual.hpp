#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace monopole {

/// Forward-mode dual number. Nestable: Dual<Dual<double>> carries second
/// derivatives. The scalar on the right of mixed operations is always a
/// plain double (constants have zero derivative).
template <class T>
struct Dual {
  T val{};
  T dot{};

  Dual() = default;
  Dual(double v) : val(v), dot(0.0) {}  // NOLINT: implicit constant lift
  Dual(const T& v, const T& d) : val(v), dot(d) {}

  Dual& operator+=(const Dual& o) { val += o.val; dot += o.dot; return *this; }
  Dual& operator-=(const Dual& o) { val -= o.val; dot -= o.dot; return *this; }
};

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.val); }

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.val + b.val, a.dot + b.dot}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.val - b.val, a.dot - b.dot}; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.val, -a.dot}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.val * b.val, a.dot * b.val + a.val * b.dot};
}
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  const T q = a.val / b.val;
  return {q, (a.dot - q * b.dot) / b.val};
}

template <class T> Dual<T> operator+(const Dual<T>& a, double s) { return {a.val + s, a.dot}; }
template <class T> Dual<T> operator+(double s, const Dual<T>& a) { return {a.val + s, a.dot}; }
template <class T> Dual<T> operator-(const Dual<T>& a, double s) { return {a.val - s, a.dot}; }
template <class T> Dual<T> operator-(double s, const Dual<T>& a) { return {s - a.val, -a.dot}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double s) { return {a.val * s, a.dot * s}; }
template <class T> Dual<T> operator*(double s, const Dual<T>& a) { return {a.val * s, a.dot * s}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double s) { return {a.val / s, a.dot / s}; }
template <class T> Dual<T> operator/(double s, const Dual<T>& a) {
  const T q = s / a.val;
  return {q, -q / a.val * a.dot};
}

using std::acos;
using std::asin;
using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;
using std::tan;

template <class T> Dual<T> sin(const Dual<T>& x) { return {sin(x.val), cos(x.val) * x.dot}; }
template <class T> Dual<T> cos(const Dual<T>& x) { return {cos(x.val), -sin(x.val) * x.dot}; }
template <class T> Dual<T> tan(const Dual<T>& x) {
  const T t = tan(x.val);
  return {t, (1.0 + t * t) * x.dot};
}
template <class T> Dual<T> sqrt(const Dual<T>& x) {
  const T s = sqrt(x.val);
  return {s, x.dot / (2.0 * s)};
}
template <class T> Dual<T> exp(const Dual<T>& x) {
  const T e = exp(x.val);
  return {e, e * x.dot};
}
template <class T> Dual<T> log(const Dual<T>& x) { return {log(x.val), x.dot / x.val}; }
template <class T> Dual<T> asin(const Dual<T>& x) {
  return {asin(x.val), x.dot / sqrt(1.0 - x.val * x.val)};
}
template <class T> Dual<T> acos(const Dual<T>& x) {
  return {acos(x.val), -x.dot / sqrt(1.0 - x.val * x.val)};
}

/// x^p for real p (x > 0 assumed, as everywhere in this library's use).
inline double pow_real(double x, double p) { return std::pow(x, p); }
template <class T> Dual<T> pow_real(const Dual<T>& x, double p) {
  const T xp = pow_real(x.val, p);
  return {xp, p * pow_real(x.val, p - 1.0) * x.dot};
}

using D1 = Dual<double>;
using D2 = Dual<Dual<double>>;

/// State layout used throughout: (r, theta, phi, p_r, p_theta, p_phi).
template <class T>
using State6 = std::array<T, 6>;

/// Gradient of a scalar field on phase space via six dual evaluations.
template <class F>
std::array<double, 6> gradient6(F&& f, const State6<double>& z) {
  std::array<double, 6> g{};
  for (std::size_t i = 0; i < 6; ++i) {
    State6<D1> dz;
    for (std::size_t j = 0; j < 6; ++j) dz[j] = D1(z[j], i == j ? 1.0 : 0.0);
    g[i] = f(dz).dot;
  }
  return g;
}

/// Dense 6x6 Hessian via nested duals (symmetric, all 36 entries filled).
template <class F>
std::array<std::array<double, 6>, 6> hessian6(F&& f, const State6<double>& z) {
  std::array<std::array<double, 6>, 6> h{};
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      State6<D2> dz;
      for (std::size_t k = 0; k < 6; ++k)
        dz[k] = D2(D1(z[k], k == j ? 1.0 : 0.0), D1(k == i ? 1.0 : 0.0, 0.0));
      const double v = f(dz).dot.dot;
      h[i][j] = v;
      h[j][i] = v;
    }
  }
  return h;
}

/// Minimal complex template; std::complex is only specified for builtin
/// floating types, and the integral evaluators need complex duals.
template <class T>
struct Complex {
  T re{};
  T im{};
};

template <class T> Complex<T> operator+(const Complex<T>& a, const Complex<T>& b) { return {a.re + b.re, a.im + b.im}; }
template <class T> Complex<T> operator-(const Complex<T>& a, const Complex<T>& b) { return {a.re - b.re, a.im - b.im}; }
template <class T> Complex<T> operator*(const Complex<T>& a, const Complex<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

/// Integer power by binary exponentiation. Conjugating the base conjugates
/// the result bit-exactly in IEEE arithmetic, so differences of conjugate
/// products have one component that vanishes identically.
template <class T>
Complex<T> cpow(Complex<T> base, std::int64_t n) {
  Complex<T> out{T(1.0), T(0.0)};
  while (n > 0) {
    if (n & 1) out = out * base;
    base = base * base;
    n >>= 1;
  }
  return out;
}

}  // namespace monopole
