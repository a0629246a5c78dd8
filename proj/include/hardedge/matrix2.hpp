#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>

namespace hardedge {

// Forward-mode dual number: value plus one directional derivative.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT: implicit lift of constants
  constexpr Dual(double value, double deriv) : v(value), d(deriv) {}

  static constexpr Dual variable(double value) { return {value, 1.0}; }

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }
inline double deriv_of(double) { return 0.0; }
inline double deriv_of(const Dual& x) { return x.d; }

inline Dual exp(const Dual& x) {
  const double e = std::exp(x.v);
  return {e, e * x.d};
}
inline Dual sqrt(const Dual& x) {
  const double s = std::sqrt(x.v);
  return {s, x.d / (2 * s)};
}

template <class T>
struct Mat2 {
  T a11{}, a12{}, a21{}, a22{};

  static Mat2 identity() { return {T(1.0), T(0.0), T(0.0), T(1.0)}; }
  static Mat2 zero() { return {}; }
  static Mat2 diag(const T& d1, const T& d2) { return {d1, T(0.0), T(0.0), d2}; }

  Mat2& operator+=(const Mat2& o) {
    a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22;
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    a11 -= o.a11; a12 -= o.a12; a21 -= o.a21; a22 -= o.a22;
    return *this;
  }
  Mat2& operator*=(const T& s) {
    a11 *= s; a12 *= s; a21 *= s; a22 *= s;
    return *this;
  }

  T trace() const { return a11 + a22; }
  T det() const { return a11 * a22 - a12 * a21; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  bool is_finite() const {
    return std::isfinite(value_of(a11)) && std::isfinite(value_of(a12)) &&
           std::isfinite(value_of(a21)) && std::isfinite(value_of(a22));
  }
};

template <class T> Mat2<T> operator+(Mat2<T> a, const Mat2<T>& b) { return a += b; }
template <class T> Mat2<T> operator-(Mat2<T> a, const Mat2<T>& b) { return a -= b; }
template <class T> Mat2<T> operator-(const Mat2<T>& a) { return {-a.a11, -a.a12, -a.a21, -a.a22}; }
template <class T> Mat2<T> operator*(Mat2<T> a, const T& s) { return a *= s; }
template <class T> Mat2<T> operator*(const T& s, Mat2<T> a) { return a *= s; }
template <class T> Mat2<T> operator*(const Mat2<T>& a, const Mat2<T>& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

template <class T> Mat2<T> commutator(const Mat2<T>& a, const Mat2<T>& b) { return a * b - b * a; }
template <class T> Mat2<T> anticommutator(const Mat2<T>& a, const Mat2<T>& b) { return a * b + b * a; }

using Matrix2 = Mat2<double>;

inline Matrix2 operator*(Matrix2 a, double s) { return a *= s; }
inline Matrix2 operator*(double s, Matrix2 a) { return a *= s; }

// Largest absolute entry.
inline double norm_max(const Matrix2& m) {
  return std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
}
inline double top_row_norm(const Matrix2& m) { return std::max(std::abs(m.a11), std::abs(m.a12)); }
inline bool is_finite(const Matrix2& m) { return m.is_finite(); }

inline Matrix2 values(const Mat2<Dual>& m) { return {m.a11.v, m.a12.v, m.a21.v, m.a22.v}; }
inline Matrix2 derivs(const Mat2<Dual>& m) { return {m.a11.d, m.a12.d, m.a21.d, m.a22.d}; }

inline std::ostream& operator<<(std::ostream& os, const Matrix2& m) {
  return os << "[[" << m.a11 << ", " << m.a12 << "], [" << m.a21 << ", " << m.a22 << "]]";
}

}  // namespace hardedge
