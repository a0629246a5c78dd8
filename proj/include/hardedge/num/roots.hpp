#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "hardedge/errors.hpp"

namespace hardedge::num {

struct RootResult {
  double root;
  std::size_t iterations;
};

// Bisection on a sign change of f over [lo, hi].
template <typename F>
RootResult bisect(F&& f, double lo, double hi, double x_tol = 1e-14,
                  std::size_t max_iter = 200) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return {lo, 0};
  if (fhi == 0.0) return {hi, 0};
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw ConvergenceFailed("bisection interval does not bracket a sign change");
  }
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return {mid, it};
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (std::abs(hi - lo) <= x_tol * std::max(1.0, std::abs(mid))) return {0.5 * (lo + hi), it};
  }
  throw ConvergenceFailed("bisection did not converge in " + std::to_string(max_iter) +
                          " iterations");
}

// Secant iteration from two starting points.
template <typename F>
RootResult secant(F&& f, double x0, double x1, double x_tol = 1e-14,
                  std::size_t max_iter = 100) {
  double f0 = f(x0);
  double f1 = f(x1);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    if (f1 == f0) {
      if (f1 == 0.0) return {x1, it};
      throw ConvergenceFailed("secant iteration stalled on equal function values");
    }
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x2)) throw ConvergenceFailed("secant iterate is not finite");
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
    if (std::abs(x1 - x0) <= x_tol * std::max(1.0, std::abs(x1)) || f1 == 0.0) return {x1, it};
  }
  throw ConvergenceFailed("secant did not converge in " + std::to_string(max_iter) +
                          " iterations");
}

}  // namespace hardedge::num
