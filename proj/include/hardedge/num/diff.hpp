#pragma once

#include <cmath>
#include <type_traits>

#include "hardedge/errors.hpp"

namespace hardedge::num {

namespace detail {

template <typename V>
bool finite_value(const V& v) {
  if constexpr (std::is_arithmetic_v<V>) {
    return std::isfinite(v);
  } else {
    return v.is_finite();
  }
}

}  // namespace detail

// Central difference (f(s+h) - f(s-h)) / (2h). Works for scalars and for any
// value type with vector-space operators and is_finite().
template <typename F>
auto fd_partial(F&& f, double s, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  const auto fp = f(s + h);
  const auto fm = f(s - h);
  if (!detail::finite_value(fp) || !detail::finite_value(fm)) {
    throw NonFiniteValue("function is not finite at s +/- h");
  }
  return (fp - fm) * (1.0 / (2.0 * h));
}

}  // namespace hardedge::num
