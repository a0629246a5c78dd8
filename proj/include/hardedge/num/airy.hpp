#pragma once

// Airy function Ai evaluated by integrating w'' = s w backwards from an
// anchor where the decaying branch is known from its asymptotic series.

#include <cmath>
#include <numbers>
#include <utility>

#include "hardedge/num/ode.hpp"

namespace hardedge::num {

struct AiryValue {
  double value;
  double deriv;
};

// Asymptotic expansion of Ai and Ai' for large positive s. Terms are summed
// until they stop decreasing (the series is asymptotic, not convergent).
inline AiryValue airy_asymptotic(double s) {
  if (!(s > 0)) throw DomainError("asymptotic Airy series needs s > 0");
  const double zeta = 2.0 / 3.0 * s * std::sqrt(s);
  double u = 1.0;
  double sum_u = 1.0;
  double sum_v = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double kk = k;
    u *= (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216 * kk);
    const double term_u = u / std::pow(zeta, kk);
    if (std::abs(term_u) >= last) break;
    last = std::abs(term_u);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double v = -(6 * kk + 1) / (6 * kk - 1) * u;
    sum_u += sign * term_u;
    sum_v += sign * v / std::pow(zeta, kk);
    if (last < 1e-17) break;
  }
  const double pref = std::exp(-zeta) / (2 * std::sqrt(std::numbers::pi));
  const double q = std::pow(s, 0.25);
  return {pref / q * sum_u, -pref * q * sum_v};
}

inline constexpr double kAiryAnchor = 12.0;

// Trajectory of (Ai, Ai') on [s_min, anchor] integrated from the anchor.
inline Trajectory airy_table(double s_min, double anchor = kAiryAnchor,
                             const Tolerances& tol = {1e-30, 1e-13, 1'000'000, 1e-5}) {
  if (anchor < 8.0) throw DomainError("Airy anchor must be at least 8");
  if (!(s_min < anchor)) throw DomainError("Airy table needs s_min below the anchor");
  const AiryValue seed = airy_asymptotic(anchor);
  auto rhs = [](double s, const State& w) { return State{w[1], s * w[0]}; };
  return integrate_ivp(rhs, anchor, State{seed.value, seed.deriv}, s_min, tol);
}

// Ai(s) and Ai'(s). Points at or beyond the anchor use the seed series.
inline AiryValue airy_ai(double s, double anchor = kAiryAnchor) {
  if (s >= anchor) return airy_asymptotic(s);
  const AiryValue seed = airy_asymptotic(anchor);
  auto rhs = [](double x, const State& w) { return State{w[1], x * w[0]}; };
  const Tolerances tol{1e-30, 1e-13, 1'000'000, 1e-5};
  const Trajectory tr = integrate_ivp(rhs, anchor, State{seed.value, seed.deriv}, s, tol,
                                      IvpOptions{.stops = {}, .record_all = false, .max_step = std::numeric_limits<double>::infinity(), .initial_step = 0.0, .terminate = {}});
  return {tr.back().state[0], tr.back().state[1]};
}

}  // namespace hardedge::num
