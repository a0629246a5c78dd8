#pragma once

// Painleve III family governing the beta = 2 and beta = 4 hard edge:
// second-order equations, the coupled (q, y) first-order systems, the
// r <-> y bridges, and the hard-edge Tracy-Widom-type equation for q.

#include <cmath>
#include <string>
#include <utility>

#include "hardedge/errors.hpp"
#include "hardedge/num/ode.hpp"

namespace hardedge::piii {

// Family A pairs with the first beta = 2 Lax pair (x^-2 pole in L11),
// family B with the second one (constant L11).
enum class Family { A, B };

struct Variant {
  Family family = Family::A;
  // Free sign of the y^2 / t^-4 coefficients; -1 is the distribution case.
  int sign = -1;
};

struct Params {
  double a = 0.0;
  double kappa = 1.0;
  Variant variant{};

  void validate() const {
    if (!(kappa > 0)) throw DomainError("kappa must be positive");
    if (variant.sign != 1 && variant.sign != -1) throw DomainError("variant sign must be +1 or -1");
  }
};

struct CoupledState {
  double t;
  double q;
  double y;
};

struct SpmState {
  double t;
  double s_plus;
  double s_minus;
};

inline constexpr double kSingularGuard = 1e-13;

namespace detail {

inline void require_t(double t) {
  if (!(t >= kSingularGuard)) throw SingularInput("t = " + std::to_string(t) + " is not positive");
}
inline void require_nonzero(double v, const char* name) {
  if (!(std::abs(v) >= kSingularGuard)) {
    throw SingularInput(std::string(name) + " vanishes (" + std::to_string(v) + ")");
  }
}
inline void require_off_turning_point(double q) {
  if (!(std::abs(q * q - 1.0) >= kSingularGuard)) {
    throw SingularInput("q^2 = 1 is a turning point (q = " + std::to_string(q) + ")");
  }
}

}  // namespace detail

// y'' for the selected Painleve III variant.
inline double piii_rhs(const Params& p, double t, double y, double yp) {
  detail::require_t(t);
  detail::require_nonzero(y, "y");
  const double c = p.variant.sign;
  const double a = p.a;
  const double t4 = t * t * t * t;
  const double common = yp * yp / y - yp / t + y * y * y - 1.0 / (t4 * t * t * y);
  if (p.variant.family == Family::A) {
    return common - c * a / t * y * y + c * (a - 1) / t4;
  }
  return common + c * (a - 1) / t * y * y - c * a / t4;
}

// xi = t^{-1/2}, z = y t^{3/2}.
inline std::pair<double, double> standard_form(double t, double y) {
  if (!(t > 0)) throw SingularInput("standard form needs t > 0");
  return {1.0 / std::sqrt(t), y * t * std::sqrt(t)};
}

inline std::pair<double, double> standard_form_inverse(double xi, double z) {
  if (!(xi > 0)) throw SingularInput("standard form needs xi > 0");
  return {1.0 / (xi * xi), z * xi * xi * xi};
}

// Derivatives transform as z' = dz/dxi with dt/dxi = -2 xi^{-3}.
inline std::pair<double, double> standard_form_derivs(double t, double y, double yp, double ypp) {
  if (!(t > 0)) throw SingularInput("standard form needs t > 0");
  // z(xi) = xi^{-3} y(xi^{-2}).
  const double xi = 1.0 / std::sqrt(t);
  const double dt = -2.0 / (xi * xi * xi);
  const double d2t = 6.0 / (xi * xi * xi * xi);
  const double xi3 = xi * xi * xi;
  const double dy = yp * dt;
  const double d2y = ypp * dt * dt + yp * d2t;
  const double zp = -3.0 / (xi3 * xi) * y + dy / xi3;
  const double zpp = 12.0 / (xi3 * xi * xi) * y - 6.0 / (xi3 * xi) * dy + d2y / xi3;
  return {zp, zpp};
}

// Residual of the standard-form Painleve III in (xi, z).
inline double standard_residual(const Params& p, double xi, double z, double zp, double zpp) {
  if (!(xi >= kSingularGuard)) throw SingularInput("xi must be positive");
  detail::require_nonzero(z, "z");
  const double c = p.variant.sign;
  const double a = p.a;
  const double common = zp * zp / z - zp / xi + 4 * z * z * z - 4.0 / z;
  double rhs = 0;
  if (p.variant.family == Family::A) {
    rhs = common - 4 * c * a / xi * z * z + 4 * c * (a - 1) / xi;
  } else {
    rhs = common + 4 * c * (a - 1) / xi * z * z - 4 * c * a / xi;
  }
  return zpp - rhs;
}

// (q', y') of the coupled first-order system.
inline std::pair<double, double> coupled_rhs(const Params& p, const CoupledState& s) {
  detail::require_t(s.t);
  detail::require_nonzero(s.y, "y");
  const double t = s.t, q = s.q, y = s.y, a = p.a;
  const double t2 = t * t, t3 = t2 * t;
  const double qq = q * (q * q - 1) / (t2 * y);
  if (p.variant.family == Family::A) {
    const double yp = (2 * q * q - 1 - t3 * y * y - (a + 1) * t2 * y) / t3;
    const double qp = (qq - 0.5 * (a - 1) * q) / t;
    return {qp, yp};
  }
  const double yp = (2 * q * q - 1 - t3 * y * y + (a - 2) * t2 * y) / t3;
  const double qp = (qq + 0.5 * a * q) / t;
  return {qp, yp};
}

// h of the beta = 2 Lax pairs, normalized as in the pair itself. The
// r-parametrized form (r^2 - 1)/(t^2 y) -/+ 2(...)(r + 1) equals 4 q^2 h.
inline double h_aux(const Params& p, double t, double q, double y) {
  detail::require_t(t);
  detail::require_nonzero(y, "y");
  const double base = (q * q - 1) / (t * t * y);
  return p.variant.family == Family::A ? base - (p.a - 1) : base + p.a;
}

// q'' from t(q^2-1)(t q')' = q (t q')^2 + q^3(q^2-2)/t + (1/t - a^2/4) q.
inline double tw_rhs(double a, double t, double q, double qp) {
  detail::require_t(t);
  detail::require_off_turning_point(q);
  const double tqp = t * qp;
  const double rhs = q * tqp * tqp + q * q * q * (q * q - 2) / t + (1.0 / t - a * a / 4) * q;
  // (t q')' = q' + t q''.
  return (rhs / (t * (q * q - 1)) - qp) / t;
}

inline double r_of_q(double q) { return -1.0 + 2.0 * q * q; }

// Non-negative root; the sign of q is not recoverable from r.
inline double q_of_r(double r) {
  if (!(r >= -1.0)) throw DomainError("r must be >= -1, got " + std::to_string(r));
  return std::sqrt((r + 1.0) / 2.0);
}

inline double r_from_y(double a, double t, double y, double yp) {
  return t * t * t * (yp + y * y) + (a + 1) * t * t * y;
}

inline double y_from_r(double a, double t, double r, double rp) {
  const double den = t * rp + (a - 1) * (r + 1);
  detail::require_nonzero(den, "t r' + (a-1)(r+1)");
  return (r * r - 1) / (t * t * den);
}

// Family-B (r, y) system: t(t^2 y)' = r - t^3 y^2 + a t^2 y and
// t r' = (r^2 - 1)/(t^2 y) + a(r + 1). Returns (r', y').
inline std::pair<double, double> r_y_system_b_rhs(double a, double t, double r, double y) {
  detail::require_t(t);
  detail::require_nonzero(y, "y");
  const double t2 = t * t;
  const double rp = ((r * r - 1) / (t2 * y) + a * (r + 1)) / t;
  const double d_t2y = (r - t * t2 * y * y + a * t2 * y) / t;
  const double yp = (d_t2y - 2 * t * y) / t2;
  return {rp, yp};
}

// r'' from t(r^2-1)(t r')' = r (t r')^2 + (r^2-1)^2/t - a^2 (r+1)^2.
inline double r_second_order_residual(double a, double t, double r, double rp, double rpp) {
  const double tr = t * rp;
  return t * (r * r - 1) * (rp + t * rpp) -
         (r * tr * tr + (r * r - 1) * (r * r - 1) / t - a * a * (r + 1) * (r + 1));
}

// (S+', S-') from the logarithmic derivatives driven by q.
inline std::pair<double, double> spm_rhs(double a, double t, double q, double qp,
                                         const SpmState& s) {
  detail::require_t(t);
  detail::require_off_turning_point(q);
  const double d = q * q - 1;
  const double common = q * qp / d;
  const double skew = a * q / (2 * t * d);
  return {s.s_plus * (common + skew), s.s_minus * (common - skew)};
}

inline double h0_eval(double a, double t, double q, double qp) {
  detail::require_t(t);
  detail::require_off_turning_point(q);
  const double tq = 2 * t * qp;
  return (-(tq * tq - a * a) / (4 * (q * q - 1)) + q * q / t + a * (a - 2) / 4) / (2 * t);
}

// Partner data at parameter 1 - a: y y_p = -1/t^3 and q^2/y + q_p^2/y_p = 0.
inline std::pair<double, double> cross_a_partner(double t, double a, double q, double y) {
  (void)a;
  detail::require_t(t);
  detail::require_nonzero(y, "y");
  const double t3 = t * t * t;
  const double y_partner = -1.0 / (t3 * y);
  const double q2_partner = q * q / (t3 * y * y);
  return {q2_partner, y_partner};
}

// Residuals of the two cross-parameter identities.
inline std::pair<double, double> cross_identity_residuals(double t, double q, double y,
                                                          double q_partner, double y_partner) {
  return {y * y_partner + 1.0 / (t * t * t), q * q / y + q_partner * q_partner / y_partner};
}

// Right-hand sides packaged for num::integrate_ivp.

// State (q, y, phi) with phi' = y phi.
inline auto coupled_system(const Params& p) {
  return [p](double t, const num::State& s) {
    auto [qp, yp] = coupled_rhs(p, {t, s[0], s[1]});
    return num::State{qp, yp, s[1] * s[2]};
  };
}

// State (q, q', S+, S-).
inline auto tw_system(double a) {
  return [a](double t, const num::State& s) {
    const double qpp = tw_rhs(a, t, s[0], s[1]);
    auto [sp, sm] = spm_rhs(a, t, s[0], s[1], {t, s[2], s[3]});
    return num::State{s[1], qpp, sp, sm};
  };
}

// State (r, y).
inline auto r_y_system_b(double a) {
  return [a](double t, const num::State& s) {
    auto [rp, yp] = r_y_system_b_rhs(a, t, s[0], s[1]);
    return num::State{rp, yp};
  };
}

}  // namespace hardedge::piii
