#pragma once

// Painleve II for the soft-edge limit: Hastings-McLeod solution by shooting,
// u = (q')^2 - t q^2 - q^4, the Painleve XXXIV form and the Gambier relation.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hardedge/errors.hpp"
#include "hardedge/num/airy.hpp"
#include "hardedge/num/ode.hpp"

namespace hardedge::pii {

using num::State;
using num::Tolerances;
using num::Trajectory;

inline double pii_rhs(double t, double q) { return t * q + 2 * q * q * q; }

// q'' = t q + 2 q^3 + nu.
inline double pii_rhs(double t, double q, double nu) { return t * q + 2 * q * q * q + nu; }

inline double u_of(double t, double q, double qp) {
  return qp * qp - t * q * q - q * q * q * q;
}

struct HMPoint {
  double q;
  double qp;
  double u;
};

struct HMSolution {
  std::vector<double> grid;  // ascending
  std::vector<double> q;
  std::vector<double> qp;
  std::vector<double> u;
  Trajectory traj;  // state (q, q'); used for interpolation between nodes
  double shooting_factor = 1.0;
  double anchor = 8.0;

  [[nodiscard]] double t_min() const { return grid.front(); }
  [[nodiscard]] double t_max() const { return grid.back(); }
  [[nodiscard]] bool covers(double t) const { return t >= t_min() && t <= t_max(); }

  // q, q' from dense output; u from its defining formula.
  [[nodiscard]] HMPoint at(double t) const {
    if (!covers(t)) {
      throw RangeError("t = " + std::to_string(t) + " outside Hastings-McLeod table [" +
                       std::to_string(t_min()) + ", " + std::to_string(t_max()) + "]");
    }
    const State s = traj.state_at(t);
    return {s[0], s[1], u_of(t, s[0], s[1])};
  }
};

namespace detail {

enum class Fate { BlowUp, Crossing, Survived };

struct ShotResult {
  Fate fate;
  Trajectory traj;
};

inline ShotResult shoot(double c, double anchor, double t_min, const num::AiryValue& seed,
                        const Tolerances& tol, std::vector<double> stops = {}) {
  auto rhs = [](double t, const State& s) { return State{s[1], pii_rhs(t, s[0])}; };
  num::IvpOptions opts;
  opts.record_all = false;
  opts.stops = std::move(stops);
  opts.terminate = [](double t, const State& s) {
    return s[0] < 0.0 || s[0] > 4.0 + std::sqrt(std::max(-t, 0.0));
  };
  Trajectory tr = num::integrate_ivp(rhs, anchor, State{c * seed.value, c * seed.deriv}, t_min,
                                     tol, opts);
  const auto& last = tr.back();
  Fate fate = Fate::Survived;
  if (last.state[0] < 0.0) {
    fate = Fate::Crossing;
  } else if (last.s > t_min) {
    fate = Fate::BlowUp;
  }
  return {fate, std::move(tr)};
}

}  // namespace detail

// The separatrix between blow-up (too large a multiple of Ai) and zero
// crossing (too small) selects the solution with q ~ Ai(t) as t -> +inf.
// The table is uniform with spacing close to table_step.
inline HMSolution solve_hastings_mcleod(double t_min, double t_max,
                                        const Tolerances& tol = {1e-13, 1e-13, 1'000'000, 1e-5},
                                        double anchor_hint = 8.0, double table_step = 1e-3) {
  tol.validate();
  if (!(t_min < 0.0 && 0.0 < t_max)) throw DomainError("need t_min < 0 < t_max");
  if (t_max < 6.0) throw DomainError("t_max must be at least 6");
  const double anchor = std::max({t_max, 8.0, anchor_hint});
  const num::AiryValue seed = num::airy_ai(anchor);

  // Every shot lands on the same table nodes so that the step sequence, and
  // hence the rounding near the separatrix, is shared by all runs.
  const auto count = static_cast<std::size_t>(std::ceil((t_max - t_min) / table_step)) + 1;
  const std::vector<double> stops = num::linspace(t_max, t_min, count);
  // Runs continue far past t_min so that nearly every multiplier declares
  // its fate; the rare survivors are sorted against the left asymptote
  // sqrt(-t/2) (1 + 1/(8 t^3)).
  const double t_deep = t_min - 12.0;
  auto too_big = [&](double c) {
    const auto shot = detail::shoot(c, anchor, t_deep, seed, tol, stops);
    if (shot.fate != detail::Fate::Survived) return shot.fate == detail::Fate::BlowUp;
    const double t = t_deep;
    return shot.traj.back().state[0] > std::sqrt(-0.5 * t) * (1.0 + 1.0 / (8.0 * t * t * t));
  };
  double lo = 0.5, hi = 1.5;
  if (too_big(lo) || !too_big(hi)) {
    throw ShootingFailed("multiplier bracket [0.5, 1.5] does not separate the two fates");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double c = 0.5 * (lo + hi);
    if (c <= lo || c >= hi) break;
    (too_big(c) ? hi : lo) = c;
  }
  const double c = 0.5 * (lo + hi);
  auto shot = detail::shoot(c, anchor, t_min, seed, tol, stops);
  if (shot.fate != detail::Fate::Survived) {
    throw ShootingFailed("no multiplier keeps the solution regular down to t = " +
                         std::to_string(t_min));
  }

  HMSolution hm;
  hm.shooting_factor = c;
  hm.anchor = anchor;
  std::vector<num::TrajectoryNode> nodes(shot.traj.nodes().rbegin(), shot.traj.nodes().rend());
  hm.traj = Trajectory(std::move(nodes));
  for (const auto& n : hm.traj) {
    if (n.s > t_max) break;
    hm.grid.push_back(n.s);
    hm.q.push_back(n.state[0]);
    hm.qp.push_back(n.state[1]);
    hm.u.push_back(u_of(n.s, n.state[0], n.state[1]));
  }
  return hm;
}

// Sup over interior nodes of the centered-difference u' + q^2.
inline double u_check(const HMSolution& hm) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < hm.grid.size(); ++i) {
    const double du = (hm.u[i + 1] - hm.u[i - 1]) / (hm.grid[i + 1] - hm.grid[i - 1]);
    worst = std::max(worst, std::abs(du + hm.q[i] * hm.q[i]));
  }
  return worst;
}

// 2 r r'' - (r')^2 - 4 t r^2 - 4 r^3.
inline double p34_residual(double t, double r, double rp, double rpp) {
  return 2 * r * rpp - rp * rp - 4 * t * r * r - 4 * r * r * r;
}

// r = 2 q^2 with derivatives by chain rule through q'' = t q + 2 q^3.
inline double p34_residual_from_q(double t, double q, double qp) {
  const double qpp = pii_rhs(t, q);
  return p34_residual(t, 2 * q * q, 4 * q * qp, 4 * (qp * qp + q * qpp));
}

// Gambier relation between a Painleve II solution q0 (parameter 0) and
// w (parameter -eps/2):
//   2^{1/3} eps q0(s)^2 = w'(t) + eps w(t)^2 + eps t / 2,  s = -2^{-1/3} t.

inline const double kCbrt2 = std::cbrt(2.0);

inline double gambier_arg(double t) { return -t / kCbrt2; }

struct Q0Point {
  double q;
  double qp;  // derivative in its own variable s
};

inline double gambier_residual(double t, const Q0Point& q0, double w, double wp, int eps) {
  if (eps != 1 && eps != -1) throw DomainError("eps must be +1 or -1");
  return kCbrt2 * eps * q0.q * q0.q - (wp + eps * w * w + 0.5 * eps * t);
}

// Table-driven form; q0 is read at s = -2^{-1/3} t.
inline double gambier_residual(double t, const HMSolution& q0, const Trajectory& w, int eps) {
  const double s = gambier_arg(t);
  const HMPoint p = q0.at(s);
  if (!w.covers(t)) throw RangeError("t = " + std::to_string(t) + " outside the w table");
  const auto [ws, dws] = w.eval(t);
  return gambier_residual(t, {p.q, p.qp}, ws[0], dws[0], eps);
}

// w' solved from the relation.
inline double gambier_w_prime(double t, const Q0Point& q0, double w, int eps) {
  return kCbrt2 * eps * q0.q * q0.q - eps * w * w - 0.5 * eps * t;
}

// w'' by differentiating the relation: uses dq0/dt = -2^{-1/3} q0'(s).
inline double gambier_w_second(double t, const Q0Point& q0, double w, int eps) {
  const double wp = gambier_w_prime(t, q0, w, eps);
  return -2.0 * eps * q0.q * q0.qp - 2.0 * eps * w * wp - 0.5 * eps;
}

// Residual of w'' = t w + 2 w^3 - eps/2.
inline double pii_nu_residual(double t, double w, double wpp, double nu) {
  return wpp - pii_rhs(t, w, nu);
}

// w seeded at t0 from w = eps Q'/(2Q), Q(t) = q0(s)^2, i.e.
// w = -eps 2^{-1/3} q0'(s)/q0(s); then the relation is integrated as a
// Riccati equation in t over [t0, t1].
inline Trajectory gambier_construct(const HMSolution& q0, int eps, double t0, double t1,
                                    const Tolerances& tol = {1e-12, 1e-12, 1'000'000, 1e-5}) {
  if (eps != 1 && eps != -1) throw DomainError("eps must be +1 or -1");
  for (double t : {t0, t1}) {
    if (!q0.covers(gambier_arg(t))) {
      throw RangeError("Gambier argument for t = " + std::to_string(t) + " outside q0 table");
    }
  }
  const HMPoint p0 = q0.at(gambier_arg(t0));
  if (p0.q == 0.0) throw SingularInput("q0 vanishes at the Gambier seed");
  const double w0 = -eps * p0.qp / (kCbrt2 * p0.q);
  auto rhs = [&q0, eps](double t, const State& s) {
    const HMPoint p = q0.at(gambier_arg(t));
    return State{gambier_w_prime(t, {p.q, p.qp}, s[0], eps)};
  };
  return num::integrate_ivp(rhs, t0, State{w0}, t1, tol);
}

// Riccati reduction for q0 = 0: w = eps phi'/phi with phi'' = -t phi / 2.
// Returns the trajectory of (phi, phi').
inline Trajectory gambier_zero_phi(double t0, double t1, double phi0, double dphi0,
                                   const Tolerances& tol = {1e-12, 1e-12, 1'000'000, 1e-5}) {
  auto rhs = [](double t, const State& s) { return State{s[1], -0.5 * t * s[0]}; };
  return num::integrate_ivp(rhs, t0, State{phi0, dphi0}, t1, tol);
}

}  // namespace hardedge::pii
