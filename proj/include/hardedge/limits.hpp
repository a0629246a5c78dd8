#pragma once

// Hard-to-soft edge transition at a = 2 alpha. Hard-edge solutions are seeded
// at the centre of the soft window from Hastings-McLeod data and integrated
// outward in the soft time variable; the scaled hard objects are compared
// with their soft-edge counterparts.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardedge/errors.hpp"
#include "hardedge/lax.hpp"
#include "hardedge/matrix2.hpp"
#include "hardedge/num/ode.hpp"
#include "hardedge/painleve2.hpp"
#include "hardedge/painleve3.hpp"

namespace hardedge::limits {

// Power of alpha in thirds; exponents add exactly.
struct Exponent {
  int thirds = 0;

  friend constexpr Exponent operator+(Exponent a, Exponent b) { return {a.thirds + b.thirds}; }
  friend constexpr Exponent operator-(Exponent a) { return {-a.thirds}; }
  friend constexpr Exponent operator-(Exponent a, Exponent b) { return {a.thirds - b.thirds}; }
  friend constexpr bool operator==(Exponent, Exponent) = default;
  [[nodiscard]] constexpr double value() const { return thirds / 3.0; }
  [[nodiscard]] std::string str() const {
    return thirds % 3 == 0 ? std::to_string(thirds / 3) : std::to_string(thirds) + "/3";
  }
};

inline constexpr Exponent kDx{-2};       // d/dx_hard = alpha^{-2/3} d/dx_soft
inline constexpr Exponent kDt{8};        // d/dt_hard = alpha^{8/3} d/dt_soft
inline constexpr Exponent kOperator{2};  // hard FP operator -> alpha^{2/3} soft operator
inline constexpr Exponent kDeltaY{8};
inline constexpr Exponent kDeltaR{-2};
inline constexpr Exponent kQ{-1};
inline constexpr Exponent kL{-2};
inline constexpr Exponent kB{8};
inline constexpr Exponent kF{-2};

struct ScaleMap {
  double alpha = 100.0;

  void validate() const {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
  }
  [[nodiscard]] double pow(Exponent e) const { return std::pow(std::cbrt(alpha), e.thirds); }
  [[nodiscard]] double eps() const { return pow({-1}); }
  [[nodiscard]] double a() const { return 2.0 * alpha; }
};

struct HardPoint {
  double x;
  double t;
};

inline HardPoint to_hard_coords(const ScaleMap& m, double x_soft, double t_soft) {
  m.validate();
  const double t = (1.0 + m.pow({-2}) * t_soft) / (m.alpha * m.alpha);
  if (!(t > 0)) throw DomainError("mapped t_hard = " + std::to_string(t) + " is not positive");
  return {m.alpha * (1.0 + m.eps() * x_soft), t};
}

enum class Route { thm1a, thm1b, thm2 };

inline const char* route_name(Route r) {
  switch (r) {
    case Route::thm1a: return "thm1a";
    case Route::thm1b: return "thm1b";
    case Route::thm2: return "thm2";
  }
  return "?";
}

// Hard-edge values at the mapped point; fields not used by a route may be NaN.
struct HardValues {
  double y = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double phi = std::numeric_limits<double>::quiet_NaN();
  double F = std::numeric_limits<double>::quiet_NaN();
  double G = std::numeric_limits<double>::quiet_NaN();
};

struct SoftValues {
  double y = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double phi = std::numeric_limits<double>::quiet_NaN();
  double F = std::numeric_limits<double>::quiet_NaN();
  double G = std::numeric_limits<double>::quiet_NaN();
};

// Inverts the substitutions y -> -alpha^3 (1 - alpha^{-1/3} y) (thm1a) or
// alpha^3 (1 + alpha^{-1/3} y) (thm1b), r -> -1 + alpha^{-2/3} r,
// q -> alpha^{-1/3} q, phi -> e^{-alpha^{1/3} t} phi and the eigenvector
// gauges of each route.
inline SoftValues scale_hard_functions(const ScaleMap& m, double t_soft, const HardValues& h,
                                       Route which) {
  m.validate();
  const double eps = m.eps(), a3 = m.alpha * m.alpha * m.alpha, c = m.pow({1});
  SoftValues s;
  s.q = h.q / eps;
  s.F = h.F / m.pow(kF);
  switch (which) {
    case Route::thm1a:
      s.y = (1.0 + h.y / a3) / eps;
      s.r = (h.r + 1.0) / (eps * eps);
      s.phi = std::exp(c * t_soft) * h.phi;
      s.G = std::exp(-c * t_soft) * h.G;
      break;
    case Route::thm1b:
      // Exponent of the G gauge as printed for this route; an observation only.
      s.y = (h.y / a3 - 1.0) / eps;
      s.r = (h.r + 1.0) / (eps * eps);
      s.G = std::exp(-eps * t_soft) * h.G;
      break;
    case Route::thm2:
      s.G = h.G / m.pow(kF);
      break;
  }
  for (double v : {s.q, s.F, s.y, s.r, s.phi, s.G}) {
    if (std::isinf(v)) throw DomainError("non-finite scaled value");
  }
  return s;
}

// Window and integration settings for the sweep.
struct Window {
  double t_min = -2.0;
  double t_max = 2.0;
  double x_min = -2.0;
  double x_max = 2.0;
  int nt = 17;
  int nx = 17;
  num::Tolerances tol{1e-13, 1e-12, 2'000'000, 1e-5};
};

// Hard beta = 2 solution (family A, a = 2 alpha) as a function of soft time:
// state (q, y, phi) in hard units.
struct HardThm1 {
  ScaleMap map;
  num::Trajectory traj;
};

// Hard beta = 4 solution: state (q, q', S+, S-) in hard units.
struct HardThm2 {
  ScaleMap map;
  num::Trajectory traj;
};

namespace detail {

// Integrates d/dt_soft = alpha^{-8/3} f_hard outward from t_soft = 0.
template <class Rhs>
num::Trajectory outward(Rhs rhs, const num::State& s0, double t0, double t1,
                        const num::Tolerances& tol) {
  num::Trajectory down = num::integrate_ivp(rhs, 0.0, s0, t0, tol);
  num::Trajectory up = num::integrate_ivp(rhs, 0.0, s0, t1, tol);
  std::vector<num::TrajectoryNode> nodes(down.nodes().rbegin(), down.nodes().rend());
  nodes.insert(nodes.end(), up.nodes().begin() + 1, up.nodes().end());
  return num::Trajectory(std::move(nodes));
}

}  // namespace detail

inline piii::Params thm1_params(const ScaleMap& m) {
  return {m.a(), 1.0, {piii::Family::A, -1}};
}

// Seed: q = eps q_s, y = -alpha^3 (1 - eps q_s'/q_s), phi = -q_s at the centre.
inline HardThm1 hard_thm1(const ScaleMap& m, const pii::HMSolution& hm, const Window& w = {}) {
  m.validate();
  const auto p = thm1_params(m);
  const auto c = hm.at(0.0);
  const double eps = m.eps(), a3 = m.alpha * m.alpha * m.alpha, dt = m.pow(-kDt);
  const num::State s0{eps * c.q, -a3 * (1.0 - eps * c.qp / c.q), -c.q};
  auto rhs = [m, p, dt](double ts, const num::State& s) {
    const double th = to_hard_coords(m, 0.0, ts).t;
    auto [qp, yp] = piii::coupled_rhs(p, {th, s[0], s[1]});
    return num::State{dt * qp, dt * yp, dt * s[1] * s[2]};
  };
  return {m, detail::outward(rhs, s0, w.t_min, w.t_max, w.tol)};
}

// Seed: q = eps q_s, q' = alpha^{7/3} q_s', S+- = sqrt(1 - q^2) S+_s^{+-1}.
inline HardThm2 hard_thm2(const ScaleMap& m, const pii::HMSolution& hm, double s_plus0 = 1.0,
                          const Window& w = {}) {
  m.validate();
  const auto c = hm.at(0.0);
  const double eps = m.eps(), dt = m.pow(-kDt), a = m.a();
  const double q0 = eps * c.q, root = std::sqrt(1.0 - q0 * q0);
  const num::State s0{q0, m.pow({7}) * c.qp, root * s_plus0, root / s_plus0};
  auto rhs = [m, a, dt](double ts, const num::State& s) {
    const double th = to_hard_coords(m, 0.0, ts).t;
    const num::State d = piii::tw_system(a)(th, s);
    return num::State{dt * d[0], dt * d[1], dt * d[2], dt * d[3]};
  };
  return {m, detail::outward(rhs, s0, w.t_min, w.t_max, w.tol)};
}

// Fields of the first hard pair at soft time ts, derivatives in hard time.
inline lax::Thm1Fields thm1_fields(const HardThm1& h, double ts) {
  const auto p = thm1_params(h.map);
  const num::State s = h.traj.state_at(ts);
  const double th = to_hard_coords(h.map, 0.0, ts).t;
  auto [qp, yp] = piii::coupled_rhs(p, {th, s[0], s[1]});
  return {{s[0], qp}, {s[1], yp}, {s[2], s[1] * s[2]}};
}

inline lax::Thm2Fields thm2_fields(const HardThm2& h, double ts) {
  const num::State s = h.traj.state_at(ts);
  const double th = to_hard_coords(h.map, 0.0, ts).t, a = h.map.a();
  const double qpp = piii::tw_rhs(a, th, s[0], s[1]);
  auto [sp, sm] = piii::spm_rhs(a, th, s[0], s[1], {th, s[2], s[3]});
  return {{s[0], s[1]}, {s[1], qpp}, {s[2], sp}, {s[3], sm}};
}

// Residuals of y1' = r1 - y1^2 + t and r1' = 2 y1 r1 on scaled data.
struct OdeResidual {
  double y_eq = 0.0;
  double r_eq = 0.0;
  [[nodiscard]] double max() const { return std::max(std::abs(y_eq), std::abs(r_eq)); }
};

inline OdeResidual limit_residual_at(double t, double y1, double dy1, double r1, double dr1) {
  return {dy1 - (r1 - y1 * y1 + t), dr1 - 2.0 * y1 * r1};
}

inline double limit_ode_residual(const HardThm1& h, const Window& w = {}) {
  const ScaleMap& m = h.map;
  // dt_hard/dt_soft = alpha^{-8/3}.
  const double eps = m.eps(), a3 = m.alpha * m.alpha * m.alpha, dt = m.pow(-kDt);
  double worst = 0;
  for (int i = 0; i < w.nt; ++i) {
    const double ts = w.t_min + (w.t_max - w.t_min) * i / (w.nt - 1);
    const auto f = thm1_fields(h, ts);
    const double th = to_hard_coords(m, 0.0, ts).t;
    // r from y through the family-A relation; r + 1 = 2 q^2 on the solution.
    const double r = piii::r_from_y(m.a(), th, f.y.v, f.y.d);
    const auto s = scale_hard_functions(m, ts, {.y = f.y.v, .r = r, .q = f.q.v}, Route::thm1a);
    const double dy1 = dt * f.y.d / (a3 * eps);
    const double dr1 = dt * 4.0 * f.q.v * f.q.d / (eps * eps);
    worst = std::max(worst, limit_residual_at(ts, s.y, dy1, s.r, dr1).max());
  }
  return worst;
}

// The same residual from exact soft data: y1 = q'/q, r1 = 2 q^2.
inline double limit_ode_residual_soft(const pii::HMSolution& hm, const Window& w = {}) {
  double worst = 0;
  for (int i = 0; i < w.nt; ++i) {
    const double t = w.t_min + (w.t_max - w.t_min) * i / (w.nt - 1);
    const auto p = hm.at(t);
    const double qpp = pii::pii_rhs(t, p.q);
    const double y1 = p.qp / p.q, dy1 = qpp / p.q - y1 * y1;
    worst = std::max(worst, limit_residual_at(t, y1, dy1, 2 * p.q * p.q, 4 * p.q * p.qp).max());
  }
  return worst;
}

// Gauge applied to the hard pair before comparison.
enum class Gauge { full, no_exponential };

struct PairDistance {
  double L = 0.0;
  double B = 0.0;
  [[nodiscard]] double max() const { return std::max(L, B); }
};

// L_cand = alpha^{2/3} D^{-1} L_h D, B_cand = alpha^{-8/3} D^{-1} B_h D - D^{-1} D_t
// with D = diag(alpha^{-2/3}, e^{alpha^{1/3} t}).
inline std::pair<Matrix2, Matrix2> scaled_thm1a(const HardThm1& h, double ts, double xs,
                                                Gauge g = Gauge::full) {
  const ScaleMap& m = h.map;
  const auto hp = to_hard_coords(m, xs, ts);
  const auto c = lax::thm1a_coeffs(m.a(), hp.t, thm1_fields(h, ts));
  const Matrix2 L = lax::detail::laurent(c.L, hp.x), B = lax::detail::laurent(c.B, hp.x);
  const double d1 = m.pow(kF);
  const double d2 = g == Gauge::full ? std::exp(m.pow({1}) * ts) : 1.0;
  const double shift = g == Gauge::full ? m.pow({1}) : 0.0;
  auto conj = [&](const Matrix2& M) {
    return Matrix2{M.a11, M.a12 * d2 / d1, M.a21 * d1 / d2, M.a22};
  };
  Matrix2 Lc = m.pow(-kL) * conj(L);
  Matrix2 Bc = m.pow(-kB) * conj(B);
  Bc.a22 -= shift;
  return {Lc, Bc};
}

inline std::pair<Matrix2, Matrix2> scaled_thm2(const HardThm2& h, double ts, double xs) {
  const ScaleMap& m = h.map;
  const auto hp = to_hard_coords(m, xs, ts);
  const auto c = lax::thm2_coeffs(m.a(), hp.t, thm2_fields(h, ts));
  return {m.pow(-kL) * lax::detail::laurent(c.L, hp.x), m.pow(-kB) * lax::detail::laurent(c.B, hp.x)};
}

template <class Cand>
PairDistance window_distance(Cand cand, const lax::LaxAssembly& soft, const Window& w) {
  PairDistance d;
  for (int i = 0; i < w.nt; ++i) {
    const double ts = w.t_min + (w.t_max - w.t_min) * i / (w.nt - 1);
    for (int j = 0; j < w.nx; ++j) {
      const double xs = w.x_min + (w.x_max - w.x_min) * j / (w.nx - 1);
      const auto [Lc, Bc] = cand(ts, xs);
      // The soft pairs are polynomial in x, so x = 0 is regular there.
      const auto p = soft.pole_structure(ts);
      const Matrix2 Ls = lax::detail::laurent(p.L, xs), Bs = lax::detail::laurent(p.B, xs);
      d.L = std::max(d.L, norm_max(Lc - Ls));
      d.B = std::max(d.B, norm_max(Bc - Bs));
    }
  }
  return d;
}

inline PairDistance limit_pair_distance_thm4(const HardThm1& h, const pii::HMSolution& hm,
                                             const Window& w = {}, Gauge g = Gauge::full) {
  return window_distance([&](double ts, double xs) { return scaled_thm1a(h, ts, xs, g); },
                         lax::assemble_soft_thm4(lax::soft_source(hm)), w);
}

inline PairDistance limit_pair_distance_thm5(const HardThm2& h, const pii::HMSolution& hm,
                                             double s_plus0 = 1.0, const Window& w = {}) {
  const auto soft =
      lax::assemble_soft_thm5(lax::soft_source(hm, lax::spm_soft_table(hm, 0.0, s_plus0)));
  return window_distance([&](double ts, double xs) { return scaled_thm2(h, ts, xs); }, soft, w);
}

// One alpha of the sweep.
struct SweepRecord {
  double alpha = 0.0;
  double ode_residual = 0.0;
  PairDistance thm4;
  PairDistance thm5;
  PairDistance thm4_no_exponential;
};

inline SweepRecord sweep_point(double alpha, const pii::HMSolution& hm, const Window& w = {}) {
  const ScaleMap m{alpha};
  const auto h1 = hard_thm1(m, hm, w);
  const auto h2 = hard_thm2(m, hm, 1.0, w);
  return {alpha, limit_ode_residual(h1, w), limit_pair_distance_thm4(h1, hm, w),
          limit_pair_distance_thm5(h2, hm, 1.0, w),
          limit_pair_distance_thm4(h1, hm, w, Gauge::no_exponential)};
}

// Soft-edge data on the window, with margins for dense output.
inline pii::HMSolution soft_reference(const Window& w = {}) {
  return pii::solve_hastings_mcleod(std::min(w.t_min, -4.0), std::max(w.t_max, 6.0));
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

inline nlohmann::ordered_json sweep_json(const std::vector<SweepRecord>& recs, const Window& w) {
  nlohmann::ordered_json j;
  j["exponents"] = {{"x_window", Exponent{-1}.str()},
                    {"t_window", Exponent{-2}.str()},
                    {"d_dx", kDx.str()},
                    {"d_dt", kDt.str()},
                    {"delta_y", kDeltaY.str()},
                    {"delta_r", kDeltaR.str()},
                    {"q", kQ.str()},
                    {"L", kL.str()},
                    {"B", kB.str()},
                    {"F", kF.str()},
                    {"operator", kOperator.str()}};
  j["window"] = {{"t", {w.t_min, w.t_max}}, {"x", {w.x_min, w.x_max}}, {"nt", w.nt}, {"nx", w.nx}};
  auto arr = nlohmann::ordered_json::array();
  std::vector<double> ode, d4, d5;
  for (const auto& r : recs) {
    arr.push_back({{"alpha", r.alpha},
                   {"ode_residual", r.ode_residual},
                   {"thm4_distance", r.thm4.max()},
                   {"thm4_distance_L", r.thm4.L},
                   {"thm4_distance_B", r.thm4.B},
                   {"thm5_distance", r.thm5.max()},
                   {"thm5_distance_L", r.thm5.L},
                   {"thm5_distance_B", r.thm5.B},
                   {"thm4_without_exponential_gauge", r.thm4_no_exponential.max()}});
    ode.push_back(r.ode_residual);
    d4.push_back(r.thm4.max());
    d5.push_back(r.thm5.max());
  }
  j["records"] = arr;
  j["decreasing"] = {{"ode_residual", strictly_decreasing(ode)},
                     {"thm4_distance", strictly_decreasing(d4)},
                     {"thm5_distance", strictly_decreasing(d5)}};
  return j;
}

}  // namespace hardedge::limits
